#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "olap/error.hpp"

namespace olap {

enum class ValueKind { Text, Integer, Real };

struct Attribute {
  std::string name;
  ValueKind kind = ValueKind::Text;
};

struct WeakAttributes {
  std::string param;
  std::vector<std::string> attrs;
};

/// Elementary path of parameters, finest (level 0) first. The implicit `All`
/// level sits one above the last parameter and is never stored.
struct Hierarchy {
  std::string name;
  std::vector<std::string> params;
  std::vector<WeakAttributes> weak;

  std::optional<int> param_level(std::string_view name) const;
  /// Owning parameter of a weak attribute, if `name` is one.
  const std::string* weak_owner(std::string_view name) const;
  const std::vector<std::string>& weak_of(std::string_view param) const;
  bool contains(std::string_view attr) const;
  int all_level() const { return static_cast<int>(params.size()); }
  const std::string& coarsest() const { return params.back(); }
  const std::string& finest() const { return params.front(); }
  /// Canonical spelling of a parameter or weak attribute, if present.
  std::optional<std::string> canonical(std::string_view attr) const;
};

struct Dimension {
  std::string name;
  std::vector<Attribute> attributes;
  std::vector<Hierarchy> hierarchies;

  const Hierarchy* find_hierarchy(std::string_view name) const;
  const Attribute* find_attribute(std::string_view name) const;
  /// Finest parameter shared by every hierarchy; the instance key.
  const std::string& key() const { return hierarchies.front().finest(); }
};

enum class AggFn { Sum, Avg, Min, Max, Count };

std::string_view to_string(AggFn fn);
std::optional<AggFn> parse_agg(std::string_view name);

struct MeasureSpec {
  AggFn agg = AggFn::Sum;
  std::string measure;

  std::string label() const;  // "SUM(Montant)"
  friend bool operator==(const MeasureSpec&, const MeasureSpec&) = default;
  friend auto operator<=>(const MeasureSpec&, const MeasureSpec&) = default;
};

struct Fact {
  std::string name;
  std::vector<MeasureSpec> measures;  // measure name + default aggregation

  const MeasureSpec* find_measure(std::string_view name) const;
};

enum class ElementKind {
  Dimension,
  Hierarchy,
  Parameter,
  WeakAttribute,
  Fact,
  AggregatedMeasure,
  Measure,
};

std::string_view to_string(ElementKind kind);

/// Resolved reference to a constellation element. Paths hold canonical names:
///   Dimension {D}, Hierarchy {D,h}, Parameter/WeakAttribute {D,h,a},
///   Fact {F}, Measure {F,m}, AggregatedMeasure {F,AGG,m}.
struct ElementRef {
  ElementKind kind = ElementKind::Dimension;
  std::vector<std::string> path;

  bool is_attribute() const {
    return kind == ElementKind::Parameter || kind == ElementKind::WeakAttribute;
  }
  bool is_measure() const {
    return kind == ElementKind::Measure || kind == ElementKind::AggregatedMeasure;
  }
  /// Canonical spelling accepted back by resolve_element.
  std::string spelling() const;

  friend bool operator==(const ElementRef&, const ElementRef&) = default;
  friend auto operator<=>(const ElementRef&, const ElementRef&) = default;
};

/// Unresolved element as written in a rule or command: `a[b].c.d`.
struct ElementPath {
  std::vector<std::string> segments;
  bool bracketed = false;  // second segment was written in brackets
  SourcePos pos;

  std::string spelling() const;
  friend bool operator==(const ElementPath& a, const ElementPath& b) {
    return a.segments == b.segments && a.bracketed == b.bracketed;
  }
};

ElementPath parse_element_path(std::string_view text);

class Constellation {
 public:
  Constellation() = default;

  const std::string& name() const { return name_; }
  const std::vector<Fact>& facts() const { return facts_; }
  const std::vector<Dimension>& dimensions() const { return dimensions_; }
  /// Connected dimensions of a fact, in declared order.
  const std::vector<std::string>& star(std::string_view fact) const;

  const Fact* find_fact(std::string_view name) const;
  const Dimension* find_dimension(std::string_view name) const;
  bool is_starred(std::string_view fact, std::string_view dim) const;

 private:
  friend Constellation build_constellation(std::string, std::vector<Dimension>, std::vector<Fact>,
                                           std::map<std::string, std::vector<std::string>>);
  std::string name_;
  std::vector<Fact> facts_;
  std::vector<Dimension> dimensions_;
  std::map<std::string, std::vector<std::string>> star_;  // folded fact name -> dims
};

/// Validates every metamodel invariant and canonicalizes star references to
/// their declared spelling. Throws Error on the first violation.
Constellation build_constellation(std::string name, std::vector<Dimension> dims,
                                  std::vector<Fact> facts,
                                  std::map<std::string, std::vector<std::string>> star);

ElementRef resolve_element(const Constellation& c, std::string_view text);
ElementRef resolve_element(const Constellation& c, const ElementPath& path);

/// Parameter -> its index, weak attribute -> its owner's index, `All` -> one
/// above the coarsest parameter.
int granularity_level(const Dimension& d, const Hierarchy& h, std::string_view attr);

/// Parses the schema DDL (DEFINE DIMENSION / DEFINE FACT statements).
Constellation parse_schema(std::string_view source, std::string name = "constellation");

}  // namespace olap
