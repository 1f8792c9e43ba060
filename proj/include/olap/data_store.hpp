#pragma once

#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "olap/schema.hpp"

namespace olap {

using Tuple = std::vector<std::string>;

/// Instances of one dimension. Columns follow the schema's attribute order.
struct DimensionRows {
  std::string dimension;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::unordered_map<std::string, std::size_t> by_key;

  std::optional<std::size_t> column(std::string_view attr) const;
};

struct FactRow {
  std::vector<double> measures;   // fact measure order
  std::vector<std::string> keys;  // one dimension key per starred dimension
};

struct FactRows {
  std::string fact;
  std::vector<std::string> measures;
  std::vector<std::string> dimensions;  // star order
  std::vector<FactRow> rows;
};

enum class Comparator { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view to_string(Comparator op);

struct Predicate {
  ElementRef element;  // parameter, weak attribute or measure
  Comparator op = Comparator::Eq;
  std::string literal;

  std::string to_string() const;
  friend bool operator==(const Predicate&, const Predicate&) = default;
};

/// Conjunction of atomic predicates; empty means true.
struct Restriction {
  std::vector<Predicate> conjuncts;

  bool is_true() const { return conjuncts.empty(); }
  friend bool operator==(const Restriction&, const Restriction&) = default;
};

/// Parses `elem op literal [AND elem op literal]*`; literals are numbers,
/// identifiers or quoted strings.
Restriction parse_restriction(const Constellation& c, std::string_view text);

/// Compares numerically when both sides parse as numbers, else by codepoint.
bool compare_values(std::string_view lhs, Comparator op, std::string_view rhs);

/// Aggregated cells. Row/column headers are display tuples; cells are stored
/// row-major as [row][col][measure]. A missing value means no contributing
/// fact row, never zero.
struct CellGrid {
  std::vector<MeasureSpec> measures;
  std::vector<Tuple> row_headers;
  std::vector<Tuple> col_headers;
  std::vector<std::optional<double>> cells;

  std::optional<double> at(std::size_t row, std::size_t col, std::size_t measure = 0) const {
    return cells[(row * col_headers.size() + col) * measures.size() + measure];
  }
  std::optional<double> find(const Tuple& row, const Tuple& col, std::size_t measure = 0) const;
  std::size_t present_cells() const;

  friend bool operator==(const CellGrid&, const CellGrid&) = default;
};

/// Instances of the constellation's facts and dimensions. Treated as an
/// immutable snapshot once loading is complete.
class DataStore {
 public:
  explicit DataStore(std::shared_ptr<const Constellation> schema);

  const Constellation& schema() const { return *schema_; }
  std::shared_ptr<const Constellation> schema_ptr() const { return schema_; }

  void load_dimension(std::string_view dim, std::istream& csv);
  void load_fact(std::string_view fact, std::istream& csv);
  void put_dimension(DimensionRows rows);
  void put_fact(FactRows rows);

  const DimensionRows* dimension_rows(std::string_view dim) const;
  const FactRows* fact_rows(std::string_view fact) const;

  /// Groups the fact's rows by the displayed attributes of each axis (an empty
  /// axis is the `All` level) after applying the restriction.
  CellGrid aggregate(std::string_view fact, const std::vector<MeasureSpec>& specs,
                     const std::vector<ElementRef>& row_attrs,
                     const std::vector<ElementRef>& col_attrs,
                     const Restriction& r = {}) const;

 private:
  std::shared_ptr<const Constellation> schema_;
  std::map<std::string, DimensionRows> dims_;  // folded name
  std::map<std::string, FactRows> facts_;      // folded name
};

DimensionRows load_dimension_rows(const Constellation& c, std::string_view dim, std::istream& csv);
FactRows load_fact_rows(const Constellation& c, const DataStore& store, std::string_view fact,
                        std::istream& csv);

}  // namespace olap
