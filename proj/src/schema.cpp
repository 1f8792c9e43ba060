#include "olap/schema.hpp"

#include <algorithm>
#include <set>

#include "olap/lexer.hpp"
#include "olap/text.hpp"

namespace olap {

std::optional<int> Hierarchy::param_level(std::string_view n) const {
  auto f = fold_case(n);
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (fold_case(params[i]) == f) return static_cast<int>(i);
  }
  return std::nullopt;
}

const std::string* Hierarchy::weak_owner(std::string_view n) const {
  auto f = fold_case(n);
  for (const auto& w : weak) {
    for (const auto& a : w.attrs) {
      if (fold_case(a) == f) return &w.param;
    }
  }
  return nullptr;
}

const std::vector<std::string>& Hierarchy::weak_of(std::string_view param) const {
  static const std::vector<std::string> none;
  for (const auto& w : weak) {
    if (iequals(w.param, param)) return w.attrs;
  }
  return none;
}

bool Hierarchy::contains(std::string_view attr) const {
  return param_level(attr).has_value() || weak_owner(attr) != nullptr;
}

std::optional<std::string> Hierarchy::canonical(std::string_view attr) const {
  if (auto l = param_level(attr)) return params[*l];
  auto f = fold_case(attr);
  for (const auto& w : weak) {
    for (const auto& a : w.attrs) {
      if (fold_case(a) == f) return a;
    }
  }
  return std::nullopt;
}

const Hierarchy* Dimension::find_hierarchy(std::string_view n) const {
  for (const auto& h : hierarchies) {
    if (iequals(h.name, n)) return &h;
  }
  return nullptr;
}

const Attribute* Dimension::find_attribute(std::string_view n) const {
  for (const auto& a : attributes) {
    if (iequals(a.name, n)) return &a;
  }
  return nullptr;
}

std::string_view to_string(AggFn fn) {
  switch (fn) {
    case AggFn::Sum: return "SUM";
    case AggFn::Avg: return "AVG";
    case AggFn::Min: return "MIN";
    case AggFn::Max: return "MAX";
    case AggFn::Count: return "COUNT";
  }
  return "SUM";
}

std::optional<AggFn> parse_agg(std::string_view name) {
  for (auto fn : {AggFn::Sum, AggFn::Avg, AggFn::Min, AggFn::Max, AggFn::Count}) {
    if (iequals(name, to_string(fn))) return fn;
  }
  return std::nullopt;
}

std::string MeasureSpec::label() const {
  return std::string(to_string(agg)) + "(" + measure + ")";
}

const MeasureSpec* Fact::find_measure(std::string_view n) const {
  for (const auto& m : measures) {
    if (iequals(m.measure, n)) return &m;
  }
  return nullptr;
}

std::string_view to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::Dimension: return "dimension";
    case ElementKind::Hierarchy: return "hierarchy";
    case ElementKind::Parameter: return "parameter";
    case ElementKind::WeakAttribute: return "weak-attribute";
    case ElementKind::Fact: return "fact";
    case ElementKind::AggregatedMeasure: return "aggregated-measure";
    case ElementKind::Measure: return "measure";
  }
  return "dimension";
}

std::string ElementRef::spelling() const {
  if (kind == ElementKind::AggregatedMeasure && path.size() == 3) {
    return path[0] + "[" + path[1] + "]." + path[2];
  }
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += '.';
    out += path[i];
  }
  return out;
}

std::string ElementPath::spelling() const {
  std::string out;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i == 1 && bracketed) {
      out += "[" + segments[i] + "]";
      continue;
    }
    if (i) out += '.';
    out += segments[i];
  }
  return out;
}

ElementPath parse_element_path(std::string_view text) {
  TokenStream ts(tokenize(text));
  ElementPath p;
  p.pos = ts.peek().pos;
  p.segments.push_back(ts.expect_ident("element name").text);
  if (ts.accept_symbol("[")) {
    p.segments.push_back(ts.expect_ident("hierarchy name").text);
    ts.expect_symbol("]");
    p.bracketed = true;
  }
  while (ts.accept_symbol(".")) p.segments.push_back(ts.expect_ident().text);
  if (!ts.at_end()) ts.fail("end of element");
  return p;
}

const std::vector<std::string>& Constellation::star(std::string_view fact) const {
  static const std::vector<std::string> none;
  auto it = star_.find(fold_case(fact));
  return it == star_.end() ? none : it->second;
}

const Fact* Constellation::find_fact(std::string_view n) const {
  for (const auto& f : facts_) {
    if (iequals(f.name, n)) return &f;
  }
  return nullptr;
}

const Dimension* Constellation::find_dimension(std::string_view n) const {
  for (const auto& d : dimensions_) {
    if (iequals(d.name, n)) return &d;
  }
  return nullptr;
}

bool Constellation::is_starred(std::string_view fact, std::string_view dim) const {
  const auto& dims = star(fact);
  return std::any_of(dims.begin(), dims.end(), [&](const auto& d) { return iequals(d, dim); });
}

namespace {

void check_unique(std::set<std::string>& seen, const std::string& name, std::string_view what) {
  if (name.empty()) throw Error(ErrorCode::DuplicateName, std::string(what) + " with empty name");
  if (!seen.insert(fold_case(name)).second) {
    throw Error(ErrorCode::DuplicateName, std::string(what) + " '" + name + "' declared twice");
  }
}

void validate_dimension(const Dimension& d) {
  std::set<std::string> attr_names;
  for (const auto& a : d.attributes) {
    check_unique(attr_names, a.name, "attribute of " + d.name);
    if (iequals(a.name, "All")) {
      throw Error(ErrorCode::DuplicateName, "attribute name 'All' is reserved (" + d.name + ")");
    }
  }
  if (d.hierarchies.empty()) {
    throw Error(ErrorCode::HierarchyAttributeMissing, "dimension " + d.name + " has no hierarchy");
  }
  std::set<std::string> hier_names;
  for (const auto& h : d.hierarchies) {
    check_unique(hier_names, h.name, "hierarchy of " + d.name);
    if (h.params.empty()) {
      throw Error(ErrorCode::HierarchyAttributeMissing,
                  "hierarchy " + d.name + "." + h.name + " has no parameter");
    }
    std::set<std::string> params;
    for (const auto& p : h.params) {
      if (!d.find_attribute(p)) {
        throw Error(ErrorCode::HierarchyAttributeMissing,
                    "hierarchy " + h.name + " references unknown attribute " + p);
      }
      check_unique(params, p, "parameter of " + h.name);
    }
    std::set<std::string> weak_seen;
    for (const auto& w : h.weak) {
      if (!h.param_level(w.param)) {
        throw Error(ErrorCode::InvalidWeakAttribute,
                    "weak attributes attached to " + w.param + ", which is not a parameter of " + h.name);
      }
      for (const auto& a : w.attrs) {
        if (!d.find_attribute(a)) {
          throw Error(ErrorCode::HierarchyAttributeMissing,
                      "hierarchy " + h.name + " references unknown attribute " + a);
        }
        if (h.param_level(a)) {
          throw Error(ErrorCode::InvalidWeakAttribute,
                      a + " is both a parameter and a weak attribute of " + h.name);
        }
        if (!weak_seen.insert(fold_case(a)).second) {
          throw Error(ErrorCode::InvalidWeakAttribute,
                      a + " is attached to more than one parameter of " + h.name);
        }
      }
    }
    if (!iequals(h.finest(), d.hierarchies.front().finest())) {
      throw Error(ErrorCode::HierarchyRootMismatch,
                  "hierarchies of " + d.name + " start from different parameters (" +
                      d.hierarchies.front().finest() + ", " + h.finest() + ")");
    }
  }
}

void canonicalize_hierarchy(const Dimension& d, Hierarchy& h) {
  for (auto& p : h.params) p = d.find_attribute(p)->name;
  for (auto& w : h.weak) {
    w.param = d.find_attribute(w.param)->name;
    for (auto& a : w.attrs) a = d.find_attribute(a)->name;
  }
}

}  // namespace

Constellation build_constellation(std::string name, std::vector<Dimension> dims,
                                  std::vector<Fact> facts,
                                  std::map<std::string, std::vector<std::string>> star) {
  std::set<std::string> names;
  for (const auto& d : dims) check_unique(names, d.name, "dimension");
  for (const auto& f : facts) check_unique(names, f.name, "fact");

  for (auto& d : dims) {
    validate_dimension(d);
    for (auto& h : d.hierarchies) canonicalize_hierarchy(d, h);
  }
  for (const auto& f : facts) {
    std::set<std::string> measures;
    for (const auto& m : f.measures) check_unique(measures, m.measure, "measure of " + f.name);
  }

  Constellation c;
  c.name_ = std::move(name);
  c.facts_ = std::move(facts);
  c.dimensions_ = std::move(dims);

  for (auto& [fact, targets] : star) {
    const Fact* f = c.find_fact(fact);
    if (!f) throw Error(ErrorCode::DanglingStarReference, "star references unknown fact " + fact);
    if (targets.empty()) throw Error(ErrorCode::EmptyStarEntry, "fact " + f->name + " connects no dimension");
    std::vector<std::string> canonical;
    std::set<std::string> seen;
    for (const auto& t : targets) {
      const Dimension* d = c.find_dimension(t);
      if (!d) {
        throw Error(ErrorCode::DanglingStarReference,
                    "fact " + f->name + " connects unknown dimension " + t);
      }
      if (seen.insert(fold_case(d->name)).second) canonical.push_back(d->name);
    }
    auto key = fold_case(f->name);
    if (c.star_.count(key)) {
      throw Error(ErrorCode::DuplicateName, "star lists fact " + f->name + " twice");
    }
    c.star_[key] = std::move(canonical);
  }
  for (const auto& f : c.facts_) {
    if (!c.star_.count(fold_case(f.name))) {
      throw Error(ErrorCode::EmptyStarEntry, "fact " + f.name + " connects no dimension");
    }
  }
  return c;
}

namespace {

[[noreturn]] void unresolved(const ElementPath& p, std::string_view why) {
  throw Error(ErrorCode::UnresolvedName, "cannot resolve '" + p.spelling() + "': " + std::string(why),
              p.pos);
}

ElementRef resolve_in_dimension(const Dimension& d, const ElementPath& p) {
  const auto& s = p.segments;
  if (s.size() == 2) {
    if (const Hierarchy* h = d.find_hierarchy(s[1]); h && !p.bracketed) {
      return {ElementKind::Hierarchy, {d.name, h->name}};
    }
    if (p.bracketed) {
      const Hierarchy* h = d.find_hierarchy(s[1]);
      if (!h) unresolved(p, "no hierarchy " + s[1] + " in " + d.name);
      return {ElementKind::Hierarchy, {d.name, h->name}};
    }
    // attribute without hierarchy qualifier
    std::vector<const Hierarchy*> owners;
    for (const auto& h : d.hierarchies) {
      if (h.contains(s[1])) owners.push_back(&h);
    }
    if (owners.empty()) unresolved(p, "no hierarchy or attribute " + s[1] + " in " + d.name);
    if (owners.size() > 1) {
      throw Error(ErrorCode::AmbiguousName,
                  "'" + p.spelling() + "' is an attribute of several hierarchies of " + d.name +
                      "; qualify it with a hierarchy",
                  p.pos);
    }
    const Hierarchy* h = owners.front();
    auto kind = h->param_level(s[1]) ? ElementKind::Parameter : ElementKind::WeakAttribute;
    return {kind, {d.name, h->name, *h->canonical(s[1])}};
  }
  if (s.size() == 3) {
    const Hierarchy* h = d.find_hierarchy(s[1]);
    if (!h) unresolved(p, "no hierarchy " + s[1] + " in " + d.name);
    if (h->param_level(s[2])) return {ElementKind::Parameter, {d.name, h->name, *h->canonical(s[2])}};
    if (h->weak_owner(s[2])) {
      return {ElementKind::WeakAttribute, {d.name, h->name, *h->canonical(s[2])}};
    }
    unresolved(p, "no attribute " + s[2] + " in " + d.name + "." + h->name);
  }
  unresolved(p, "too many segments");
}

ElementRef resolve_in_fact(const Fact& f, const ElementPath& p) {
  const auto& s = p.segments;
  if (s.size() == 2 && !p.bracketed) {
    if (const MeasureSpec* m = f.find_measure(s[1])) return {ElementKind::Measure, {f.name, m->measure}};
    unresolved(p, "no measure " + s[1] + " in " + f.name);
  }
  if (s.size() == 3) {
    auto agg = parse_agg(s[1]);
    if (!agg) unresolved(p, s[1] + " is not an aggregation function");
    const MeasureSpec* m = f.find_measure(s[2]);
    if (!m) unresolved(p, "no measure " + s[2] + " in " + f.name);
    return {ElementKind::AggregatedMeasure, {f.name, std::string(to_string(*agg)), m->measure}};
  }
  unresolved(p, "malformed measure reference");
}

}  // namespace

ElementRef resolve_element(const Constellation& c, const ElementPath& p) {
  if (p.segments.empty()) unresolved(p, "empty element");
  const auto& head = p.segments.front();
  if (p.segments.size() == 1) {
    if (const Fact* f = c.find_fact(head)) return {ElementKind::Fact, {f->name}};
    if (const Dimension* d = c.find_dimension(head)) return {ElementKind::Dimension, {d->name}};
    std::vector<ElementRef> hits;
    for (const auto& d : c.dimensions()) {
      if (const Hierarchy* h = d.find_hierarchy(head)) hits.push_back({ElementKind::Hierarchy, {d.name, h->name}});
    }
    if (hits.size() == 1) return hits.front();
    if (hits.size() > 1) {
      throw Error(ErrorCode::AmbiguousName,
                  "hierarchy '" + head + "' exists in several dimensions; qualify it", p.pos);
    }
    unresolved(p, "no fact, dimension or hierarchy of that name");
  }
  if (const Dimension* d = c.find_dimension(head)) return resolve_in_dimension(*d, p);
  if (const Fact* f = c.find_fact(head)) return resolve_in_fact(*f, p);
  unresolved(p, "no fact or dimension " + head);
}

ElementRef resolve_element(const Constellation& c, std::string_view text) {
  if (trim(text).empty()) throw Error(ErrorCode::UnresolvedName, "empty element reference");
  ElementPath p;
  try {
    p = parse_element_path(text);
  } catch (const Error& e) {
    throw Error(ErrorCode::UnresolvedName, "malformed element '" + std::string(text) + "': " + e.message(),
                e.position());
  }
  return resolve_element(c, p);
}

int granularity_level(const Dimension& d, const Hierarchy& h, std::string_view attr) {
  if (iequals(attr, "All")) return h.all_level();
  if (auto l = h.param_level(attr)) return *l;
  if (const std::string* owner = h.weak_owner(attr)) return *h.param_level(*owner);
  throw Error(ErrorCode::AttrNotInHierarchy,
              std::string(attr) + " is not an attribute of " + d.name + "." + h.name);
}

}  // namespace olap
