#include "olap/rule_engine.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "olap/text.hpp"

namespace olap {

void WeightAssignment::set(const ElementRef& e, double w, const std::string& rule) {
  entries_[e] = WeightEntry{e, w, rule};
}

std::optional<double> WeightAssignment::weight(const ElementRef& e) const {
  auto it = entries_.find(e);
  if (it == entries_.end()) return std::nullopt;
  return it->second.weight;
}

const WeightEntry* WeightAssignment::entry(const ElementRef& e) const {
  auto it = entries_.find(e);
  return it == entries_.end() ? nullptr : &it->second;
}

std::optional<double> WeightAssignment::attribute_weight(std::string_view dim, std::string_view hier,
                                                         std::string_view attr) const {
  for (const auto& [ref, entry] : entries_) {
    if (ref.is_attribute() && iequals(ref.path[0], dim) && iequals(ref.path[1], hier) &&
        iequals(ref.path[2], attr)) {
      return entry.weight;
    }
  }
  return std::nullopt;
}

std::vector<WeightEntry> WeightAssignment::entries() const {
  std::vector<WeightEntry> out;
  out.reserve(entries_.size());
  for (const auto& [_, e] : entries_) out.push_back(e);
  return out;
}

bool operator==(const WeightAssignment& a, const WeightAssignment& b) {
  if (a.entries_.size() != b.entries_.size()) return false;
  auto ia = a.entries_.begin();
  auto ib = b.entries_.begin();
  for (; ia != a.entries_.end(); ++ia, ++ib) {
    if (ia->first != ib->first || ia->second.weight != ib->second.weight) return false;
  }
  return true;
}

std::optional<std::string> RegistryEntry::hierarchy() const {
  if (attribute.is_attribute()) return attribute.path[1];
  return std::nullopt;
}

std::string RegistryEntry::attribute_name() const {
  if (attribute.kind == ElementKind::AggregatedMeasure) {
    return attribute.path[1] + "(" + attribute.path[2] + ")";
  }
  return attribute.path.back();
}

namespace {

bool opt_matches(const std::optional<std::string>& want, const std::string& have) {
  return !want || iequals(*want, have);
}

bool same_axis(const std::optional<ContextAxis>& axis, std::string_view dim, std::string_view hier) {
  return axis && iequals(axis->dimension, dim) && iequals(axis->hierarchy, hier);
}

bool axis_shows(const std::optional<ContextAxis>& axis, const ElementRef& e) {
  if (!same_axis(axis, e.path[0], e.path[1])) return false;
  return std::any_of(axis->attributes.begin(), axis->attributes.end(),
                     [&](const auto& a) { return iequals(a, e.path[2]); });
}

}  // namespace

bool event_matches(const EventPattern& p, const OperationContext& ctx) {
  if (p.kind != ctx.event) return false;
  switch (p.kind) {
    case EventKind::Displayed: return true;
    case EventKind::Rotated: return opt_matches(p.from_dim, ctx.from_dim) && opt_matches(p.to_dim, ctx.to_dim);
    case EventKind::DrilledDown:
    case EventKind::RolledUp:
      return opt_matches(p.on_dim, ctx.target_dim) && opt_matches(p.to_param, ctx.target_param) &&
             opt_matches(p.according_hier, ctx.target_hier);
  }
  return false;
}

bool evaluate_current(const OperationContext& ctx, const ElementRef& e) {
  switch (e.kind) {
    case ElementKind::Fact: return iequals(ctx.fact, e.path[0]);
    case ElementKind::Measure:
      return iequals(ctx.fact, e.path[0]) &&
             std::any_of(ctx.measures.begin(), ctx.measures.end(),
                         [&](const MeasureSpec& m) { return iequals(m.measure, e.path[1]); });
    case ElementKind::AggregatedMeasure:
      return iequals(ctx.fact, e.path[0]) &&
             std::any_of(ctx.measures.begin(), ctx.measures.end(), [&](const MeasureSpec& m) {
               return iequals(to_string(m.agg), e.path[1]) && iequals(m.measure, e.path[2]);
             });
    case ElementKind::Dimension:
      return (ctx.rows && iequals(ctx.rows->dimension, e.path[0])) ||
             (ctx.cols && iequals(ctx.cols->dimension, e.path[0]));
    case ElementKind::Hierarchy:
      return same_axis(ctx.rows, e.path[0], e.path[1]) || same_axis(ctx.cols, e.path[0], e.path[1]);
    case ElementKind::Parameter:
    case ElementKind::WeakAttribute: return axis_shows(ctx.rows, e) || axis_shows(ctx.cols, e);
  }
  return false;
}

bool evaluate_condition(const OperationContext& ctx, const ResolvedCondition& c) {
  switch (c.op) {
    case Condition::Op::Current: return evaluate_current(ctx, c.element);
    case Condition::Op::Not: return !evaluate_condition(ctx, c.operands.front());
    case Condition::Op::And:
      return std::all_of(c.operands.begin(), c.operands.end(),
                         [&](const auto& o) { return evaluate_condition(ctx, o); });
    case Condition::Op::Or:
      return std::any_of(c.operands.begin(), c.operands.end(),
                         [&](const auto& o) { return evaluate_condition(ctx, o); });
  }
  return false;
}

namespace {

void push_hierarchy(const Dimension& d, const Hierarchy& h, std::vector<ElementRef>& out) {
  for (const auto& p : h.params) {
    out.push_back({ElementKind::Parameter, {d.name, h.name, p}});
    for (const auto& w : h.weak_of(p)) out.push_back({ElementKind::WeakAttribute, {d.name, h.name, w}});
  }
}

}  // namespace

std::vector<ElementRef> expand_element(const Constellation& c, const ElementRef& e) {
  std::vector<ElementRef> out;
  switch (e.kind) {
    case ElementKind::Dimension: {
      const Dimension* d = c.find_dimension(e.path[0]);
      for (const auto& h : d->hierarchies) push_hierarchy(*d, h, out);
      break;
    }
    case ElementKind::Hierarchy: {
      const Dimension* d = c.find_dimension(e.path[0]);
      push_hierarchy(*d, *d->find_hierarchy(e.path[1]), out);
      break;
    }
    case ElementKind::Fact: {
      const Fact* f = c.find_fact(e.path[0]);
      for (const auto& m : f->measures) out.push_back({ElementKind::Measure, {f->name, m.measure}});
      break;
    }
    default: out.push_back(e);
  }
  return out;
}

namespace {

ElementRef resolve_or_throw(const Constellation& c, const ElementPath& p) {
  try {
    return resolve_element(c, p);
  } catch (const Error& e) {
    throw Error(ErrorCode::UnresolvedElement, e.message(), p.pos);
  }
}

ResolvedCondition resolve_condition(const Constellation& c, const Condition& cond) {
  ResolvedCondition out;
  out.op = cond.op;
  if (cond.op == Condition::Op::Current) out.element = resolve_or_throw(c, cond.element);
  for (const auto& o : cond.operands) out.operands.push_back(resolve_condition(c, o));
  return out;
}

[[noreturn]] void unresolved_qualifier(const std::string& what, const std::string& name,
                                       const Rule& rule) {
  throw Error(ErrorCode::UnresolvedElement,
              "rule " + rule.name + ": unknown " + what + " '" + name + "'", rule.pos);
}

std::string canonical_dimension(const Constellation& c, const std::string& name, const Rule& rule) {
  const Dimension* d = c.find_dimension(name);
  if (!d) unresolved_qualifier("dimension", name, rule);
  return d->name;
}

EventPattern resolve_event(const Constellation& c, const EventPattern& e, const Rule& rule) {
  EventPattern out = e;
  if (e.from_dim) out.from_dim = canonical_dimension(c, *e.from_dim, rule);
  if (e.to_dim) out.to_dim = canonical_dimension(c, *e.to_dim, rule);
  if (e.on_dim) out.on_dim = canonical_dimension(c, *e.on_dim, rule);

  std::vector<const Dimension*> dims;
  if (out.on_dim) {
    dims.push_back(c.find_dimension(*out.on_dim));
  } else {
    for (const auto& d : c.dimensions()) dims.push_back(&d);
  }
  const Hierarchy* hier = nullptr;
  if (e.according_hier) {
    for (const Dimension* d : dims) {
      if (const Hierarchy* h = d->find_hierarchy(*e.according_hier)) {
        if (hier) {
          throw Error(ErrorCode::UnresolvedElement,
                      "rule " + rule.name + ": hierarchy '" + *e.according_hier +
                          "' is ambiguous; add ON <dimension>",
                      rule.pos);
        }
        hier = h;
      }
    }
    if (!hier) unresolved_qualifier("hierarchy", *e.according_hier, rule);
    out.according_hier = hier->name;
  }
  if (e.to_param) {
    std::optional<std::string> found;
    auto scan = [&](const Hierarchy& h) {
      if (auto lvl = h.param_level(*e.to_param); lvl && !found) found = h.params[*lvl];
    };
    if (hier) {
      scan(*hier);
    } else {
      for (const Dimension* d : dims) {
        for (const auto& h : d->hierarchies) scan(h);
      }
    }
    if (!found && iequals(*e.to_param, "All")) found = "All";
    if (!found) unresolved_qualifier("parameter", *e.to_param, rule);
    out.to_param = *found;
  }
  return out;
}

}  // namespace

RegisteredRule resolve_rule(const Constellation& c, const Rule& rule) {
  RegisteredRule out;
  out.source = rule;
  out.target = resolve_or_throw(c, rule.target);
  if (out.target.kind != ElementKind::Dimension && out.target.kind != ElementKind::Hierarchy &&
      out.target.kind != ElementKind::Fact) {
    throw Error(ErrorCode::UnresolvedElement,
                "rule target '" + rule.target.spelling() + "' must be a dimension, hierarchy or fact",
                rule.target.pos);
  }
  for (const auto& e : rule.events) out.events.push_back(resolve_event(c, e, rule));
  if (rule.condition) out.condition = resolve_condition(c, *rule.condition);
  for (const auto& a : rule.actions) out.actions.push_back({resolve_or_throw(c, a.element), a.weight});
  return out;
}

void RuleEngine::register_rule(std::string_view profile_name, const Rule& rule) {
  if (!schema_) throw Error(ErrorCode::NoSchema, "no schema loaded");
  RegisteredRule reg = resolve_rule(*schema_, rule);
  auto key = fold_case(profile_name);
  auto it = profiles_.find(key);
  if (it != profiles_.end()) {
    for (const auto& r : it->second.rules) {
      if (iequals(r.source.name, rule.name)) {
        throw Error(ErrorCode::DuplicateRuleName,
                    "profile " + it->second.name + " already has a rule named " + rule.name, rule.pos);
      }
    }
  }
  Profile& p = profiles_[key];
  if (p.name.empty()) p.name = std::string(profile_name);
  if (!reg.condition) {
    for (const auto& ev : reg.events) {
      for (const auto& a : reg.actions) {
        for (const auto& e : expand_element(*schema_, a.element)) {
          p.registry.push_back({ev, e, a.weight, rule.name});
        }
      }
    }
  }
  p.rules.push_back(std::move(reg));
}

void RuleEngine::drop_rule(std::string_view profile_name, std::string_view name) {
  auto it = profiles_.find(fold_case(profile_name));
  if (it == profiles_.end()) {
    throw Error(ErrorCode::UnknownRule, "profile " + std::string(profile_name) + " has no rule " + std::string(name));
  }
  auto& p = it->second;
  auto r = std::find_if(p.rules.begin(), p.rules.end(),
                        [&](const auto& x) { return iequals(x.source.name, name); });
  if (r == p.rules.end()) {
    throw Error(ErrorCode::UnknownRule, "profile " + p.name + " has no rule " + std::string(name));
  }
  std::string canonical = r->source.name;
  p.rules.erase(r);
  std::erase_if(p.registry, [&](const RegistryEntry& e) { return e.rule == canonical; });
}

const Profile* RuleEngine::profile(std::string_view name) const {
  auto it = profiles_.find(fold_case(name));
  return it == profiles_.end() ? nullptr : &it->second;
}

std::vector<std::string> RuleEngine::profiles() const {
  std::vector<std::string> out;
  for (const auto& [_, p] : profiles_) out.push_back(p.name);
  return out;
}

WeightAssignment RuleEngine::lookup_registry(std::string_view profile_name,
                                             const OperationContext& ctx) const {
  WeightAssignment wa;
  const Profile* p = profile(profile_name);
  if (!p) return wa;
  for (const auto& e : p->registry) {
    if (event_matches(e.pattern, ctx)) wa.set(e.attribute, e.weight, e.rule);
  }
  return wa;
}

WeightAssignment RuleEngine::fire_kind(const Profile& p, const OperationContext& ctx) const {
  WeightAssignment wa;
  for (const auto& rule : p.rules) {
    bool triggered = std::any_of(rule.events.begin(), rule.events.end(),
                                 [&](const auto& ev) { return event_matches(ev, ctx); });
    if (!triggered) continue;
    const std::string& name = rule.source.name;
    if (!rule.condition) {
      for (const auto& e : p.registry) {
        if (e.rule == name && event_matches(e.pattern, ctx)) wa.set(e.attribute, e.weight, name);
      }
      continue;
    }
    if (!evaluate_condition(ctx, *rule.condition)) continue;
    for (const auto& a : rule.actions) {
      for (const auto& e : expand_element(*schema_, a.element)) wa.set(e, a.weight, name);
    }
  }
  return wa;
}

namespace {

// Shadowing unit: a dimension's hierarchy for attributes, the fact for measures.
std::pair<std::string, std::string> weight_group(const ElementRef& e) {
  if (e.is_attribute()) return {fold_case(e.path[0]), fold_case(e.path[1])};
  return {fold_case(e.path[0]), {}};
}

}  // namespace

WeightAssignment RuleEngine::fire(std::string_view profile_name, const OperationContext& ctx) const {
  const Profile* p = profile(profile_name);
  if (!p) return {};
  WeightAssignment wa = fire_kind(*p, ctx);
  if (ctx.event == EventKind::Displayed) return wa;

  OperationContext displayed = ctx;
  displayed.event = EventKind::Displayed;
  WeightAssignment defaults = fire_kind(*p, displayed);
  std::set<std::pair<std::string, std::string>> covered;
  for (const auto& e : wa.entries()) covered.insert(weight_group(e.element));
  for (const auto& e : defaults.entries()) {
    if (!covered.count(weight_group(e.element))) wa.set(e.element, e.weight, e.rule);
  }
  return wa;
}

std::vector<std::string> order_attributes(const Hierarchy& hier, std::vector<std::string> attrs) {
  // rank: (level descending, parameter before weak, declaration order)
  auto rank = [&](const std::string& a) {
    if (iequals(a, "All")) return std::tuple<int, int, int>{-(hier.all_level() + 1), 0, 0};
    if (auto l = hier.param_level(a)) return std::tuple<int, int, int>{-*l, 0, 0};
    const std::string* owner = hier.weak_owner(a);
    const auto& siblings = hier.weak_of(*owner);
    int idx = 0;
    for (std::size_t i = 0; i < siblings.size(); ++i) {
      if (iequals(siblings[i], a)) idx = static_cast<int>(i);
    }
    return std::tuple<int, int, int>{-*hier.param_level(*owner), 1, idx};
  };
  std::stable_sort(attrs.begin(), attrs.end(),
                   [&](const auto& a, const auto& b) { return rank(a) < rank(b); });
  return attrs;
}

std::vector<std::string> qualified_attributes(const WeightAssignment& wa, double threshold,
                                              const Dimension& dim, const Hierarchy& hier,
                                              int level_floor,
                                              const std::optional<std::string>& forced) {
  auto qualifies = [&](const std::string& attr) {
    if (forced && iequals(*forced, attr)) return true;
    return wa.attribute_weight(dim.name, hier.name, attr).value_or(0.0) >= threshold;
  };
  std::vector<std::string> out;
  bool has_param = false;
  for (int level = 0; level < static_cast<int>(hier.params.size()); ++level) {
    if (level < level_floor) continue;
    const auto& p = hier.params[level];
    if (qualifies(p)) {
      out.push_back(p);
      has_param = true;
    }
    for (const auto& w : hier.weak_of(p)) {
      if (qualifies(w)) out.push_back(w);
    }
  }
  if (!has_param && !forced) out.push_back(hier.coarsest());
  return order_attributes(hier, std::move(out));
}

}  // namespace olap
