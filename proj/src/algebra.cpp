#include "olap/algebra.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "olap/text.hpp"

namespace olap {

namespace {

struct AxisSchema {
  const Dimension* dim;
  const Hierarchy* hier;
};

AxisSchema lookup_axis(const Constellation& c, std::string_view dim, std::string_view hier) {
  const Dimension* d = c.find_dimension(dim);
  if (!d) throw Error(ErrorCode::UnknownDimension, "unknown dimension " + std::string(dim));
  const Hierarchy* h = d->find_hierarchy(hier);
  if (!h) {
    throw Error(ErrorCode::UnknownHierarchy,
                "dimension " + d->name + " has no hierarchy " + std::string(hier));
  }
  return {d, h};
}

void check_threshold(std::optional<double> t) {
  if (t && (*t < 0.0 || *t > 1.0)) {
    throw Error(ErrorCode::InvalidThreshold, "threshold " + format_number(*t) + " is outside [0, 1]");
  }
}

ContextAxis context_axis(const Axis& a) { return {a.dimension, a.hierarchy, a.attributes}; }

OperationContext base_context(EventKind kind, const Subject& s, const Axis& rows, const Axis& cols) {
  OperationContext ctx;
  ctx.event = kind;
  ctx.fact = s.fact;
  ctx.measures = s.measures;
  ctx.rows = context_axis(rows);
  ctx.cols = context_axis(cols);
  return ctx;
}

WeightAssignment fire(const OperatorEnv& env, const OperationContext& ctx) {
  WeightAssignment wa = env.rules.fire(env.profile, ctx);
  if (env.fired) *env.fired = wa;
  return wa;
}

// Which side of the table holds `dim`.
Axis& axis_of(MultidimTable& t, std::string_view dim) {
  if (iequals(t.rows.dimension, dim)) return t.rows;
  if (iequals(t.cols.dimension, dim)) return t.cols;
  throw Error(ErrorCode::DimNotInTable, std::string(dim) + " is not displayed in the table (rows " +
                                            t.rows.dimension + ", columns " + t.cols.dimension + ")");
}

MultidimTable finish(const OperatorEnv& env, MultidimTable t) {
  t.grid = compute_grid(env.data, t.subject, t.rows, t.cols, t.restriction);
  validate_table(env.data.schema(), t);
  return t;
}

// Canonical parameter (or `All`) of `h` named `attr`; weak attributes are not
// valid forage targets.
std::string forage_target(const Dimension& d, const Hierarchy& h, std::string_view attr) {
  if (iequals(attr, "All")) return "All";
  if (auto l = h.param_level(attr)) return h.params[*l];
  if (h.weak_owner(attr)) {
    throw Error(ErrorCode::AttrNotInHierarchy,
                std::string(attr) + " is a weak attribute of " + d.name + "." + h.name +
                    ", not a parameter");
  }
  throw Error(ErrorCode::AttrNotInHierarchy,
              std::string(attr) + " is not a parameter of " + d.name + "." + h.name);
}

}  // namespace

int finest_displayed_level(const Constellation& c, const Axis& axis) {
  const auto [d, h] = lookup_axis(c, axis.dimension, axis.hierarchy);
  int finest = h->all_level();
  for (const auto& a : axis.attributes) finest = std::min(finest, granularity_level(*d, *h, a));
  return finest;
}

CellGrid compute_grid(const DataStore& data, const Subject& s, const Axis& rows, const Axis& cols,
                      const Restriction& r) {
  const Constellation& c = data.schema();
  auto refs = [&](const Axis& a) {
    std::vector<ElementRef> out;
    const auto [d, h] = lookup_axis(c, a.dimension, a.hierarchy);
    for (const auto& attr : a.attributes) {
      auto kind = h->param_level(attr) ? ElementKind::Parameter : ElementKind::WeakAttribute;
      out.push_back({kind, {d->name, h->name, *h->canonical(attr)}});
    }
    return out;
  };
  return data.aggregate(s.fact, s.measures, refs(rows), refs(cols), r);
}

void validate_table(const Constellation& c, const MultidimTable& t) {
  auto fail = [](const std::string& why) { throw std::logic_error("invalid table: " + why); };
  if (!c.find_fact(t.subject.fact)) fail("unknown fact " + t.subject.fact);
  if (t.subject.measures.empty()) fail("no measure");
  if (iequals(t.rows.dimension, t.cols.dimension)) fail("same dimension on both axes");
  for (const Axis* a : {&t.rows, &t.cols}) {
    if (!c.is_starred(t.subject.fact, a->dimension)) fail(a->dimension + " not connected to the fact");
    const Dimension* d = c.find_dimension(a->dimension);
    const Hierarchy* h = d ? d->find_hierarchy(a->hierarchy) : nullptr;
    if (!h) fail("unknown hierarchy " + a->dimension + "." + a->hierarchy);
    std::set<std::string> seen;
    for (const auto& attr : a->attributes) {
      if (!h->contains(attr)) fail(attr + " not in " + h->name);
      if (!seen.insert(fold_case(attr)).second) fail(attr + " displayed twice");
    }
    if (order_attributes(*h, a->attributes) != a->attributes) {
      fail("attributes of " + a->dimension + " out of granularity order");
    }
  }
}

MultidimTable display(const OperatorEnv& env, std::string_view fact,
                      const std::vector<MeasureSpec>& specs, std::string_view row_dim,
                      std::string_view row_hier, std::string_view col_dim,
                      std::string_view col_hier, std::optional<double> threshold) {
  check_threshold(threshold);
  const Constellation& c = env.data.schema();
  const Fact* f = c.find_fact(fact);
  if (!f) throw Error(ErrorCode::UnknownFact, "unknown fact " + std::string(fact));
  if (specs.empty()) throw Error(ErrorCode::EmptyMeasureList, "DISPLAY needs at least one measure");
  auto rows = lookup_axis(c, row_dim, row_hier);
  auto cols = lookup_axis(c, col_dim, col_hier);
  for (const auto* d : {rows.dim, cols.dim}) {
    if (!c.is_starred(f->name, d->name)) {
      throw Error(ErrorCode::FactNotStarred, f->name + " is not connected to " + d->name);
    }
  }
  if (rows.dim == cols.dim) {
    throw Error(ErrorCode::SameDimensionOnBothAxes, rows.dim->name + " requested on both axes");
  }

  MultidimTable t;
  t.subject.fact = f->name;
  for (const auto& s : specs) {
    const MeasureSpec* m = f->find_measure(s.measure);
    if (!m) throw Error(ErrorCode::UnknownMeasure, f->name + " has no measure " + s.measure);
    MeasureSpec canonical{s.agg, m->measure};
    if (std::find(t.subject.measures.begin(), t.subject.measures.end(), canonical) ==
        t.subject.measures.end()) {
      t.subject.measures.push_back(canonical);
    }
  }
  t.rows = {rows.dim->name, rows.hier->name, {rows.hier->coarsest()}};
  t.cols = {cols.dim->name, cols.hier->name, {cols.hier->coarsest()}};

  if (threshold) {
    auto ctx = base_context(EventKind::Displayed, t.subject, t.rows, t.cols);
    WeightAssignment wa = fire(env, ctx);
    t.rows.attributes = qualified_attributes(wa, *threshold, *rows.dim, *rows.hier, 0, std::nullopt);
    t.cols.attributes = qualified_attributes(wa, *threshold, *cols.dim, *cols.hier, 0, std::nullopt);
    // requested measures stay; weighted ones are appended
    auto add = [&](MeasureSpec spec) {
      if (std::find(t.subject.measures.begin(), t.subject.measures.end(), spec) ==
          t.subject.measures.end()) {
        t.subject.measures.push_back(std::move(spec));
      }
    };
    for (const auto& m : f->measures) {
      if (wa.weight({ElementKind::Measure, {f->name, m.measure}}).value_or(0.0) >= *threshold) add(m);
    }
    for (const auto& e : wa.entries()) {
      if (e.element.kind == ElementKind::AggregatedMeasure && iequals(e.element.path[0], f->name) &&
          e.weight >= *threshold) {
        add({*parse_agg(e.element.path[1]), e.element.path[2]});
      }
    }
  }
  return finish(env, std::move(t));
}

MultidimTable rotate(const OperatorEnv& env, const MultidimTable& src, std::string_view old_dim,
                     std::string_view new_dim, std::string_view new_hier,
                     std::optional<double> threshold) {
  check_threshold(threshold);
  const Constellation& c = env.data.schema();
  MultidimTable t = src;
  Axis& moved = axis_of(t, old_dim);
  const Axis& kept = (&moved == &t.rows) ? t.cols : t.rows;
  auto target = lookup_axis(c, new_dim, new_hier);
  if (!c.is_starred(t.subject.fact, target.dim->name)) {
    throw Error(ErrorCode::FactNotStarred, t.subject.fact + " is not connected to " + target.dim->name);
  }
  if (iequals(target.dim->name, kept.dimension)) {
    throw Error(ErrorCode::RotationTargetConflict,
                target.dim->name + " is already displayed on the other axis");
  }
  std::string from = moved.dimension;
  moved = {target.dim->name, target.hier->name, {target.hier->coarsest()}};

  if (threshold) {
    auto ctx = base_context(EventKind::Rotated, t.subject, t.rows, t.cols);
    ctx.from_dim = from;
    ctx.to_dim = target.dim->name;
    WeightAssignment wa = fire(env, ctx);
    moved.attributes = qualified_attributes(wa, *threshold, *target.dim, *target.hier, 0, std::nullopt);
  }
  return finish(env, std::move(t));
}

MultidimTable drilldown(const OperatorEnv& env, const MultidimTable& src, std::string_view dim,
                        std::string_view attr, std::optional<double> threshold) {
  check_threshold(threshold);
  const Constellation& c = env.data.schema();
  MultidimTable t = src;
  Axis& axis = axis_of(t, dim);
  const auto [d, h] = lookup_axis(c, axis.dimension, axis.hierarchy);
  std::string target = forage_target(*d, *h, attr);
  if (target == "All") {
    throw Error(ErrorCode::AttrNotFiner, "cannot drill down to All");
  }
  int level = granularity_level(*d, *h, target);
  int finest = finest_displayed_level(c, axis);
  if (level >= finest) {
    throw Error(ErrorCode::AttrNotFiner,
                target + " is not finer than the finest displayed level of " + d->name);
  }
  std::vector<std::string> prospective = axis.attributes;
  prospective.push_back(target);
  prospective = order_attributes(*h, std::move(prospective));

  if (!threshold) {
    axis.attributes = std::move(prospective);
  } else {
    axis.attributes = prospective;
    auto ctx = base_context(EventKind::DrilledDown, t.subject, t.rows, t.cols);
    ctx.target_dim = d->name;
    ctx.target_param = target;
    ctx.target_hier = h->name;
    WeightAssignment wa = fire(env, ctx);
    axis.attributes = qualified_attributes(wa, *threshold, *d, *h, level, target);
  }
  return finish(env, std::move(t));
}

MultidimTable rollup(const OperatorEnv& env, const MultidimTable& src, std::string_view dim,
                     std::string_view attr, std::optional<double> threshold) {
  check_threshold(threshold);
  const Constellation& c = env.data.schema();
  MultidimTable t = src;
  Axis& axis = axis_of(t, dim);
  const auto [d, h] = lookup_axis(c, axis.dimension, axis.hierarchy);
  std::string target = forage_target(*d, *h, attr);
  int level = granularity_level(*d, *h, target);
  int finest = finest_displayed_level(c, axis);
  if (level < finest) {
    throw Error(ErrorCode::AttrNotCoarser,
                target + " is finer than the finest displayed level of " + d->name);
  }
  std::vector<std::string> prospective;
  for (const auto& a : axis.attributes) {
    if (granularity_level(*d, *h, a) >= level) prospective.push_back(a);
  }
  if (target != "All" &&
      std::none_of(prospective.begin(), prospective.end(), [&](const auto& a) { return a == target; })) {
    prospective.push_back(target);
  }
  prospective = order_attributes(*h, std::move(prospective));

  axis.attributes = prospective;
  if (threshold) {
    auto ctx = base_context(EventKind::RolledUp, t.subject, t.rows, t.cols);
    ctx.target_dim = d->name;
    ctx.target_param = target;
    ctx.target_hier = h->name;
    WeightAssignment wa = fire(env, ctx);
    axis.attributes = qualified_attributes(wa, *threshold, *d, *h, level, target);
    if (target == "All") axis.attributes.clear();
  }
  return finish(env, std::move(t));
}

}  // namespace olap
