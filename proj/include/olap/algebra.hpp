#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "olap/data_store.hpp"
#include "olap/rule_engine.hpp"
#include "olap/schema.hpp"

namespace olap {

/// One analysis axis: current dimension, current hierarchy and displayed
/// attributes (coarsest first). The implicit `All` level always heads the
/// list; an empty list means only `All` is displayed.
struct Axis {
  std::string dimension;
  std::string hierarchy;
  std::vector<std::string> attributes;

  friend bool operator==(const Axis&, const Axis&) = default;
};

struct Subject {
  std::string fact;
  std::vector<MeasureSpec> measures;

  friend bool operator==(const Subject&, const Subject&) = default;
};

/// Multidimensional table (subject, row axis, column axis, restriction) with
/// its computed cells.
struct MultidimTable {
  Subject subject;
  Axis rows;
  Axis cols;
  Restriction restriction;
  CellGrid grid;

  friend bool operator==(const MultidimTable&, const MultidimTable&) = default;
};

/// Read-only inputs of every operator: data snapshot, rule snapshot and the
/// analyst profile whose rules apply.
struct OperatorEnv {
  const DataStore& data;
  const RuleEngine& rules;
  std::string profile;
  /// When set, receives the weights fired by a personalized operation.
  WeightAssignment* fired = nullptr;
};

/// DISPLAY: builds a first table. Without a threshold each axis shows the
/// coarsest parameter of its hierarchy.
MultidimTable display(const OperatorEnv& env, std::string_view fact,
                      const std::vector<MeasureSpec>& specs, std::string_view row_dim,
                      std::string_view row_hier, std::string_view col_dim,
                      std::string_view col_hier, std::optional<double> threshold = std::nullopt);

/// ROTATE: replaces dimension `old_dim` of the table by `new_dim` along `new_hier`.
MultidimTable rotate(const OperatorEnv& env, const MultidimTable& t, std::string_view old_dim,
                     std::string_view new_dim, std::string_view new_hier,
                     std::optional<double> threshold = std::nullopt);

/// DRILLDOWN: adds the finer parameter `attr` to the axis holding `dim`.
MultidimTable drilldown(const OperatorEnv& env, const MultidimTable& t, std::string_view dim,
                        std::string_view attr, std::optional<double> threshold = std::nullopt);

/// ROLLUP: repositions the axis holding `dim` on the coarser `attr` (or `All`).
MultidimTable rollup(const OperatorEnv& env, const MultidimTable& t, std::string_view dim,
                     std::string_view attr, std::optional<double> threshold = std::nullopt);

/// Recomputes the cells of a table from its (S, L, C, R).
CellGrid compute_grid(const DataStore& data, const Subject& s, const Axis& rows, const Axis& cols,
                      const Restriction& r);

/// Checks every table invariant against the schema; throws std::logic_error.
void validate_table(const Constellation& c, const MultidimTable& t);

/// Finest granularity level displayed on an axis (`All` level when empty).
int finest_displayed_level(const Constellation& c, const Axis& axis);

}  // namespace olap
