#pragma once

#include <string>

#include "json.hpp"
#include "olap/algebra.hpp"
#include "olap/rule_engine.hpp"

namespace olap {

/// Fixed-layout text grid: column-axis header lines on top, row-axis header
/// columns on the left, numbers right-aligned, absent cells blank. A header
/// value repeated from the previous line (or column) under the same parent
/// values is blanked, giving a merged-cell look.
std::string render_text(const MultidimTable& t);

/// Wire payload: subject, axis specs, headers and the present cells.
nlohmann::json table_to_json(const MultidimTable& t);

nlohmann::json weights_to_json(const WeightAssignment& wa);
std::string render_weights(const WeightAssignment& wa);

nlohmann::json schema_to_json(const Constellation& c);

}  // namespace olap
