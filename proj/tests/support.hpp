#pragma once

#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "olap/algebra.hpp"
#include "olap/data_store.hpp"
#include "olap/rule.hpp"
#include "olap/rule_engine.hpp"
#include "olap/schema.hpp"
#include "olap/service.hpp"

namespace olap::testing {

// Cell values are integer-exact on the fixture; AVG on random data is
// compared with this absolute tolerance.
inline constexpr double kCellTolerance = 1e-9;

std::string fixture_path(const std::string& relative);
std::string read_text(const std::string& path);

std::shared_ptr<const Constellation> fixture_schema();
std::shared_ptr<const DataStore> fixture_store(std::shared_ptr<const Constellation> schema);
/// Engine with the fixture schema and data loaded.
std::unique_ptr<Engine> fixture_engine();
Rule fixture_rule(const std::string& file);

/// (row tuple, col tuple) -> value, for one measure.
using CellMap = std::map<std::pair<Tuple, Tuple>, double>;
CellMap cells_of(const CellGrid& g, std::size_t measure = 0);

// Golden cells: SUM(Montant) by region and by region/department, per class.
CellMap region_class_cells();
CellMap region_dept_class_cells();

/// A verbatim rule text from the fixtures and its expected syntax tree.
struct GoldenRule {
  std::string file;
  Rule ast;
};
std::vector<GoldenRule> golden_rules();

/// One generated constellation with its raw instances kept outside the
/// data store, so oracles never read through the code under test.
struct RandomWorld {
  struct DimData {
    std::string name;
    std::vector<std::map<std::string, std::string>> rows;  // attribute -> value
  };
  struct FactRow {
    std::vector<std::string> keys;  // star order
    std::vector<double> values;     // measure order
  };
  struct FactData {
    std::string name;
    std::vector<std::string> measures;
    std::vector<std::string> dims;
    std::vector<FactRow> rows;
  };

  std::string ddl;
  std::shared_ptr<const Constellation> schema;
  std::shared_ptr<const DataStore> store;
  std::vector<DimData> dims;
  std::vector<FactData> facts;

  const DimData& dim(const std::string& name) const;
};

/// 2..max_dims dimensions, hierarchies of 1..3 parameters (optionally a
/// second hierarchy and a weak attribute), one fact with <= max_rows rows.
RandomWorld random_world(std::mt19937& rng, int min_dims = 2, int max_dims = 3, int max_rows = 200);

struct AxisQuery {
  std::string dim;
  std::string hier;
  std::vector<std::string> attrs;  // empty = All
};

struct EqFilter {
  std::string dim;
  std::string attr;
  std::string value;
};

/// Brute-force scan: filter, bucket by header tuples, fold.
std::vector<CellMap> oracle_aggregate(const RandomWorld& w, const std::vector<MeasureSpec>& specs,
                                      const AxisQuery& rows, const AxisQuery& cols,
                                      const std::vector<EqFilter>& filters = {});

/// Empty when grid and oracle agree (headers as sets, cells within tolerance).
std::string compare_with_oracle(const CellGrid& g, const std::vector<CellMap>& oracle);

/// Random syntactically valid rule over a fixed identifier pool.
Rule random_rule(std::mt19937& rng, int index);

/// Every element of `c`: dimensions, hierarchies, attributes, facts,
/// measures and aggregated measures.
std::vector<ElementRef> all_elements(const Constellation& c);

/// Spelling of `e` with random letter case and optional bracket form.
ElementPath random_spelling(std::mt19937& rng, const ElementRef& e);

/// Random rule whose elements resolve in `c`; unconditional when `conditional` is false.
Rule random_resolvable_rule(std::mt19937& rng, const Constellation& c, const std::string& name,
                            bool conditional);

/// Random operation context over `c` (event kind, fact, axes, qualifiers).
OperationContext random_context(std::mt19937& rng, const Constellation& c);

/// Weights computed straight from rule ASTs, without the materialized registry.
WeightAssignment oracle_fire(const Constellation& c, const std::vector<Rule>& rules,
                             const OperationContext& ctx);

}  // namespace olap::testing
