#include <gtest/gtest.h>

#include "properties.hpp"

using namespace olap::testing;

namespace {

void expect_ok(const PropertyResult& r) {
  EXPECT_TRUE(r.ok()) << r.name << ": " << r.failures << "/" << r.cases << " failed; first: " << r.first_failure;
}

}  // namespace

TEST(Properties, ThresholdMonotonicity) { expect_ok(check_threshold_monotonicity(101)); }
TEST(Properties, AggregateMatchesOracle) { expect_ok(check_aggregate_oracle(202)); }
TEST(Properties, DrillThenRollIsInverse) { expect_ok(check_drill_roll_inverse(303)); }
TEST(Properties, RotateTwiceRestores) { expect_ok(check_rotate_involution(404)); }
TEST(Properties, ClassicOutputIgnoresRules) { expect_ok(check_rule_independence(505)); }
TEST(Properties, WeightsOnlyAffectHeaders) { expect_ok(check_headers_only(606)); }
TEST(Properties, PrintParseRoundTrip) { expect_ok(check_parse_print_roundtrip(707)); }
TEST(Properties, RegistryMatchesDirectEvaluation) { expect_ok(check_registry_faithfulness(808)); }
TEST(Properties, ResolveIsIdempotent) { expect_ok(check_resolve_idempotence(909)); }
TEST(Properties, OperatorGridsMatchAggregate) { expect_ok(check_operator_grid_agreement(1010)); }
