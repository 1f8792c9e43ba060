#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "olap/rule.hpp"
#include "olap/schema.hpp"

namespace olap {

/// Axis of the table an operation is about to produce.
struct ContextAxis {
  std::string dimension;
  std::string hierarchy;
  std::vector<std::string> attributes;
};

/// Elements involved in a pending operation, as seen after it completes.
struct OperationContext {
  EventKind event = EventKind::Displayed;
  std::string fact;
  std::vector<MeasureSpec> measures;
  std::optional<ContextAxis> rows;
  std::optional<ContextAxis> cols;
  // ROTATED
  std::string from_dim;
  std::string to_dim;
  // DRILLED-DOWN / ROLLED-UP
  std::string target_dim;
  std::string target_param;
  std::string target_hier;
};

struct WeightEntry {
  ElementRef element;  // parameter, weak attribute, measure or aggregated measure
  double weight = 0;
  std::string rule;
};

/// Effective weights for one operation, with the rule that set each one.
class WeightAssignment {
 public:
  void set(const ElementRef& e, double w, const std::string& rule);
  std::optional<double> weight(const ElementRef& e) const;
  const WeightEntry* entry(const ElementRef& e) const;
  /// Weight of attribute `attr` of hierarchy `dim.hier`, if assigned.
  std::optional<double> attribute_weight(std::string_view dim, std::string_view hier,
                                         std::string_view attr) const;
  std::vector<WeightEntry> entries() const;
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  friend bool operator==(const WeightAssignment& a, const WeightAssignment& b);

 private:
  std::map<ElementRef, WeightEntry> entries_;
};

bool operator==(const WeightAssignment& a, const WeightAssignment& b);

/// Boolean condition with every current(E) atom resolved.
struct ResolvedCondition {
  Condition::Op op = Condition::Op::Current;
  ElementRef element;
  std::vector<ResolvedCondition> operands;
};

struct ResolvedAction {
  ElementRef element;
  double weight = 0;
};

/// A rule after registration: names canonical, events qualified, actions as
/// written (expansion happens when weights are materialized).
struct RegisteredRule {
  Rule source;
  ElementRef target;
  std::vector<EventPattern> events;
  std::optional<ResolvedCondition> condition;
  std::vector<ResolvedAction> actions;
};

/// One materialized weight row (OPERATION, ELEMENT, HIERARCHY, ATTRIBUTE, WEIGHT),
/// plus the event qualifiers and the originating rule.
struct RegistryEntry {
  EventPattern pattern;
  ElementRef attribute;
  double weight = 0;
  std::string rule;

  EventKind operation() const { return pattern.kind; }
  const std::string& element() const { return attribute.path.front(); }
  /// Hierarchy for dimension attributes, nullopt for measures.
  std::optional<std::string> hierarchy() const;
  std::string attribute_name() const;
};

struct Profile {
  std::string name;
  std::vector<RegisteredRule> rules;
  std::vector<RegistryEntry> registry;  // unconditional rules only
};

bool event_matches(const EventPattern& p, const OperationContext& ctx);
bool evaluate_current(const OperationContext& ctx, const ElementRef& e);
bool evaluate_condition(const OperationContext& ctx, const ResolvedCondition& c);

/// Attribute/measure refs an action element stands for (dimension and
/// hierarchy targets expand to their attributes, facts to their measures).
std::vector<ElementRef> expand_element(const Constellation& c, const ElementRef& e);

/// Per-profile rule sets bound to one constellation. Value type: callers
/// snapshot it and mutate a copy.
class RuleEngine {
 public:
  RuleEngine() = default;
  explicit RuleEngine(std::shared_ptr<const Constellation> schema) : schema_(std::move(schema)) {}

  const Constellation& schema() const { return *schema_; }

  void register_rule(std::string_view profile, const Rule& rule);
  void drop_rule(std::string_view profile, std::string_view name);

  const Profile* profile(std::string_view name) const;
  std::vector<std::string> profiles() const;

  /// Weight rows of the profile's unconditional rules whose event pattern
  /// matches `ctx`, applied in registration order.
  WeightAssignment lookup_registry(std::string_view profile, const OperationContext& ctx) const;

  /// Effective weights for the operation described by `ctx`.
  WeightAssignment fire(std::string_view profile, const OperationContext& ctx) const;

 private:
  WeightAssignment fire_kind(const Profile& p, const OperationContext& ctx) const;

  std::shared_ptr<const Constellation> schema_;
  std::map<std::string, Profile> profiles_;  // folded name
};

RegisteredRule resolve_rule(const Constellation& c, const Rule& rule);

/// Attributes of `hier` to display: every parameter and weak attribute at
/// level >= `level_floor` whose weight reaches `threshold`, plus `forced`.
/// Falls back to the coarsest parameter when no parameter qualifies and
/// nothing is forced. Ordered coarsest level first, parameters before their
/// weak attributes.
std::vector<std::string> qualified_attributes(const WeightAssignment& wa, double threshold,
                                              const Dimension& dim, const Hierarchy& hier,
                                              int level_floor,
                                              const std::optional<std::string>& forced);

/// Orders attributes of one hierarchy for display (coarsest level first).
std::vector<std::string> order_attributes(const Hierarchy& hier, std::vector<std::string> attrs);

}  // namespace olap
