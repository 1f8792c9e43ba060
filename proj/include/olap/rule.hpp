#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "olap/schema.hpp"

namespace olap {

enum class EventKind { Displayed, Rotated, DrilledDown, RolledUp };

std::string_view to_string(EventKind kind);  // "DISPLAYED", "DRILLED-DOWN", ...
std::optional<EventKind> parse_event_kind(std::string_view text);

/// One alternative of a WHEN clause. ROTATED admits from/to dimensions;
/// the forage kinds admit on/to/according-to. Unset fields match anything.
struct EventPattern {
  EventKind kind = EventKind::Displayed;
  std::optional<std::string> from_dim;
  std::optional<std::string> to_dim;
  std::optional<std::string> on_dim;
  std::optional<std::string> to_param;
  std::optional<std::string> according_hier;

  friend bool operator==(const EventPattern&, const EventPattern&) = default;
};

/// Boolean expression over current(E) atoms.
struct Condition {
  enum class Op { Current, Not, And, Or };
  Op op = Op::Current;
  ElementPath element;  // Current only
  std::vector<Condition> operands;

  friend bool operator==(const Condition&, const Condition&) = default;
};

struct PriorityAction {
  ElementPath element;
  double weight = 0;

  friend bool operator==(const PriorityAction& a, const PriorityAction& b) {
    return a.element == b.element && a.weight == b.weight;
  }
};

/// Parsed, unresolved ECA rule.
struct Rule {
  std::string name;
  ElementPath target;
  std::vector<EventPattern> events;
  std::optional<Condition> condition;
  std::vector<PriorityAction> actions;
  SourcePos pos;

  friend bool operator==(const Rule& a, const Rule& b) {
    return a.name == b.name && a.target == b.target && a.events == b.events &&
           a.condition == b.condition && a.actions == b.actions;
  }
};

/// Parses exactly one CREATE RULE statement.
Rule parse_rule(std::string_view source);
/// Parses any number of statements (a .rul file).
std::vector<Rule> parse_rules(std::string_view source);

/// Canonical source text; parse_rule(to_source(r)) == r.
std::string to_source(const Rule& rule);
std::string to_source(const Condition& cond);

/// Shortest decimal that round-trips the weight.
std::string format_weight(double w);

}  // namespace olap
