#include <charconv>

#include "olap/lexer.hpp"
#include "olap/rule.hpp"
#include "olap/text.hpp"

namespace olap {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Displayed: return "DISPLAYED";
    case EventKind::Rotated: return "ROTATED";
    case EventKind::DrilledDown: return "DRILLED-DOWN";
    case EventKind::RolledUp: return "ROLLED-UP";
  }
  return "DISPLAYED";
}

std::optional<EventKind> parse_event_kind(std::string_view text) {
  auto f = fold_case(trim(text));
  if (f == "displayed" || f == "display") return EventKind::Displayed;
  if (f == "rotated" || f == "rotate") return EventKind::Rotated;
  if (f == "drilled-down" || f == "drilled_down" || f == "drilldown") return EventKind::DrilledDown;
  if (f == "rolled-up" || f == "rolled_up" || f == "rollup") return EventKind::RolledUp;
  return std::nullopt;
}

std::string format_weight(double w) {
  // shortest round-trip digits, never in exponent form (the grammar has none)
  char buf[400];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, w, std::chars_format::fixed);
  return std::string(buf, ptr);
}

namespace {

class RuleParser {
 public:
  explicit RuleParser(std::string_view src) : ts_(tokenize(src)) {}

  bool done() {
    while (ts_.accept_symbol(";")) {
    }
    return ts_.at_end();
  }

  Rule rule() {
    Rule r;
    r.pos = ts_.peek().pos;
    ts_.expect_keyword("CREATE");
    ts_.expect_keyword("RULE");
    r.name = ts_.expect_ident("rule name").text;
    ts_.expect_keyword("ON");
    r.target = element();
    ts_.expect_keyword("WHEN");
    r.events.push_back(event());
    while (ts_.accept_keyword("OR")) r.events.push_back(event());
    if (ts_.accept_keyword("IF")) r.condition = or_expr();
    ts_.expect_keyword("THEN");
    r.actions.push_back(action());
    while (ts_.accept_symbol(",")) r.actions.push_back(action());
    ts_.expect_symbol(";");
    return r;
  }

 private:
  EventPattern event() {
    const Token& t = ts_.peek();
    EventPattern e;
    if (ts_.accept_keyword("DISPLAYED")) {
      e.kind = EventKind::Displayed;
      return e;
    }
    if (ts_.accept_keyword("ROTATED")) {
      e.kind = EventKind::Rotated;
      if (ts_.accept_keyword("FROM")) e.from_dim = ts_.expect_ident("dimension name").text;
      if (ts_.accept_keyword("TO")) e.to_dim = ts_.expect_ident("dimension name").text;
      return e;
    }
    bool drilled = t.is_keyword("DRILLED");
    bool rolled = t.is_keyword("ROLLED");
    if (!drilled && !rolled) ts_.fail("DISPLAYED, ROTATED, DRILLED-DOWN or ROLLED-UP");
    ts_.next();
    // the hyphenated keywords arrive as three tokens with no spacing
    const Token& dash = ts_.peek();
    const Token& tail = ts_.peek(1);
    if (!dash.is_symbol("-") || dash.offset != t.end || tail.offset != dash.end ||
        !tail.is_keyword(drilled ? "DOWN" : "UP")) {
      throw Error(ErrorCode::SyntaxError,
                  std::string("expected ") + (drilled ? "DRILLED-DOWN" : "ROLLED-UP") + ", got '" +
                      t.text + "' followed by " + describe(dash),
                  t.pos);
    }
    ts_.next();
    ts_.next();
    e.kind = drilled ? EventKind::DrilledDown : EventKind::RolledUp;
    if (ts_.accept_keyword("ON")) e.on_dim = ts_.expect_ident("dimension name").text;
    if (ts_.accept_keyword("TO")) e.to_param = ts_.expect_ident("parameter name").text;
    if (ts_.accept_keyword("ACCORDING")) {
      ts_.expect_keyword("TO");
      e.according_hier = ts_.expect_ident("hierarchy name").text;
    }
    return e;
  }

  Condition or_expr() {
    Condition left = and_expr();
    if (!ts_.peek().is_keyword("OR")) return left;
    Condition c;
    c.op = Condition::Op::Or;
    c.operands.push_back(std::move(left));
    while (ts_.accept_keyword("OR")) c.operands.push_back(and_expr());
    return c;
  }

  Condition and_expr() {
    Condition left = atom();
    if (!ts_.peek().is_keyword("AND")) return left;
    Condition c;
    c.op = Condition::Op::And;
    c.operands.push_back(std::move(left));
    while (ts_.accept_keyword("AND")) c.operands.push_back(atom());
    return c;
  }

  Condition atom() {
    Condition c;
    if (ts_.accept_keyword("CURRENT")) {
      ts_.expect_symbol("(");
      c.op = Condition::Op::Current;
      c.element = element();
      ts_.expect_symbol(")");
      return c;
    }
    if (ts_.accept_keyword("NOT")) {
      c.op = Condition::Op::Not;
      c.operands.push_back(atom());
      return c;
    }
    if (ts_.accept_symbol("(")) {
      c = or_expr();
      ts_.expect_symbol(")");
      return c;
    }
    ts_.fail("current(...), NOT or '('");
  }

  PriorityAction action() {
    ts_.expect_keyword("PRIORITY");
    ts_.expect_symbol("(");
    PriorityAction a;
    a.element = element();
    ts_.expect_symbol(",");
    const Token& first = ts_.peek();
    const bool negative = first.is_symbol("-") && ts_.peek(1).kind == TokenKind::Number;
    if (negative) ts_.next();
    const Token& num = ts_.peek();
    if (num.kind != TokenKind::Number) ts_.fail("weight");
    ts_.next();
    auto w = parse_number(num.text);
    if (!w) ts_.fail("weight");
    if (negative) w = -*w;
    if (*w < 0.0 || *w > 1.0) {
      throw Error(ErrorCode::WeightOutOfRange,
                  "weight " + std::string(negative ? "-" : "") + num.text + " is outside [0, 1]", first.pos);
    }
    a.weight = *w + 0.0;
    ts_.expect_symbol(")");
    return a;
  }

  ElementPath element() {
    ElementPath p;
    p.pos = ts_.peek().pos;
    p.segments.push_back(ts_.expect_ident("element name").text);
    if (ts_.accept_symbol("[")) {
      p.segments.push_back(ts_.expect_ident("hierarchy name").text);
      ts_.expect_symbol("]");
      p.bracketed = true;
    }
    while (ts_.accept_symbol(".")) p.segments.push_back(ts_.expect_ident("element name").text);
    return p;
  }

  TokenStream ts_;
};

std::string condition_source(const Condition& c) {
  switch (c.op) {
    case Condition::Op::Current: return "current(" + c.element.spelling() + ")";
    case Condition::Op::Not: {
      const auto& inner = c.operands.front();
      bool wrap = inner.op == Condition::Op::And || inner.op == Condition::Op::Or;
      return "NOT " + (wrap ? "(" + condition_source(inner) + ")" : condition_source(inner));
    }
    case Condition::Op::And:
    case Condition::Op::Or: {
      const char* sep = c.op == Condition::Op::And ? " AND " : " OR ";
      std::string out;
      for (std::size_t i = 0; i < c.operands.size(); ++i) {
        if (i) out += sep;
        const auto& o = c.operands[i];
        // nested same-op or OR-under-AND need parentheses to keep the tree shape
        bool wrap = o.op == Condition::Op::Or || o.op == Condition::Op::And;
        out += wrap ? "(" + condition_source(o) + ")" : condition_source(o);
      }
      return out;
    }
  }
  return {};
}

}  // namespace

Rule parse_rule(std::string_view source) {
  RuleParser p(source);
  if (p.done()) throw Error(ErrorCode::SyntaxError, "expected CREATE RULE, got end of input");
  Rule r = p.rule();
  if (!p.done()) {
    throw Error(ErrorCode::SyntaxError, "unexpected text after rule " + r.name);
  }
  return r;
}

std::vector<Rule> parse_rules(std::string_view source) {
  RuleParser p(source);
  std::vector<Rule> out;
  while (!p.done()) out.push_back(p.rule());
  return out;
}

std::string to_source(const Condition& cond) { return condition_source(cond); }

std::string to_source(const Rule& r) {
  std::string out = "CREATE RULE " + r.name + " ON " + r.target.spelling() + "\nWHEN ";
  for (std::size_t i = 0; i < r.events.size(); ++i) {
    const auto& e = r.events[i];
    if (i) out += " OR ";
    out += to_string(e.kind);
    if (e.from_dim) out += " FROM " + *e.from_dim;
    if (e.to_dim) out += " TO " + *e.to_dim;
    if (e.on_dim) out += " ON " + *e.on_dim;
    if (e.to_param) out += " TO " + *e.to_param;
    if (e.according_hier) out += " ACCORDING TO " + *e.according_hier;
  }
  if (r.condition) out += "\nIF " + to_source(*r.condition);
  out += "\nTHEN ";
  for (std::size_t i = 0; i < r.actions.size(); ++i) {
    if (i) out += ",\n     ";
    out += "priority(" + r.actions[i].element.spelling() + ", " + format_weight(r.actions[i].weight) + ")";
  }
  out += ";\n";
  return out;
}

}  // namespace olap
