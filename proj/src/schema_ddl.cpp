#include <algorithm>

#include "olap/lexer.hpp"
#include "olap/schema.hpp"
#include "olap/text.hpp"

namespace olap {

namespace {

void add_attribute(Dimension& d, const std::string& name) {
  if (!d.find_attribute(name)) d.attributes.push_back({name, ValueKind::Text});
}

Hierarchy parse_hierarchy(TokenStream& ts, Dimension& d) {
  Hierarchy h;
  h.name = ts.expect_ident("hierarchy name").text;
  ts.expect_symbol(":");
  do {
    h.params.push_back(ts.expect_ident("parameter name").text);
  } while (ts.accept_symbol("->"));
  // Dimension attributes are recorded in declaration order; the canonical
  // spelling is the first one encountered.
  for (auto& p : h.params) {
    if (const Attribute* a = d.find_attribute(p)) p = a->name;
    add_attribute(d, p);
  }
  while (ts.accept_keyword("WEAK")) {
    std::string attr = ts.expect_ident("weak attribute name").text;
    ts.expect_keyword("ON");
    const Token& owner = ts.expect_ident("parameter name");
    auto level = h.param_level(owner.text);
    if (!level) {
      throw Error(ErrorCode::InvalidWeakAttribute,
                  owner.text + " is not a parameter of hierarchy " + h.name, owner.pos);
    }
    const std::string& param = h.params[*level];
    if (const Attribute* a = d.find_attribute(attr)) attr = a->name;
    add_attribute(d, attr);
    auto it = std::find_if(h.weak.begin(), h.weak.end(),
                           [&](const WeakAttributes& w) { return w.param == param; });
    if (it == h.weak.end()) {
      h.weak.push_back({param, {attr}});
    } else {
      it->attrs.push_back(attr);
    }
  }
  return h;
}

}  // namespace

Constellation parse_schema(std::string_view source, std::string name) {
  TokenStream ts(tokenize(source));
  std::vector<Dimension> dims;
  std::vector<Fact> facts;
  std::map<std::string, std::vector<std::string>> star;

  while (!ts.at_end()) {
    if (ts.accept_symbol(";")) continue;
    ts.expect_keyword("DEFINE");
    if (ts.accept_keyword("CONSTELLATION")) {
      name = ts.expect_ident("constellation name").text;
    } else if (ts.accept_keyword("DIMENSION")) {
      Dimension d;
      d.name = ts.expect_ident("dimension name").text;
      ts.expect_keyword("HIERARCHY");
      d.hierarchies.push_back(parse_hierarchy(ts, d));
      while (ts.accept_keyword("HIERARCHY")) d.hierarchies.push_back(parse_hierarchy(ts, d));
      dims.push_back(std::move(d));
    } else if (ts.accept_keyword("FACT")) {
      Fact f;
      const Token& fname = ts.expect_ident("fact name");
      f.name = fname.text;
      ts.expect_symbol("(");
      do {
        const Token& agg_tok = ts.expect_ident("aggregation function");
        auto agg = parse_agg(agg_tok.text);
        if (!agg) {
          throw Error(ErrorCode::SyntaxError,
                      "expected one of SUM, AVG, MIN, MAX, COUNT, got '" + agg_tok.text + "'",
                      agg_tok.pos);
        }
        ts.expect_symbol("(");
        f.measures.push_back({*agg, ts.expect_ident("measure name").text});
        ts.expect_symbol(")");
      } while (ts.accept_symbol(","));
      ts.expect_symbol(")");
      ts.expect_keyword("CONNECT");
      std::vector<std::string> connected;
      do {
        connected.push_back(ts.expect_ident("dimension name").text);
      } while (ts.accept_symbol(","));
      if (star.count(f.name)) {
        throw Error(ErrorCode::DuplicateName, "fact " + f.name + " defined twice", fname.pos);
      }
      star[f.name] = std::move(connected);
      facts.push_back(std::move(f));
    } else {
      ts.fail("CONSTELLATION, DIMENSION or FACT");
    }
    ts.expect_symbol(";");
  }
  return build_constellation(std::move(name), std::move(dims), std::move(facts), std::move(star));
}

}  // namespace olap
