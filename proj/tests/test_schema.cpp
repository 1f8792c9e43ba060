#include <gtest/gtest.h>

#include "olap/error.hpp"
#include "olap/schema.hpp"
#include "support.hpp"

using namespace olap;
using namespace olap::testing;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Io;
}

Dimension simple_dim(const std::string& name, std::vector<std::string> params) {
  Dimension d;
  d.name = name;
  for (const auto& p : params) d.attributes.push_back({p, ValueKind::Text});
  d.hierarchies.push_back({"H" + name, params, {}});
  return d;
}

}  // namespace

TEST(Schema, FixtureConstellation) {
  auto c = fixture_schema();
  EXPECT_EQ(c->facts().size(), 2u);
  EXPECT_EQ(c->dimensions().size(), 3u);
  EXPECT_EQ(c->star("VENTES"), (std::vector<std::string>{"TEMPS", "CLIENTS", "PRODUITS"}));
  EXPECT_EQ(c->star("achats"), (std::vector<std::string>{"TEMPS", "PRODUITS"}));
  EXPECT_TRUE(c->is_starred("Ventes", "clients"));
  EXPECT_FALSE(c->is_starred("ACHATS", "CLIENTS"));
  const Hierarchy* h = c->find_dimension("Temps")->find_hierarchy("htps");
  ASSERT_NE(h, nullptr);
  EXPECT_EQ(h->params, (std::vector<std::string>{"MoisN", "Trimestre", "Année"}));
  EXPECT_EQ(*h->weak_owner("libellém"), "MoisN");
}

TEST(Schema, EmptyConstellationIsValid) {
  Constellation c = build_constellation("empty", {}, {}, {});
  EXPECT_TRUE(c.facts().empty());
  EXPECT_TRUE(c.dimensions().empty());
}

TEST(Schema, ValidationErrors) {
  Fact f{"VENTES", {{AggFn::Sum, "Montant"}}};
  EXPECT_EQ(code_of([&] {
              build_constellation("x", {simple_dim("TEMPS", {"M"})}, {f}, {{"VENTES", {"REGIONS"}}});
            }),
            ErrorCode::DanglingStarReference);
  EXPECT_EQ(code_of([&] { build_constellation("x", {simple_dim("TEMPS", {"M"})}, {f}, {{"VENTES", {}}}); }),
            ErrorCode::EmptyStarEntry);
  EXPECT_EQ(code_of([&] {
              build_constellation("x", {simple_dim("TEMPS", {"M"}), simple_dim("temps", {"N"})}, {}, {});
            }),
            ErrorCode::DuplicateName);
  Dimension missing = simple_dim("TEMPS", {"M", "Y"});
  missing.attributes.pop_back();
  EXPECT_EQ(code_of([&] { build_constellation("x", {missing}, {}, {}); }),
            ErrorCode::HierarchyAttributeMissing);
  Dimension two_roots = simple_dim("TEMPS", {"M", "Y"});
  two_roots.hierarchies.push_back({"HB", {"Y"}, {}});
  EXPECT_EQ(code_of([&] { build_constellation("x", {two_roots}, {}, {}); }),
            ErrorCode::HierarchyRootMismatch);
  Dimension cyclic = simple_dim("TEMPS", {"M", "Y"});
  cyclic.hierarchies[0].params.push_back("M");
  EXPECT_EQ(code_of([&] { build_constellation("x", {cyclic}, {}, {}); }), ErrorCode::DuplicateName);
}

TEST(Schema, DdlErrorsArePositioned) {
  try {
    parse_schema("DEFINE DIMENSION T\n  HIERARCHY H : A -> ;");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SyntaxError);
    EXPECT_EQ(e.position()->line, 2);
  }
}

TEST(Schema, ResolveElements) {
  auto c = fixture_schema();
  ElementRef annee = resolve_element(*c, "Temps.HTPS.Année");
  EXPECT_EQ(annee.kind, ElementKind::Parameter);
  EXPECT_EQ(annee.path, (std::vector<std::string>{"TEMPS", "HTPS", "Année"}));
  EXPECT_EQ(resolve_element(*c, "temps[htps].ANNÉE"), annee);
  EXPECT_EQ(resolve_element(*c, "Ventes").kind, ElementKind::Fact);
  EXPECT_EQ(resolve_element(*c, "Ventes").path, (std::vector<std::string>{"VENTES"}));
  EXPECT_EQ(resolve_element(*c, "Temps.HTPS.Libellém").kind, ElementKind::WeakAttribute);
  EXPECT_EQ(resolve_element(*c, "Clients.HGEO").kind, ElementKind::Hierarchy);
  EXPECT_EQ(resolve_element(*c, "HGEO").path, (std::vector<std::string>{"CLIENTS", "HGEO"}));
  EXPECT_EQ(resolve_element(*c, "Ventes.Montant").kind, ElementKind::Measure);
  EXPECT_EQ(resolve_element(*c, "Ventes[SUM].Montant").kind, ElementKind::AggregatedMeasure);
  EXPECT_EQ(code_of([&] { resolve_element(*c, "Temps.HXYZ.Année"); }), ErrorCode::UnresolvedName);
  EXPECT_EQ(code_of([&] { resolve_element(*c, "Produits.HGEO.CodeCli"); }), ErrorCode::UnresolvedName);
}

TEST(Schema, AmbiguousBareAttribute) {
  Dimension d = simple_dim("T", {"M", "Y"});
  d.attributes.push_back({"Q", ValueKind::Text});
  d.hierarchies.push_back({"HB", {"M", "Q", "Y"}, {}});
  Constellation c = build_constellation("x", {d}, {}, {});
  EXPECT_EQ(code_of([&] { resolve_element(c, "T.Y"); }), ErrorCode::AmbiguousName);
  EXPECT_EQ(resolve_element(c, "T.Q").path, (std::vector<std::string>{"T", "HB", "Q"}));
}

TEST(Schema, SpellingRoundTrips) {
  auto c = fixture_schema();
  for (const char* s : {"Temps.HTPS.Année", "Ventes", "Clients.HGEO", "Ventes[SUM].Montant", "Temps"}) {
    ElementRef e = resolve_element(*c, s);
    EXPECT_EQ(resolve_element(*c, e.spelling()), e) << s;
  }
}

TEST(Schema, GranularityLevels) {
  auto c = fixture_schema();
  const Dimension& t = *c->find_dimension("TEMPS");
  const Hierarchy& h = t.hierarchies[0];
  EXPECT_EQ(granularity_level(t, h, "MoisN"), 0);
  EXPECT_EQ(granularity_level(t, h, "LibelléM"), 0);
  EXPECT_EQ(granularity_level(t, h, "Trimestre"), 1);
  EXPECT_EQ(granularity_level(t, h, "Année"), 2);
  EXPECT_EQ(granularity_level(t, h, "All"), 3);
  EXPECT_EQ(code_of([&] { granularity_level(t, h, "Semaine"); }), ErrorCode::AttrNotInHierarchy);
}
