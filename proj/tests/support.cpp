#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "olap/text.hpp"

namespace olap::testing {

std::string fixture_path(const std::string& relative) {
  return std::string(OLAP_FIXTURE_DIR) + "/" + relative;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::shared_ptr<const Constellation> fixture_schema() {
  return std::make_shared<const Constellation>(parse_schema(read_text(fixture_path("schema.ddl"))));
}

std::shared_ptr<const DataStore> fixture_store(std::shared_ptr<const Constellation> schema) {
  auto store = std::make_shared<DataStore>(schema);
  for (const auto& d : schema->dimensions()) {
    std::ifstream in(fixture_path("data/" + d.name + ".csv"), std::ios::binary);
    store->load_dimension(d.name, in);
  }
  for (const auto& f : schema->facts()) {
    std::ifstream in(fixture_path("data/" + f.name + ".csv"), std::ios::binary);
    store->load_fact(f.name, in);
  }
  return store;
}

std::unique_ptr<Engine> fixture_engine() {
  auto e = std::make_unique<Engine>();
  e->load_schema_file(fixture_path("schema.ddl"));
  e->load_data_dir(fixture_path("data"));
  return e;
}

Rule fixture_rule(const std::string& file) { return parse_rule(read_text(fixture_path("rules/" + file))); }

CellMap cells_of(const CellGrid& g, std::size_t measure) {
  CellMap out;
  for (std::size_t r = 0; r < g.row_headers.size(); ++r) {
    for (std::size_t c = 0; c < g.col_headers.size(); ++c) {
      if (auto v = g.at(r, c, measure)) out[{g.row_headers[r], g.col_headers[c]}] = *v;
    }
  }
  return out;
}

CellMap region_class_cells() {
  CellMap m;
  auto put = [&](const std::string& region, double tech, double hab, double mob) {
    m[{{region}, {"Technologique"}}] = tech;
    m[{{region}, {"Habillement"}}] = hab;
    m[{{region}, {"Mobilier"}}] = mob;
  };
  put("Midi-Pyrénées", 2000, 3500, 1500);
  put("Aquitaine", 1800, 3000, 2000);
  put("Bretagne", 1600, 3200, 1900);
  return m;
}

CellMap region_dept_class_cells() {
  CellMap m;
  auto put = [&](const std::string& region, const std::string& dept, double tech, double hab, double mob) {
    m[{{region, dept}, {"Technologique"}}] = tech;
    m[{{region, dept}, {"Habillement"}}] = hab;
    m[{{region, dept}, {"Mobilier"}}] = mob;
  };
  put("Midi-Pyrénées", "31", 1200, 2000, 1000);
  put("Midi-Pyrénées", "81", 800, 1500, 500);
  put("Aquitaine", "33", 1800, 3000, 2000);
  put("Bretagne", "22", 800, 2000, 1000);
  put("Bretagne", "29", 800, 1200, 900);
  return m;
}

const RandomWorld::DimData& RandomWorld::dim(const std::string& name) const {
  for (const auto& d : dims) {
    if (iequals(d.name, name)) return d;
  }
  throw std::out_of_range("no dimension " + name);
}

namespace {

int uniform(std::mt19937& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool coin(std::mt19937& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

template <class T>
const T& pick(std::mt19937& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(v.size()) - 1))];
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

}  // namespace

RandomWorld random_world(std::mt19937& rng, int min_dims, int max_dims, int max_rows) {
  RandomWorld w;
  const int nd = uniform(rng, min_dims, max_dims);
  std::ostringstream ddl;
  ddl << "DEFINE CONSTELLATION R;\n";
  std::vector<std::string> dim_names;
  struct Csv {
    std::string name;
    std::string text;
  };
  std::vector<Csv> csvs;

  for (int d = 0; d < nd; ++d) {
    std::string dn = "D" + std::to_string(d);
    dim_names.push_back(dn);
    const int levels = uniform(rng, 1, 3);
    const int branch = uniform(rng, 2, 3);
    const int nkeys = uniform(rng, 2, 8);
    std::vector<std::string> params;
    for (int l = 0; l < levels; ++l) params.push_back(dn + "A" + std::to_string(l));
    std::optional<std::string> weak_owner;
    if (coin(rng)) weak_owner = pick(rng, params);
    const bool second = levels >= 2 && coin(rng, 0.4);

    ddl << "DEFINE DIMENSION " << dn << "\n  HIERARCHY " << dn << "H : " << join(params, " -> ");
    if (weak_owner) ddl << "\n    WEAK " << dn << "W ON " << *weak_owner;
    if (second) ddl << "\n  HIERARCHY " << dn << "G : " << params[0] << " -> " << dn << "B1";
    ddl << ";\n";

    RandomWorld::DimData data{dn, {}};
    std::vector<std::string> cols = params;
    if (weak_owner) cols.push_back(dn + "W");
    if (second) cols.push_back(dn + "B1");
    std::string csv = join(cols, ",") + "\n";
    for (int k = 0; k < nkeys; ++k) {
      std::map<std::string, std::string> row;
      int div = 1;
      for (int l = 0; l < levels; ++l) {
        row[params[l]] = (l == 0 ? "k" : "v") + std::to_string(k / div);
        div *= branch;
      }
      if (weak_owner) row[dn + "W"] = "lab " + row[*weak_owner];
      if (second) row[dn + "B1"] = "b" + std::to_string(k % 2);
      std::vector<std::string> vals;
      for (const auto& c : cols) vals.push_back(row[c]);
      csv += join(vals, ",") + "\n";
      data.rows.push_back(std::move(row));
    }
    csvs.push_back({dn, csv});
    w.dims.push_back(std::move(data));
  }

  static const std::vector<std::string> aggs = {"SUM", "AVG", "MIN", "MAX", "COUNT"};
  RandomWorld::FactData fact{"F", {}, dim_names, {}};
  const int nm = uniform(rng, 1, 2);
  std::vector<std::string> decls;
  for (int m = 0; m < nm; ++m) {
    fact.measures.push_back("m" + std::to_string(m));
    decls.push_back(pick(rng, aggs) + "(m" + std::to_string(m) + ")");
  }
  ddl << "DEFINE FACT F ( " << join(decls, ", ") << " ) CONNECT " << join(dim_names, ", ") << ";\n";

  std::vector<std::string> header = fact.measures;
  for (const auto& d : dim_names) header.push_back(fold_case(d) + "_ref");
  std::string csv = join(header, ",") + "\n";
  const int nrows = uniform(rng, 0, max_rows);
  for (int r = 0; r < nrows; ++r) {
    RandomWorld::FactRow row;
    std::vector<std::string> vals;
    for (int m = 0; m < nm; ++m) {
      double v = uniform(rng, -400, 400) / 4.0;
      row.values.push_back(v);
      vals.push_back(format_number(v));
    }
    for (const auto& d : w.dims) {
      const auto& drow = pick(rng, d.rows);
      row.keys.push_back(drow.at(d.name + "A0"));
      vals.push_back(row.keys.back());
    }
    csv += join(vals, ",") + "\n";
    fact.rows.push_back(std::move(row));
  }
  w.facts.push_back(std::move(fact));

  w.ddl = ddl.str();
  w.schema = std::make_shared<const Constellation>(parse_schema(w.ddl, "R"));
  auto store = std::make_shared<DataStore>(w.schema);
  for (const auto& c : csvs) {
    std::istringstream in(c.text);
    store->load_dimension(c.name, in);
  }
  std::istringstream in(csv);
  store->load_fact("F", in);
  w.store = store;
  return w;
}

std::vector<CellMap> oracle_aggregate(const RandomWorld& w, const std::vector<MeasureSpec>& specs,
                                      const AxisQuery& rows, const AxisQuery& cols,
                                      const std::vector<EqFilter>& filters) {
  const auto& fact = w.facts.front();
  auto dim_row = [&](const RandomWorld::FactRow& fr, const std::string& dim) {
    for (std::size_t i = 0; i < fact.dims.size(); ++i) {
      if (!iequals(fact.dims[i], dim)) continue;
      for (const auto& r : w.dim(dim).rows) {
        if (r.at(w.dim(dim).name + "A0") == fr.keys[i]) return r;
      }
    }
    throw std::logic_error("dangling key");
  };
  auto tuple = [&](const RandomWorld::FactRow& fr, const AxisQuery& q) {
    Tuple t;
    if (q.attrs.empty()) return t;
    auto r = dim_row(fr, q.dim);
    for (const auto& a : q.attrs) t.push_back(r.at(a));
    return t;
  };

  std::map<std::pair<Tuple, Tuple>, std::vector<std::vector<double>>> buckets;
  for (const auto& fr : fact.rows) {
    bool keep = true;
    for (const auto& f : filters) {
      if (dim_row(fr, f.dim).at(f.attr) != f.value) keep = false;
    }
    if (!keep) continue;
    auto& b = buckets[{tuple(fr, rows), tuple(fr, cols)}];
    b.resize(specs.size());
    for (std::size_t s = 0; s < specs.size(); ++s) {
      std::size_t mi = static_cast<std::size_t>(
          std::find(fact.measures.begin(), fact.measures.end(), specs[s].measure) - fact.measures.begin());
      b[s].push_back(fr.values[mi]);
    }
  }

  std::vector<CellMap> out(specs.size());
  for (const auto& [key, per_spec] : buckets) {
    for (std::size_t s = 0; s < specs.size(); ++s) {
      const auto& v = per_spec[s];
      double sum = 0;
      for (double x : v) sum += x;
      double r = 0;
      switch (specs[s].agg) {
        case AggFn::Sum: r = sum; break;
        case AggFn::Avg: r = sum / static_cast<double>(v.size()); break;
        case AggFn::Min: r = *std::min_element(v.begin(), v.end()); break;
        case AggFn::Max: r = *std::max_element(v.begin(), v.end()); break;
        case AggFn::Count: r = static_cast<double>(v.size()); break;
      }
      out[s][key] = r;
    }
  }
  return out;
}

std::string compare_with_oracle(const CellGrid& g, const std::vector<CellMap>& oracle) {
  std::set<Tuple> rows, cols;
  for (const auto& [key, _] : oracle.empty() ? CellMap{} : oracle.front()) {
    rows.insert(key.first);
    cols.insert(key.second);
  }
  if (std::set<Tuple>(g.row_headers.begin(), g.row_headers.end()) != rows ||
      g.row_headers.size() != rows.size()) {
    return "row headers differ";
  }
  if (std::set<Tuple>(g.col_headers.begin(), g.col_headers.end()) != cols ||
      g.col_headers.size() != cols.size()) {
    return "column headers differ";
  }
  for (std::size_t m = 0; m < oracle.size(); ++m) {
    CellMap got = cells_of(g, m);
    if (got.size() != oracle[m].size()) {
      return "measure " + std::to_string(m) + ": " + std::to_string(got.size()) + " cells, oracle has " +
             std::to_string(oracle[m].size());
    }
    for (const auto& [key, v] : oracle[m]) {
      auto it = got.find(key);
      if (it == got.end()) return "missing cell";
      if (std::fabs(it->second - v) > kCellTolerance) {
        return "cell value " + std::to_string(it->second) + " != oracle " + std::to_string(v);
      }
    }
  }
  return {};
}

namespace {

const std::vector<std::string>& name_pool() {
  static const std::vector<std::string> pool = {"Temps", "HTPS",  "Année",   "Ventes", "Montant",
                                                "x_1",   "Région", "Ωmega", "Δt",     "k9",
                                                "Clients", "DeptN", "SUM",   "avg"};
  return pool;
}

ElementPath random_path(std::mt19937& rng) {
  ElementPath p;
  int n = uniform(rng, 1, 3);
  for (int i = 0; i < n; ++i) p.segments.push_back(pick(rng, name_pool()));
  p.bracketed = n == 3 && coin(rng, 0.3);
  return p;
}

double random_weight(std::mt19937& rng) {
  switch (uniform(rng, 0, 3)) {
    case 0: return 0.0;
    case 1: return 1.0;
    case 2: return uniform(rng, 0, 100) / 100.0;
    default: return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  }
}

Condition random_condition(std::mt19937& rng, int depth) {
  Condition c;
  int choice = depth >= 3 ? 0 : uniform(rng, 0, 3);
  if (choice == 0) {
    c.op = Condition::Op::Current;
    c.element = random_path(rng);
    return c;
  }
  if (choice == 1) {
    c.op = Condition::Op::Not;
    c.operands.push_back(random_condition(rng, depth + 1));
    return c;
  }
  c.op = choice == 2 ? Condition::Op::And : Condition::Op::Or;
  int n = uniform(rng, 2, 3);
  for (int i = 0; i < n; ++i) c.operands.push_back(random_condition(rng, depth + 1));
  return c;
}

std::optional<std::string> maybe(std::mt19937& rng) {
  if (coin(rng)) return std::nullopt;
  return pick(rng, name_pool());
}

EventPattern random_event(std::mt19937& rng) {
  EventPattern e;
  e.kind = static_cast<EventKind>(uniform(rng, 0, 3));
  if (e.kind == EventKind::Rotated) {
    e.from_dim = maybe(rng);
    e.to_dim = maybe(rng);
  } else if (e.kind != EventKind::Displayed) {
    e.on_dim = maybe(rng);
    e.to_param = maybe(rng);
    e.according_hier = maybe(rng);
  }
  return e;
}

}  // namespace

Rule random_rule(std::mt19937& rng, int index) {
  Rule r;
  r.name = "r" + std::to_string(index) + "_" + pick(rng, name_pool());
  r.target = random_path(rng);
  int ne = uniform(rng, 1, 3);
  for (int i = 0; i < ne; ++i) r.events.push_back(random_event(rng));
  if (coin(rng)) r.condition = random_condition(rng, 0);
  int na = uniform(rng, 1, 4);
  for (int i = 0; i < na; ++i) r.actions.push_back({random_path(rng), random_weight(rng)});
  return r;
}

namespace {

std::string random_case(std::mt19937& rng, const std::string& s) {
  if (coin(rng, 0.7)) return s;
  std::string out = s;
  for (auto& ch : out) {
    if (ch >= 'a' && ch <= 'z' && coin(rng)) ch = static_cast<char>(ch - 'a' + 'A');
  }
  return out;
}

}  // namespace

std::vector<ElementRef> all_elements(const Constellation& c) {
  std::vector<ElementRef> out;
  for (const auto& d : c.dimensions()) {
    out.push_back({ElementKind::Dimension, {d.name}});
    for (const auto& h : d.hierarchies) {
      out.push_back({ElementKind::Hierarchy, {d.name, h.name}});
      for (const auto& p : h.params) {
        out.push_back({ElementKind::Parameter, {d.name, h.name, p}});
        for (const auto& wa : h.weak_of(p)) out.push_back({ElementKind::WeakAttribute, {d.name, h.name, wa}});
      }
    }
  }
  for (const auto& f : c.facts()) {
    out.push_back({ElementKind::Fact, {f.name}});
    for (const auto& m : f.measures) {
      out.push_back({ElementKind::Measure, {f.name, m.measure}});
      for (AggFn a : {AggFn::Sum, AggFn::Avg, AggFn::Min, AggFn::Max, AggFn::Count}) {
        out.push_back({ElementKind::AggregatedMeasure, {f.name, std::string(to_string(a)), m.measure}});
      }
    }
  }
  return out;
}

ElementPath random_spelling(std::mt19937& rng, const ElementRef& e) {
  ElementPath p;
  for (const auto& s : e.path) p.segments.push_back(random_case(rng, s));
  p.bracketed = e.kind == ElementKind::AggregatedMeasure || (e.is_attribute() && coin(rng, 0.3));
  return p;
}

Rule random_resolvable_rule(std::mt19937& rng, const Constellation& c, const std::string& name,
                            bool conditional) {
  auto elements = all_elements(c);
  Rule r;
  r.name = name;
  std::vector<ElementRef> targets;
  for (const auto& e : elements) {
    if (e.kind == ElementKind::Dimension || e.kind == ElementKind::Hierarchy || e.kind == ElementKind::Fact) {
      targets.push_back(e);
    }
  }
  r.target = random_spelling(rng, pick(rng, targets));

  const auto& dims = c.dimensions();
  int ne = uniform(rng, 1, 2);
  for (int i = 0; i < ne; ++i) {
    EventPattern e;
    e.kind = static_cast<EventKind>(uniform(rng, 0, 3));
    const Dimension& d = pick(rng, dims);
    const Hierarchy& h = pick(rng, d.hierarchies);
    if (e.kind == EventKind::Rotated) {
      if (coin(rng)) e.from_dim = random_case(rng, pick(rng, dims).name);
      if (coin(rng)) e.to_dim = random_case(rng, d.name);
    } else if (e.kind != EventKind::Displayed) {
      if (coin(rng)) e.on_dim = d.name;
      if (coin(rng)) e.to_param = coin(rng, 0.2) ? std::string("All") : pick(rng, h.params);
      if (e.on_dim && coin(rng)) e.according_hier = h.name;
      // a parameter qualifier must name a parameter of the qualifying hierarchy
      if (e.to_param && !e.on_dim && !iequals(*e.to_param, "All")) e.on_dim = d.name;
    }
    r.events.push_back(e);
  }
  if (conditional) {
    std::function<Condition(int)> cond = [&](int depth) {
      Condition x;
      int choice = depth >= 2 ? 0 : uniform(rng, 0, 3);
      if (choice == 0) {
        x.op = Condition::Op::Current;
        x.element = random_spelling(rng, pick(rng, elements));
        return x;
      }
      if (choice == 1) {
        x.op = Condition::Op::Not;
        x.operands.push_back(cond(depth + 1));
        return x;
      }
      x.op = choice == 2 ? Condition::Op::And : Condition::Op::Or;
      x.operands.push_back(cond(depth + 1));
      x.operands.push_back(cond(depth + 1));
      return x;
    };
    r.condition = cond(0);
  }
  std::vector<ElementRef> weighable;
  for (const auto& e : elements) {
    if (e.kind != ElementKind::AggregatedMeasure || coin(rng, 0.2)) weighable.push_back(e);
  }
  int na = uniform(rng, 1, 4);
  for (int i = 0; i < na; ++i) r.actions.push_back({random_spelling(rng, pick(rng, weighable)), uniform(rng, 0, 20) / 20.0});
  return r;
}

OperationContext random_context(std::mt19937& rng, const Constellation& c) {
  OperationContext ctx;
  ctx.event = static_cast<EventKind>(uniform(rng, 0, 3));
  const Fact& f = pick(rng, c.facts());
  ctx.fact = f.name;
  for (const auto& m : f.measures) {
    if (coin(rng) || ctx.measures.empty()) ctx.measures.push_back(m);
  }
  const auto& star = c.star(f.name);
  auto axis = [&](const std::string& dn) {
    const Dimension* d = c.find_dimension(dn);
    const Hierarchy& h = pick(rng, d->hierarchies);
    ContextAxis a{d->name, h.name, {}};
    for (const auto& p : h.params) {
      if (coin(rng)) a.attributes.push_back(p);
      for (const auto& wa : h.weak_of(p)) {
        if (coin(rng, 0.3)) a.attributes.push_back(wa);
      }
    }
    if (a.attributes.empty()) a.attributes.push_back(h.coarsest());
    return a;
  };
  std::string rd = pick(rng, star);
  std::string cd = pick(rng, star);
  for (int tries = 0; iequals(rd, cd) && tries < 8; ++tries) cd = pick(rng, star);
  ctx.rows = axis(rd);
  ctx.cols = axis(cd);
  ctx.from_dim = pick(rng, c.dimensions()).name;
  ctx.to_dim = pick(rng, c.dimensions()).name;
  const Dimension& td = pick(rng, c.dimensions());
  const Hierarchy& th = pick(rng, td.hierarchies);
  ctx.target_dim = td.name;
  ctx.target_hier = th.name;
  ctx.target_param = coin(rng, 0.2) ? std::string("All") : pick(rng, th.params);
  return ctx;
}

namespace {

bool qualifier(const std::optional<std::string>& want, const std::string& have) {
  return !want || fold_case(*want) == fold_case(have);
}

bool pattern_matches(const EventPattern& p, const OperationContext& ctx, EventKind kind) {
  if (p.kind != kind) return false;
  if (kind == EventKind::Rotated) return qualifier(p.from_dim, ctx.from_dim) && qualifier(p.to_dim, ctx.to_dim);
  if (kind == EventKind::DrilledDown || kind == EventKind::RolledUp) {
    return qualifier(p.on_dim, ctx.target_dim) && qualifier(p.to_param, ctx.target_param) &&
           qualifier(p.according_hier, ctx.target_hier);
  }
  return true;
}

bool on_axis(const std::optional<ContextAxis>& a, const ElementRef& e) {
  if (!a || fold_case(a->dimension) != fold_case(e.path[0])) return false;
  if (e.kind == ElementKind::Dimension) return true;
  if (fold_case(a->hierarchy) != fold_case(e.path[1])) return false;
  if (e.kind == ElementKind::Hierarchy) return true;
  for (const auto& x : a->attributes) {
    if (fold_case(x) == fold_case(e.path[2])) return true;
  }
  return false;
}

bool holds(const Constellation& c, const Condition& cond, const OperationContext& ctx) {
  switch (cond.op) {
    case Condition::Op::Not: return !holds(c, cond.operands[0], ctx);
    case Condition::Op::And:
      for (const auto& o : cond.operands) {
        if (!holds(c, o, ctx)) return false;
      }
      return true;
    case Condition::Op::Or:
      for (const auto& o : cond.operands) {
        if (holds(c, o, ctx)) return true;
      }
      return false;
    case Condition::Op::Current: break;
  }
  ElementRef e = resolve_element(c, cond.element);
  switch (e.kind) {
    case ElementKind::Fact: return fold_case(ctx.fact) == fold_case(e.path[0]);
    case ElementKind::Measure:
    case ElementKind::AggregatedMeasure:
      if (fold_case(ctx.fact) != fold_case(e.path[0])) return false;
      for (const auto& m : ctx.measures) {
        bool agg_ok = e.kind == ElementKind::Measure || fold_case(to_string(m.agg)) == fold_case(e.path[1]);
        if (agg_ok && fold_case(m.measure) == fold_case(e.path.back())) return true;
      }
      return false;
    default: return on_axis(ctx.rows, e) || on_axis(ctx.cols, e);
  }
}

std::vector<ElementRef> expand(const Constellation& c, const ElementRef& e) {
  std::vector<ElementRef> out;
  for (const auto& x : all_elements(c)) {
    if (!x.is_attribute() && x.kind != ElementKind::Measure) continue;
    bool inside = false;
    if (e.kind == ElementKind::Dimension) inside = x.is_attribute() && x.path[0] == e.path[0];
    if (e.kind == ElementKind::Hierarchy) inside = x.is_attribute() && x.path[0] == e.path[0] && x.path[1] == e.path[1];
    if (e.kind == ElementKind::Fact) inside = x.kind == ElementKind::Measure && x.path[0] == e.path[0];
    if (inside) out.push_back(x);
  }
  if (e.kind != ElementKind::Dimension && e.kind != ElementKind::Hierarchy && e.kind != ElementKind::Fact) {
    out.push_back(e);
  }
  return out;
}

std::map<ElementRef, double> fire_pass(const Constellation& c, const std::vector<Rule>& rules,
                                       const OperationContext& ctx, EventKind kind) {
  std::map<ElementRef, double> out;
  for (const auto& r : rules) {
    bool triggered = false;
    for (const auto& p : r.events) triggered = triggered || pattern_matches(p, ctx, kind);
    if (!triggered || (r.condition && !holds(c, *r.condition, ctx))) continue;
    for (const auto& a : r.actions) {
      for (const auto& x : expand(c, resolve_element(c, a.element))) out[x] = a.weight;
    }
  }
  return out;
}

}  // namespace

WeightAssignment oracle_fire(const Constellation& c, const std::vector<Rule>& rules,
                             const OperationContext& ctx) {
  auto own = fire_pass(c, rules, ctx, ctx.event);
  if (ctx.event != EventKind::Displayed) {
    auto group = [](const ElementRef& e) {
      return e.is_attribute() ? e.path[0] + "\x1f" + e.path[1] : e.path[0];
    };
    std::set<std::string> covered;
    for (const auto& [e, _] : own) covered.insert(group(e));
    for (const auto& [e, w] : fire_pass(c, rules, ctx, EventKind::Displayed)) {
      if (!covered.count(group(e))) own.emplace(e, w);
    }
  }
  WeightAssignment wa;
  for (const auto& [e, w] : own) wa.set(e, w, "");
  return wa;
}

namespace {

ElementPath dotted(const std::string& text) {
  ElementPath p;
  p.segments = split(text, '.');
  return p;
}

PriorityAction prio(const std::string& e, double w) { return {dotted(e), w}; }

Condition current(const std::string& e) {
  Condition c;
  c.element = dotted(e);
  return c;
}

}  // namespace

std::vector<GoldenRule> golden_rules() {
  std::vector<GoldenRule> out;

  Rule ex1;
  ex1.name = "display_temps_ventes";
  ex1.target = dotted("Temps");
  ex1.events = {EventPattern{}};
  ex1.actions = {prio("Temps.HTPS.Année", 1), prio("Temps.HTPS.Trimestre", 1), prio("Temps.HTPS.MoisN", 0),
                 prio("Temps.HTPS.Libellém", 1)};
  out.push_back({"temps_priority.rul", ex1});

  Rule ex2;
  ex2.name = "display_temps_ventes";
  ex2.target = dotted("Temps");
  EventPattern rotated;
  rotated.kind = EventKind::Rotated;
  ex2.events = {EventPattern{}, rotated};
  ex2.condition = current("Ventes");
  ex2.actions = {prio("Temps.HTPS.Année", 1), prio("Temps.HTPS.Trimestre", 0), prio("Temps.HTPS.MoisN", 1)};
  out.push_back({"temps_ventes_context.rul", ex2});

  Rule ex3;
  ex3.name = "display_temps_achats";
  ex3.target = dotted("Temps");
  ex3.events = {EventPattern{}};
  ex3.condition = current("Achats");
  ex3.actions = {prio("Temps.HTPS.Année", 1), prio("Temps.HTPS.Trimestre", 1), prio("Temps.HTPS.MoisN", 0)};
  out.push_back({"temps_achats_context.rul", ex3});

  Rule clients;
  clients.name = "display_clients";
  clients.target = dotted("Clients");
  clients.events = {EventPattern{}};
  clients.condition = current("HGEO");
  clients.actions = {prio("Produits.HGEO.CodeCli", 0.4), prio("Produits.HGEO.Ville", 0.4),
                     prio("Produits.HGEO.DeptN", 0.8), prio("Produits.HGEO.Région", 0.6)};
  out.push_back({"display_clients_mistyped.rul", clients});
  return out;
}

}  // namespace olap::testing
