#include "olap/data_store.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "olap/lexer.hpp"
#include "olap/text.hpp"

namespace olap {

std::optional<std::size_t> DimensionRows::column(std::string_view attr) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (iequals(columns[i], attr)) return i;
  }
  return std::nullopt;
}

std::string_view to_string(Comparator op) {
  switch (op) {
    case Comparator::Eq: return "=";
    case Comparator::Ne: return "<>";
    case Comparator::Lt: return "<";
    case Comparator::Le: return "<=";
    case Comparator::Gt: return ">";
    case Comparator::Ge: return ">=";
  }
  return "=";
}

std::string Predicate::to_string() const {
  std::string lit = literal;
  bool numeric = parse_number(lit).has_value();
  std::string quoted;
  if (!numeric) {
    quoted = "'";
    for (char ch : lit) {
      quoted += ch;
      if (ch == '\'') quoted += '\'';
    }
    quoted += "'";
  }
  return element.spelling() + " " + std::string(olap::to_string(op)) + " " + (numeric ? lit : quoted);
}

bool compare_values(std::string_view lhs, Comparator op, std::string_view rhs) {
  int cmp = 0;
  auto ln = parse_number(lhs);
  auto rn = parse_number(rhs);
  if (ln && rn) {
    cmp = (*ln < *rn) ? -1 : (*ln > *rn ? 1 : 0);
  } else {
    auto c = lhs.compare(rhs);
    cmp = c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  switch (op) {
    case Comparator::Eq: return cmp == 0;
    case Comparator::Ne: return cmp != 0;
    case Comparator::Lt: return cmp < 0;
    case Comparator::Le: return cmp <= 0;
    case Comparator::Gt: return cmp > 0;
    case Comparator::Ge: return cmp >= 0;
  }
  return false;
}

Restriction parse_restriction(const Constellation& c, std::string_view text) {
  Restriction r;
  if (trim(text).empty() || iequals(trim(text), "true")) return r;
  TokenStream ts(tokenize(text));
  do {
    ElementPath path;
    path.pos = ts.peek().pos;
    path.segments.push_back(ts.expect_ident("element").text);
    if (ts.accept_symbol("[")) {
      path.segments.push_back(ts.expect_ident("hierarchy").text);
      ts.expect_symbol("]");
      path.bracketed = true;
    }
    while (ts.accept_symbol(".")) path.segments.push_back(ts.expect_ident().text);
    Predicate p;
    p.element = resolve_element(c, path);
    if (!p.element.is_attribute() && p.element.kind != ElementKind::Measure) {
      throw Error(ErrorCode::SyntaxError,
                  "restriction must compare a parameter, weak attribute or measure", path.pos);
    }
    const Token& op = ts.next();
    if (op.is_symbol("=")) p.op = Comparator::Eq;
    else if (op.is_symbol("<>") || op.is_symbol("!=")) p.op = Comparator::Ne;
    else if (op.is_symbol("<")) p.op = Comparator::Lt;
    else if (op.is_symbol("<=")) p.op = Comparator::Le;
    else if (op.is_symbol(">")) p.op = Comparator::Gt;
    else if (op.is_symbol(">=")) p.op = Comparator::Ge;
    else throw Error(ErrorCode::SyntaxError, "expected comparator, got " + describe(op), op.pos);
    const Token& lit = ts.next();
    if (lit.kind == TokenKind::End || lit.kind == TokenKind::Symbol) {
      throw Error(ErrorCode::SyntaxError, "expected literal, got " + describe(lit), lit.pos);
    }
    p.literal = lit.text;
    r.conjuncts.push_back(std::move(p));
  } while (ts.accept_keyword("AND"));
  if (!ts.at_end()) ts.fail("AND or end of restriction");
  return r;
}

std::optional<double> CellGrid::find(const Tuple& row, const Tuple& col, std::size_t measure) const {
  for (std::size_t r = 0; r < row_headers.size(); ++r) {
    if (row_headers[r] != row) continue;
    for (std::size_t c = 0; c < col_headers.size(); ++c) {
      if (col_headers[c] == col) {
        if (auto v = at(r, c, measure)) return v;
      }
    }
  }
  return std::nullopt;
}

std::size_t CellGrid::present_cells() const {
  return static_cast<std::size_t>(
      std::count_if(cells.begin(), cells.end(), [](const auto& v) { return v.has_value(); }));
}

namespace {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> lines;  // source line of each row
};

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    auto fields = split(line, ',');
    for (auto& f : fields) f = std::string(trim(f));
    if (!have_header) {
      t.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw Error(ErrorCode::HeaderMismatch,
                  "line " + std::to_string(lineno) + " has " + std::to_string(fields.size()) +
                      " fields, header has " + std::to_string(t.header.size()));
    }
    t.rows.push_back(std::move(fields));
    t.lines.push_back(lineno);
  }
  if (!have_header) throw Error(ErrorCode::HeaderMismatch, "CSV has no header line");
  return t;
}

// Maps each expected column to its position in the CSV header.
std::vector<std::size_t> match_header(const std::vector<std::string>& header,
                                      const std::vector<std::string>& expected,
                                      std::string_view what) {
  std::vector<std::size_t> pos;
  std::set<std::string> seen;
  for (const auto& h : header) {
    if (!seen.insert(fold_case(h)).second) {
      throw Error(ErrorCode::HeaderMismatch, "column " + h + " repeated in " + std::string(what));
    }
  }
  std::string missing;
  for (const auto& e : expected) {
    auto it = std::find_if(header.begin(), header.end(), [&](const auto& h) { return iequals(h, e); });
    if (it == header.end()) {
      missing += (missing.empty() ? "" : ", ") + e;
    } else {
      pos.push_back(static_cast<std::size_t>(it - header.begin()));
    }
  }
  if (!missing.empty()) {
    throw Error(ErrorCode::HeaderMismatch, std::string(what) + " CSV lacks column(s) " + missing);
  }
  if (header.size() != expected.size()) {
    std::string extra;
    for (const auto& h : header) {
      if (std::none_of(expected.begin(), expected.end(), [&](const auto& e) { return iequals(h, e); })) {
        extra += (extra.empty() ? "" : ", ") + h;
      }
    }
    throw Error(ErrorCode::HeaderMismatch, std::string(what) + " CSV has unexpected column(s) " + extra);
  }
  return pos;
}

void check_dependency(const DimensionRows& d, std::size_t from, std::size_t to) {
  std::unordered_map<std::string, std::size_t> seen;  // value -> first row
  for (std::size_t r = 0; r < d.rows.size(); ++r) {
    const auto& row = d.rows[r];
    auto [it, inserted] = seen.emplace(row[from], r);
    if (!inserted && d.rows[it->second][to] != row[to]) {
      throw Error(ErrorCode::DependencyViolation,
                  d.dimension + ": " + d.columns[from] + "=" + row[from] + " maps to both " +
                      d.columns[to] + "=" + d.rows[it->second][to] + " and " + d.columns[to] + "=" +
                      row[to]);
    }
  }
}

std::string ref_column(const std::string& dim) { return fold_case(dim) + "_ref"; }

}  // namespace

DimensionRows load_dimension_rows(const Constellation& c, std::string_view dim, std::istream& csv) {
  const Dimension* d = c.find_dimension(dim);
  if (!d) throw Error(ErrorCode::UnknownDimension, "unknown dimension " + std::string(dim));
  auto table = read_csv(csv);

  DimensionRows out;
  out.dimension = d->name;
  for (const auto& a : d->attributes) out.columns.push_back(a.name);
  auto pos = match_header(table.header, out.columns, d->name);

  std::size_t key = *out.column(d->key());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    std::vector<std::string> row;
    row.reserve(pos.size());
    for (auto p : pos) row.push_back(table.rows[r][p]);
    if (!out.by_key.emplace(row[key], out.rows.size()).second) {
      throw Error(ErrorCode::DuplicateKey, d->name + ": key " + d->key() + "=" + row[key] +
                                               " repeated at line " + std::to_string(table.lines[r]));
    }
    out.rows.push_back(std::move(row));
  }

  for (const auto& h : d->hierarchies) {
    for (std::size_t i = 0; i + 1 < h.params.size(); ++i) {
      check_dependency(out, *out.column(h.params[i]), *out.column(h.params[i + 1]));
    }
    for (const auto& w : h.weak) {
      for (const auto& a : w.attrs) check_dependency(out, *out.column(w.param), *out.column(a));
    }
  }
  return out;
}

FactRows load_fact_rows(const Constellation& c, const DataStore& store, std::string_view fact,
                        std::istream& csv) {
  const Fact* f = c.find_fact(fact);
  if (!f) throw Error(ErrorCode::UnknownFact, "unknown fact " + std::string(fact));
  auto table = read_csv(csv);

  FactRows out;
  out.fact = f->name;
  std::vector<std::string> expected;
  for (const auto& m : f->measures) {
    out.measures.push_back(m.measure);
    expected.push_back(m.measure);
  }
  std::vector<const DimensionRows*> dim_rows;
  for (const auto& d : c.star(f->name)) {
    out.dimensions.push_back(d);
    expected.push_back(ref_column(d));
    const DimensionRows* rows = store.dimension_rows(d);
    if (!rows) {
      throw Error(ErrorCode::UnresolvedReference,
                  f->name + " references dimension " + d + ", which has no loaded instances");
    }
    dim_rows.push_back(rows);
  }
  auto pos = match_header(table.header, expected, f->name);

  const std::size_t nm = out.measures.size();
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& src = table.rows[r];
    FactRow row;
    for (std::size_t m = 0; m < nm; ++m) {
      auto v = parse_number(src[pos[m]]);
      if (!v) {
        throw Error(ErrorCode::NonNumericMeasure,
                    f->name + ": measure " + out.measures[m] + " has non-numeric value '" +
                        src[pos[m]] + "' at line " + std::to_string(table.lines[r]));
      }
      row.measures.push_back(*v);
    }
    for (std::size_t d = 0; d < dim_rows.size(); ++d) {
      const auto& key = src[pos[nm + d]];
      if (!dim_rows[d]->by_key.count(key)) {
        throw Error(ErrorCode::UnresolvedReference,
                    f->name + ": line " + std::to_string(table.lines[r]) + " references unknown " +
                        out.dimensions[d] + " key '" + key + "'");
      }
      row.keys.push_back(key);
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

DataStore::DataStore(std::shared_ptr<const Constellation> schema) : schema_(std::move(schema)) {}

void DataStore::load_dimension(std::string_view dim, std::istream& csv) {
  put_dimension(load_dimension_rows(*schema_, dim, csv));
}

void DataStore::load_fact(std::string_view fact, std::istream& csv) {
  put_fact(load_fact_rows(*schema_, *this, fact, csv));
}

void DataStore::put_dimension(DimensionRows rows) {
  // Reloading a dimension must keep every already-loaded fact reference valid.
  for (const auto& [_, f] : facts_) {
    for (std::size_t d = 0; d < f.dimensions.size(); ++d) {
      if (!iequals(f.dimensions[d], rows.dimension)) continue;
      for (const auto& row : f.rows) {
        if (!rows.by_key.count(row.keys[d])) {
          throw Error(ErrorCode::UnresolvedReference,
                      f.fact + " references " + rows.dimension + " key '" + row.keys[d] +
                          "', which the new instances lack");
        }
      }
    }
  }
  dims_[fold_case(rows.dimension)] = std::move(rows);
}

void DataStore::put_fact(FactRows rows) { facts_[fold_case(rows.fact)] = std::move(rows); }

const DimensionRows* DataStore::dimension_rows(std::string_view dim) const {
  auto it = dims_.find(fold_case(dim));
  return it == dims_.end() ? nullptr : &it->second;
}

const FactRows* DataStore::fact_rows(std::string_view fact) const {
  auto it = facts_.find(fold_case(fact));
  return it == facts_.end() ? nullptr : &it->second;
}

namespace {

// How one displayed attribute is read from a joined fact row.
struct AttrAccess {
  std::size_t star_index;  // which fact key
  const DimensionRows* rows;
  std::size_t display_col;
  std::size_t group_col;  // owning parameter for weak attributes
};

struct Accumulator {
  double sum = 0;
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  std::size_t count = 0;

  void add(double v) {
    sum += v;
    min = std::min(min, v);
    max = std::max(max, v);
    ++count;
  }
  double result(AggFn fn) const {
    switch (fn) {
      case AggFn::Sum: return sum;
      case AggFn::Avg: return sum / static_cast<double>(count);
      case AggFn::Min: return min;
      case AggFn::Max: return max;
      case AggFn::Count: return static_cast<double>(count);
    }
    return sum;
  }
};

// Header identity: display tuple first (sort order), grouping tuple second.
using GroupKey = std::pair<Tuple, Tuple>;

}  // namespace

CellGrid DataStore::aggregate(std::string_view fact, const std::vector<MeasureSpec>& specs,
                              const std::vector<ElementRef>& row_attrs,
                              const std::vector<ElementRef>& col_attrs,
                              const Restriction& restriction) const {
  const Constellation& c = *schema_;
  const Fact* f = c.find_fact(fact);
  if (!f) throw Error(ErrorCode::UnknownFact, "unknown fact " + std::string(fact));
  const FactRows* frows = fact_rows(f->name);

  std::vector<std::size_t> measure_idx;
  for (const auto& s : specs) {
    const MeasureSpec* m = f->find_measure(s.measure);
    if (!m) throw Error(ErrorCode::UnknownMeasure, f->name + " has no measure " + s.measure);
    measure_idx.push_back(static_cast<std::size_t>(m - f->measures.data()));
  }

  const auto& star = c.star(f->name);
  auto star_index = [&](const std::string& dim) -> std::size_t {
    for (std::size_t i = 0; i < star.size(); ++i) {
      if (iequals(star[i], dim)) return i;
    }
    throw Error(ErrorCode::AttrFactMismatch, dim + " is not connected to " + f->name);
  };
  auto access = [&](const ElementRef& e) -> AttrAccess {
    if (!e.is_attribute()) {
      throw Error(ErrorCode::AttrFactMismatch, e.spelling() + " is not a parameter or weak attribute");
    }
    std::size_t si = star_index(e.path[0]);
    const Dimension* d = c.find_dimension(e.path[0]);
    const Hierarchy* h = d->find_hierarchy(e.path[1]);
    const DimensionRows* rows = dimension_rows(d->name);
    if (!rows) {
      throw Error(ErrorCode::UnresolvedReference, d->name + " has no loaded instances");
    }
    const std::string* owner = h->weak_owner(e.path[2]);
    std::size_t col = *rows->column(e.path[2]);
    return {si, rows, col, owner ? *rows->column(*owner) : col};
  };
  auto axis = [&](const std::vector<ElementRef>& attrs, std::string_view which) {
    std::vector<AttrAccess> out;
    for (const auto& e : attrs) {
      if (!out.empty() && (!iequals(e.path[0], attrs.front().path[0]) ||
                           !iequals(e.path[1], attrs.front().path[1]))) {
        throw Error(ErrorCode::MixedDimensionAxis,
                    std::string(which) + " axis mixes " + attrs.front().spelling() + " and " +
                        e.spelling());
      }
      out.push_back(access(e));
    }
    return out;
  };
  auto rows_axis = axis(row_attrs, "row");
  auto cols_axis = axis(col_attrs, "column");

  struct Filter {
    AttrAccess access;
    std::optional<std::size_t> measure;
    const Predicate* pred;
  };
  std::vector<Filter> filters;
  for (const auto& p : restriction.conjuncts) {
    if (p.element.kind == ElementKind::Measure) {
      if (!iequals(p.element.path[0], f->name)) {
        throw Error(ErrorCode::AttrFactMismatch, p.element.spelling() + " is not a measure of " + f->name);
      }
      const MeasureSpec* m = f->find_measure(p.element.path[1]);
      if (!m) throw Error(ErrorCode::UnknownMeasure, f->name + " has no measure " + p.element.path[1]);
      filters.push_back({{}, static_cast<std::size_t>(m - f->measures.data()), &p});
    } else {
      filters.push_back({access(p.element), std::nullopt, &p});
    }
  }

  auto read = [&](const FactRow& row, const std::vector<AttrAccess>& ax) {
    GroupKey k;
    for (const auto& a : ax) {
      const auto& drow = a.rows->rows[a.rows->by_key.at(row.keys[a.star_index])];
      k.first.push_back(drow[a.display_col]);
      k.second.push_back(drow[a.group_col]);
    }
    return k;
  };

  std::map<std::pair<GroupKey, GroupKey>, std::vector<Accumulator>> buckets;
  if (frows) {
    for (const auto& row : frows->rows) {
      bool keep = true;
      for (const auto& flt : filters) {
        if (flt.measure) {
          auto rhs = parse_number(flt.pred->literal);
          double v = row.measures[*flt.measure];
          bool ok = false;
          switch (flt.pred->op) {
            case Comparator::Eq: ok = rhs && v == *rhs; break;
            case Comparator::Ne: ok = !rhs || v != *rhs; break;
            case Comparator::Lt: ok = rhs && v < *rhs; break;
            case Comparator::Le: ok = rhs && v <= *rhs; break;
            case Comparator::Gt: ok = rhs && v > *rhs; break;
            case Comparator::Ge: ok = rhs && v >= *rhs; break;
          }
          if (!ok) {
            keep = false;
            break;
          }
          continue;
        }
        const auto& a = flt.access;
        const auto& drow = a.rows->rows[a.rows->by_key.at(row.keys[a.star_index])];
        if (!compare_values(drow[a.display_col], flt.pred->op, flt.pred->literal)) {
          keep = false;
          break;
        }
      }
      if (!keep) continue;
      auto& acc = buckets[{read(row, rows_axis), read(row, cols_axis)}];
      if (acc.empty()) acc.resize(specs.size());
      for (std::size_t s = 0; s < specs.size(); ++s) acc[s].add(row.measures[measure_idx[s]]);
    }
  }

  std::set<GroupKey> row_groups, col_groups;
  for (const auto& [key, _] : buckets) {
    row_groups.insert(key.first);
    col_groups.insert(key.second);
  }
  CellGrid grid;
  grid.measures = specs;
  std::map<GroupKey, std::size_t> row_pos, col_pos;
  for (const auto& g : row_groups) {
    row_pos[g] = grid.row_headers.size();
    grid.row_headers.push_back(g.first);
  }
  for (const auto& g : col_groups) {
    col_pos[g] = grid.col_headers.size();
    grid.col_headers.push_back(g.first);
  }
  grid.cells.assign(grid.row_headers.size() * grid.col_headers.size() * specs.size(), std::nullopt);
  for (const auto& [key, acc] : buckets) {
    std::size_t base = (row_pos[key.first] * grid.col_headers.size() + col_pos[key.second]) * specs.size();
    for (std::size_t s = 0; s < specs.size(); ++s) grid.cells[base + s] = acc[s].result(specs[s].agg);
  }
  return grid;
}

}  // namespace olap
