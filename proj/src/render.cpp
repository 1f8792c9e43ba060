#include "olap/render.hpp"

#include <algorithm>

#include "olap/text.hpp"

namespace olap {

namespace {

constexpr const char* kAll = "All";

struct TextCell {
  std::string text;
  bool right = false;
};

using Line = std::vector<TextCell>;

std::string layout(const std::vector<Line>& lines, std::size_t ncols) {
  std::vector<std::size_t> width(ncols, 0);
  for (const auto& l : lines) {
    for (std::size_t c = 0; c < l.size(); ++c) width[c] = std::max(width[c], display_width(l[c].text));
  }
  std::string out;
  for (const auto& l : lines) {
    std::string line;
    for (std::size_t c = 0; c < ncols; ++c) {
      const TextCell cell = c < l.size() ? l[c] : TextCell{};
      if (width[c] == 0) continue;
      if (!line.empty() || c > 0) line += "  ";
      std::string pad(width[c] - display_width(cell.text), ' ');
      line += cell.right ? pad + cell.text : cell.text + pad;
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line;
    out += '\n';
  }
  return out;
}

// Header value shown at (index, level) unless it repeats the previous entry
// under identical coarser values.
bool repeated(const std::vector<Tuple>& headers, std::size_t index, std::size_t level) {
  if (index == 0) return false;
  for (std::size_t l = 0; l <= level; ++l) {
    if (headers[index][l] != headers[index - 1][l]) return false;
  }
  return true;
}

}  // namespace

std::string render_text(const MultidimTable& t) {
  const CellGrid& g = t.grid;
  const std::size_t nm = std::max<std::size_t>(g.measures.size(), 1);
  const bool rows_all = t.rows.attributes.empty();
  const bool cols_all = t.cols.attributes.empty();
  const std::size_t nr = rows_all ? 1 : t.rows.attributes.size();
  const std::size_t label = nr;  // column holding the column-axis labels
  const std::size_t first_data = nr + 1;
  const std::size_t ncols = first_data + g.col_headers.size() * nm;

  std::vector<Line> lines;
  auto blank = [&] { return Line(ncols); };

  Line title = blank();
  title[0].text = t.subject.fact;
  title[label].text = t.cols.dimension + "." + t.cols.hierarchy;
  lines.push_back(title);

  const std::size_t col_levels = cols_all ? 1 : t.cols.attributes.size();
  for (std::size_t j = 0; j < col_levels; ++j) {
    Line l = blank();
    if (j == 0 && nm == 1 && !g.measures.empty()) l[0].text = g.measures.front().label();
    l[label].text = cols_all ? kAll : t.cols.attributes[j];
    for (std::size_t c = 0; c < g.col_headers.size(); ++c) {
      auto& cell = l[first_data + c * nm];
      cell.right = true;
      if (cols_all) {
        cell.text = kAll;
      } else if (!repeated(g.col_headers, c, j)) {
        cell.text = g.col_headers[c][j];
      }
    }
    lines.push_back(l);
  }
  if (nm > 1) {
    Line l = blank();
    for (std::size_t c = 0; c < g.col_headers.size(); ++c) {
      for (std::size_t m = 0; m < nm; ++m) l[first_data + c * nm + m] = {g.measures[m].label(), true};
    }
    lines.push_back(l);
  }

  Line axis = blank();
  axis[0].text = t.rows.dimension + "." + t.rows.hierarchy;
  lines.push_back(axis);
  Line names = blank();
  for (std::size_t i = 0; i < nr; ++i) names[i].text = rows_all ? kAll : t.rows.attributes[i];
  lines.push_back(names);

  for (std::size_t r = 0; r < g.row_headers.size(); ++r) {
    Line l = blank();
    for (std::size_t i = 0; i < nr; ++i) {
      if (rows_all) {
        l[i].text = kAll;
      } else if (!repeated(g.row_headers, r, i)) {
        l[i].text = g.row_headers[r][i];
      }
    }
    for (std::size_t c = 0; c < g.col_headers.size(); ++c) {
      for (std::size_t m = 0; m < g.measures.size(); ++m) {
        auto v = g.at(r, c, m);
        l[first_data + c * nm + m] = {v ? format_number(*v) : std::string(), true};
      }
    }
    lines.push_back(l);
  }
  return layout(lines, ncols);
}

nlohmann::json table_to_json(const MultidimTable& t) {
  using nlohmann::json;
  auto axis = [](const Axis& a) {
    return json{{"dimension", a.dimension}, {"hierarchy", a.hierarchy}, {"attributes", a.attributes}};
  };
  json measures = json::array();
  for (const auto& m : t.subject.measures) measures.push_back(m.label());
  json restriction = json::array();
  for (const auto& p : t.restriction.conjuncts) restriction.push_back(p.to_string());

  const CellGrid& g = t.grid;
  json cells = json::array();
  for (std::size_t r = 0; r < g.row_headers.size(); ++r) {
    for (std::size_t c = 0; c < g.col_headers.size(); ++c) {
      for (std::size_t m = 0; m < g.measures.size(); ++m) {
        if (auto v = g.at(r, c, m)) {
          cells.push_back({{"row", g.row_headers[r]},
                           {"col", g.col_headers[c]},
                           {"measure", g.measures[m].label()},
                           {"value", *v}});
        }
      }
    }
  }
  return json{{"subject", {{"fact", t.subject.fact}, {"measures", measures}}},
              {"rows", axis(t.rows)},
              {"cols", axis(t.cols)},
              {"restriction", restriction},
              {"row_headers", g.row_headers},
              {"col_headers", g.col_headers},
              {"cells", cells}};
}

nlohmann::json weights_to_json(const WeightAssignment& wa) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : wa.entries()) {
    nlohmann::json j{{"element", e.element.spelling()},
                     {"kind", std::string(to_string(e.element.kind))},
                     {"weight", e.weight},
                     {"rule", e.rule}};
    if (e.element.is_attribute()) {
      j["dimension"] = e.element.path[0];
      j["hierarchy"] = e.element.path[1];
      j["attribute"] = e.element.path[2];
    } else {
      j["fact"] = e.element.path[0];
      j["attribute"] = e.element.path.back();
    }
    out.push_back(std::move(j));
  }
  return out;
}

std::string render_weights(const WeightAssignment& wa) {
  std::vector<Line> lines;
  lines.push_back({{"ELEMENT"}, {"HIERARCHY"}, {"ATTRIBUTE"}, {"WEIGHT", true}, {"RULE"}});
  for (const auto& e : wa.entries()) {
    const auto& p = e.element.path;
    if (e.element.is_attribute()) {
      lines.push_back({{p[0]}, {p[1]}, {p[2]}, {format_number(e.weight), true}, {e.rule}});
    } else {
      std::string attr = e.element.kind == ElementKind::AggregatedMeasure ? p[1] + "(" + p[2] + ")" : p[1];
      lines.push_back({{p[0]}, {"NULL"}, {attr}, {format_number(e.weight), true}, {e.rule}});
    }
  }
  if (wa.empty()) return "(no weights)\n";
  return layout(lines, 5);
}

nlohmann::json schema_to_json(const Constellation& c) {
  using nlohmann::json;
  json facts = json::array();
  for (const auto& f : c.facts()) {
    json measures = json::array();
    for (const auto& m : f.measures) {
      measures.push_back({{"name", m.measure}, {"aggregation", std::string(to_string(m.agg))}});
    }
    facts.push_back({{"name", f.name}, {"measures", measures}, {"dimensions", c.star(f.name)}});
  }
  json dims = json::array();
  for (const auto& d : c.dimensions()) {
    json hiers = json::array();
    for (const auto& h : d.hierarchies) {
      json weak = json::object();
      for (const auto& w : h.weak) weak[w.param] = w.attrs;
      hiers.push_back({{"name", h.name}, {"parameters", h.params}, {"weak", weak}});
    }
    json attrs = json::array();
    for (const auto& a : d.attributes) attrs.push_back(a.name);
    dims.push_back({{"name", d.name}, {"attributes", attrs}, {"hierarchies", hiers}});
  }
  return json{{"name", c.name()}, {"facts", facts}, {"dimensions", dims}};
}

}  // namespace olap
