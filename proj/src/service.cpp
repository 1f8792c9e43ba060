#include "olap/service.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "olap/lexer.hpp"
#include "olap/render.hpp"
#include "olap/rule.hpp"
#include "olap/text.hpp"

namespace olap {

namespace fs = std::filesystem;

std::string_view to_string(OpKind k) {
  switch (k) {
    case OpKind::Display: return "display";
    case OpKind::Rotate: return "rotate";
    case OpKind::Drilldown: return "drilldown";
    case OpKind::Rollup: return "rollup";
  }
  return "?";
}

std::string to_command(const Operation& op) {
  std::string out;
  switch (op.kind) {
    case OpKind::Display: {
      out = "DISPLAY " + op.fact + " (";
      for (std::size_t i = 0; i < op.measures.size(); ++i) {
        if (i) out += ", ";
        out += op.measures[i].label();
      }
      out += ") ROWS " + op.row_dim + "." + op.row_hier + " COLS " + op.col_dim + "." + op.col_hier;
      break;
    }
    case OpKind::Rotate:
      out = "ROTATE " + op.dim_old + " TO " + op.dim_new + "." + op.hier;
      break;
    case OpKind::Drilldown:
      out = "DRILLDOWN " + op.dim + " TO " + op.attr;
      break;
    case OpKind::Rollup:
      out = "ROLLUP " + op.dim + " TO " + op.attr;
      break;
  }
  if (op.threshold) out += " THRESHOLD " + format_weight(*op.threshold);
  return out + ";";
}

namespace {

[[noreturn]] void syntax(const std::string& msg, std::optional<SourcePos> pos = std::nullopt) {
  throw Error(ErrorCode::CommandSyntaxError, msg, pos);
}

MeasureSpec read_measure(TokenStream& ts) {
  const Token& agg = ts.expect_ident("aggregation function");
  auto fn = parse_agg(agg.text);
  if (!fn) syntax("unknown aggregation function " + agg.text, agg.pos);
  ts.expect_symbol("(");
  MeasureSpec m{*fn, ts.expect_ident("measure").text};
  ts.expect_symbol(")");
  return m;
}

MeasureSpec parse_measure_text(std::string_view text) {
  try {
    TokenStream ts(tokenize(text));
    MeasureSpec m = read_measure(ts);
    if (!ts.at_end()) ts.fail("end of measure");
    return m;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::CommandSyntaxError) throw;
    syntax("bad measure '" + std::string(text) + "': " + e.message());
  }
}

std::optional<double> read_threshold(TokenStream& ts) {
  if (!ts.accept_keyword("THRESHOLD")) return std::nullopt;
  bool negative = ts.accept_symbol("-");
  const Token& t = ts.peek();
  if (t.kind != TokenKind::Number) ts.fail("threshold value");
  auto v = parse_number(t.text);
  if (!v) ts.fail("threshold value");
  ts.next();
  return negative ? -*v : *v;
}

void read_qualified(TokenStream& ts, std::string& dim, std::string& hier) {
  dim = ts.expect_ident("dimension").text;
  ts.expect_symbol(".");
  hier = ts.expect_ident("hierarchy").text;
}

void finish(TokenStream& ts) {
  ts.accept_symbol(";");
  if (!ts.at_end()) ts.fail("end of command");
}

Command parse_tokens(TokenStream& ts) {
  if (ts.accept_keyword("DISPLAY")) {
    Operation op;
    op.kind = OpKind::Display;
    op.fact = ts.expect_ident("fact").text;
    ts.expect_symbol("(");
    do {
      op.measures.push_back(read_measure(ts));
    } while (ts.accept_symbol(","));
    ts.expect_symbol(")");
    ts.expect_keyword("ROWS");
    read_qualified(ts, op.row_dim, op.row_hier);
    ts.expect_keyword("COLS");
    read_qualified(ts, op.col_dim, op.col_hier);
    op.threshold = read_threshold(ts);
    finish(ts);
    return op;
  }
  if (ts.accept_keyword("ROTATE")) {
    Operation op;
    op.kind = OpKind::Rotate;
    op.dim_old = ts.expect_ident("dimension").text;
    ts.expect_keyword("TO");
    read_qualified(ts, op.dim_new, op.hier);
    op.threshold = read_threshold(ts);
    finish(ts);
    return op;
  }
  for (auto [kw, kind] : {std::pair{"DRILLDOWN", OpKind::Drilldown}, std::pair{"ROLLUP", OpKind::Rollup}}) {
    if (!ts.accept_keyword(kw)) continue;
    Operation op;
    op.kind = kind;
    op.dim = ts.expect_ident("dimension").text;
    ts.expect_keyword("TO");
    op.attr = ts.expect_ident("attribute").text;
    op.threshold = read_threshold(ts);
    finish(ts);
    return op;
  }
  if (ts.accept_keyword("SET")) {
    ts.expect_keyword("PROFILE");
    const Token& t = ts.peek();
    if (t.kind != TokenKind::Ident && t.kind != TokenKind::String) ts.fail("profile name");
    std::string name = ts.next().text;
    finish(ts);
    return SetProfileCommand{name};
  }
  if (ts.accept_keyword("SHOW")) {
    static const std::pair<const char*, ShowCommand::What> kinds[] = {
        {"WEIGHTS", ShowCommand::What::Weights}, {"TABLE", ShowCommand::What::Table},
        {"RULES", ShowCommand::What::Rules},     {"HISTORY", ShowCommand::What::History},
        {"SCHEMA", ShowCommand::What::Schema}};
    for (const auto& [kw, what] : kinds) {
      if (ts.accept_keyword(kw)) {
        finish(ts);
        return ShowCommand{what};
      }
    }
    ts.fail("WEIGHTS, TABLE, RULES, HISTORY or SCHEMA");
  }
  if (ts.accept_keyword("DROP")) {
    ts.expect_keyword("RULE");
    std::string name = ts.expect_ident("rule name").text;
    finish(ts);
    return DropRuleCommand{name};
  }
  if (ts.accept_keyword("HELP")) {
    finish(ts);
    return HelpCommand{};
  }
  ts.fail("command (DISPLAY, ROTATE, DRILLDOWN, ROLLUP, LOAD, SET, SHOW, CREATE, DROP, HELP)");
}

// LOAD takes a free-form path, which the tokenizer would reject.
Command parse_load(std::string_view line, std::size_t lead) {
  std::size_t i = lead + 4;
  auto skip_ws = [&] {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
  };
  skip_ws();
  std::size_t word = i;
  while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
  std::string_view what = line.substr(word, i - word);
  LoadCommand cmd{};
  if (iequals(what, "SCHEMA")) {
    cmd.what = LoadCommand::What::Schema;
  } else if (iequals(what, "DATA")) {
    cmd.what = LoadCommand::What::Data;
  } else if (iequals(what, "RULES")) {
    cmd.what = LoadCommand::What::Rules;
  } else {
    syntax("expected SCHEMA, DATA or RULES after LOAD", SourcePos{1, static_cast<int>(word) + 1});
  }
  skip_ws();
  std::string path(trim(line.substr(i)));
  if (!path.empty() && path.back() == ';') path.pop_back();
  path = std::string(trim(path));
  if (path.size() >= 2 && (path.front() == '\'' || path.front() == '"') && path.back() == path.front()) {
    path = path.substr(1, path.size() - 2);
  }
  if (path.empty()) syntax("expected a path after LOAD", SourcePos{1, static_cast<int>(line.size()) + 1});
  cmd.path = path;
  return cmd;
}

std::string first_word(std::string_view s, std::size_t& lead) {
  lead = 0;
  while (lead < s.size() && std::isspace(static_cast<unsigned char>(s[lead]))) ++lead;
  std::size_t end = lead;
  while (end < s.size() && std::isalpha(static_cast<unsigned char>(s[end]))) ++end;
  return std::string(s.substr(lead, end - lead));
}

std::string random_id() {
  static std::mutex mu;
  static std::mt19937_64 gen{std::random_device{}()};
  std::lock_guard lock(mu);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(gen()));
  return buf;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kHelp =
    "DISPLAY <fact> (AGG(measure), ...) ROWS <dim>.<hier> COLS <dim>.<hier> [THRESHOLD n];\n"
    "ROTATE <dim> TO <dim>.<hier> [THRESHOLD n];\n"
    "DRILLDOWN <dim> TO <attr> [THRESHOLD n];\n"
    "ROLLUP <dim> TO <attr|ALL> [THRESHOLD n];\n"
    "LOAD SCHEMA|DATA|RULES <path>;\n"
    "SET PROFILE <name>;\n"
    "SHOW WEIGHTS|TABLE|RULES|HISTORY|SCHEMA;\n"
    "CREATE RULE ...;  DROP RULE <name>;\n";

}  // namespace

Command parse_command(std::string_view line) {
  std::size_t lead = 0;
  std::string word = first_word(line, lead);
  if (iequals(word, "LOAD")) return parse_load(line, lead);
  if (iequals(word, "CREATE")) return CreateRulesCommand{std::string(line)};
  std::vector<Token> tokens;
  try {
    tokens = tokenize(line);
  } catch (const Error& e) {
    throw Error(ErrorCode::CommandSyntaxError, e.message(), e.position());
  }
  if (tokens.size() <= 1) syntax("empty command", SourcePos{1, 1});
  TokenStream ts(std::move(tokens));
  try {
    return parse_tokens(ts);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SyntaxError) {
      throw Error(ErrorCode::CommandSyntaxError, e.message(), e.position());
    }
    throw;
  }
}

Operation operation_from_json(const nlohmann::json& body) {
  if (!body.is_object()) syntax("operation body must be a JSON object");
  auto str = [&](const char* key) -> std::string {
    auto it = body.find(key);
    if (it == body.end() || !it->is_string()) syntax(std::string("missing string field '") + key + "'");
    return it->get<std::string>();
  };
  auto split_axis = [&](const char* key, const char* dkey, const char* hkey, std::string& d,
                        std::string& h) {
    if (body.contains(dkey)) {
      d = str(dkey);
      h = str(hkey);
      return;
    }
    std::string spec = str(key);
    auto dot = spec.find('.');
    if (dot == std::string::npos) syntax(std::string("field '") + key + "' must be <dim>.<hier>");
    d = spec.substr(0, dot);
    h = spec.substr(dot + 1);
  };

  Operation op;
  std::string kind = str("kind");
  if (iequals(kind, "display")) {
    op.kind = OpKind::Display;
    op.fact = str("fact");
    auto it = body.find("measures");
    if (it == body.end() || !it->is_array()) syntax("missing array field 'measures'");
    for (const auto& m : *it) {
      if (m.is_string()) {
        op.measures.push_back(parse_measure_text(m.get<std::string>()));
      } else if (m.is_object() && m.contains("agg") && m.contains("measure")) {
        auto fn = parse_agg(m["agg"].get<std::string>());
        if (!fn) syntax("unknown aggregation function " + m["agg"].get<std::string>());
        op.measures.push_back({*fn, m["measure"].get<std::string>()});
      } else {
        syntax("measures entries must be \"AGG(measure)\" strings");
      }
    }
    split_axis("rows", "row_dim", "row_hier", op.row_dim, op.row_hier);
    split_axis("cols", "col_dim", "col_hier", op.col_dim, op.col_hier);
  } else if (iequals(kind, "rotate")) {
    op.kind = OpKind::Rotate;
    op.dim_old = str("d_old");
    op.dim_new = str("d_new");
    op.hier = str("hier");
  } else if (iequals(kind, "drilldown") || iequals(kind, "rollup")) {
    op.kind = iequals(kind, "drilldown") ? OpKind::Drilldown : OpKind::Rollup;
    op.dim = str("dim");
    op.attr = str("attr");
  } else {
    syntax("unknown operation kind '" + kind + "'");
  }
  if (auto it = body.find("threshold"); it != body.end() && !it->is_null()) {
    if (!it->is_number()) syntax("threshold must be a number");
    op.threshold = it->get<double>();
  }
  return op;
}

std::string Session::profile() const {
  std::lock_guard lock(mu_);
  return profile_;
}

std::optional<MultidimTable> Session::table() const {
  std::lock_guard lock(mu_);
  return table_;
}

std::vector<std::string> Session::history() const {
  std::lock_guard lock(mu_);
  return history_;
}

Snapshot Engine::snapshot() const {
  std::shared_lock lock(mu_);
  return snap_;
}

Snapshot Engine::require_schema() const {
  Snapshot s = snapshot();
  if (!s.schema) throw Error(ErrorCode::NoSchema, "no schema loaded (LOAD SCHEMA <file>)");
  return s;
}

void Engine::publish(Snapshot next) {
  std::unique_lock lock(mu_);
  snap_ = std::move(next);
}

void Engine::load_schema_text(std::string_view ddl, std::string name) {
  auto schema = std::make_shared<const Constellation>(parse_schema(ddl, std::move(name)));
  std::lock_guard writer(writer_mu_);
  publish({schema, std::make_shared<const DataStore>(schema), std::make_shared<const RuleEngine>(schema)});
}

void Engine::load_schema_file(const fs::path& path) {
  load_schema_text(read_file(path), path.stem().string());
}

std::vector<std::pair<std::string, std::size_t>> Engine::load_data_dir(const fs::path& dir) {
  std::lock_guard writer(writer_mu_);
  Snapshot s = require_schema();
  if (!fs::is_directory(dir)) throw Error(ErrorCode::Io, dir.string() + " is not a directory");
  std::map<std::string, fs::path> files;  // folded stem -> path
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && iequals(entry.path().extension().string(), ".csv")) {
      files[fold_case(entry.path().stem().string())] = entry.path();
    }
  }
  DataStore next = *s.data;
  std::vector<std::pair<std::string, std::size_t>> loaded;
  auto load = [&](const std::string& name, bool is_fact) {
    auto it = files.find(fold_case(name));
    if (it == files.end()) return;
    std::ifstream in(it->second, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + it->second.string());
    try {
      if (is_fact) {
        next.load_fact(name, in);
        loaded.emplace_back(name, next.fact_rows(name)->rows.size());
      } else {
        next.load_dimension(name, in);
        loaded.emplace_back(name, next.dimension_rows(name)->rows.size());
      }
    } catch (const Error& e) {
      throw Error(e.code(), it->second.filename().string() + ": " + e.message(), e.position());
    }
  };
  for (const auto& d : s.schema->dimensions()) load(d.name, false);
  for (const auto& f : s.schema->facts()) load(f.name, true);
  if (loaded.empty()) throw Error(ErrorCode::Io, "no <NAME>.csv file in " + dir.string() + " matches the schema");
  s.data = std::make_shared<const DataStore>(std::move(next));
  publish(std::move(s));
  return loaded;
}

std::size_t Engine::load_csv(std::string_view element, std::istream& csv) {
  std::lock_guard writer(writer_mu_);
  Snapshot s = require_schema();
  DataStore next = *s.data;
  std::size_t n = 0;
  if (const Fact* f = s.schema->find_fact(element)) {
    next.load_fact(f->name, csv);
    n = next.fact_rows(f->name)->rows.size();
  } else if (const Dimension* d = s.schema->find_dimension(element)) {
    next.load_dimension(d->name, csv);
    n = next.dimension_rows(d->name)->rows.size();
  } else {
    throw Error(ErrorCode::UnresolvedName, "no fact or dimension named " + std::string(element));
  }
  s.data = std::make_shared<const DataStore>(std::move(next));
  publish(std::move(s));
  return n;
}

std::vector<std::string> Engine::load_rules_text(std::string_view profile, std::string_view source) {
  std::vector<Rule> rules = parse_rules(source);
  std::lock_guard writer(writer_mu_);
  Snapshot s = require_schema();
  RuleEngine next = *s.rules;
  std::vector<std::string> names;
  for (const auto& r : rules) {
    next.register_rule(profile, r);
    names.push_back(r.name);
  }
  s.rules = std::make_shared<const RuleEngine>(std::move(next));
  publish(std::move(s));
  return names;
}

std::vector<std::string> Engine::load_rules_file(std::string_view profile, const fs::path& path) {
  return load_rules_text(profile, read_file(path));
}

void Engine::drop_rule(std::string_view profile, std::string_view name) {
  std::lock_guard writer(writer_mu_);
  Snapshot s = require_schema();
  RuleEngine next = *s.rules;
  next.drop_rule(profile, name);
  s.rules = std::make_shared<const RuleEngine>(std::move(next));
  publish(std::move(s));
}

std::shared_ptr<Session> Engine::create_session(std::string profile) {
  if (profile.empty()) profile = "default";
  std::lock_guard lock(sessions_mu_);
  std::string id;
  do {
    id = random_id();
  } while (sessions_.count(id));
  auto s = std::make_shared<Session>(id, std::move(profile));
  sessions_[id] = s;
  return s;
}

std::shared_ptr<Session> Engine::session(std::string_view id) const {
  std::lock_guard lock(sessions_mu_);
  auto it = sessions_.find(std::string(id));
  if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, "unknown session " + std::string(id));
  return it->second;
}

namespace {

// Current table of `s` if it was built on the snapshot's schema. Caller holds s.mu_.
const MultidimTable* live_table(const std::optional<MultidimTable>& table,
                                const std::shared_ptr<const Constellation>& built_on,
                                const Snapshot& snap) {
  if (!table || built_on != snap.schema) return nullptr;
  return &*table;
}

}  // namespace

MultidimTable Engine::apply(Session& s, const Operation& op) {
  Snapshot snap = require_schema();
  std::lock_guard lock(s.mu_);
  WeightAssignment fired;
  OperatorEnv env{*snap.data, *snap.rules, s.profile_, &fired};
  MultidimTable result;
  if (op.kind == OpKind::Display) {
    result = display(env, op.fact, op.measures, op.row_dim, op.row_hier, op.col_dim, op.col_hier,
                     op.threshold);
  } else {
    const MultidimTable* cur = live_table(s.table_, s.table_schema_, snap);
    if (!cur) throw Error(ErrorCode::NoTable, "no current table (run DISPLAY first)");
    switch (op.kind) {
      case OpKind::Rotate:
        result = rotate(env, *cur, op.dim_old, op.dim_new, op.hier, op.threshold);
        break;
      case OpKind::Drilldown:
        result = drilldown(env, *cur, op.dim, op.attr, op.threshold);
        break;
      case OpKind::Rollup:
        result = rollup(env, *cur, op.dim, op.attr, op.threshold);
        break;
      case OpKind::Display:
        break;
    }
  }
  s.table_ = result;
  s.table_schema_ = snap.schema;
  s.last_weights_ = op.threshold ? std::optional(fired) : std::nullopt;
  s.history_.push_back(to_command(op));
  return result;
}

std::optional<MultidimTable> Engine::current_table(Session& s) const {
  Snapshot snap = snapshot();
  std::lock_guard lock(s.mu_);
  if (const MultidimTable* t = live_table(s.table_, s.table_schema_, snap)) return *t;
  return std::nullopt;
}

WeightAssignment Engine::session_weights(Session& s) const {
  Snapshot snap = require_schema();
  std::lock_guard lock(s.mu_);
  if (s.last_weights_) return *s.last_weights_;
  const MultidimTable* t = live_table(s.table_, s.table_schema_, snap);
  if (!t) return {};
  OperationContext ctx;
  ctx.event = EventKind::Displayed;
  ctx.fact = t->subject.fact;
  ctx.measures = t->subject.measures;
  ctx.rows = ContextAxis{t->rows.dimension, t->rows.hierarchy, t->rows.attributes};
  ctx.cols = ContextAxis{t->cols.dimension, t->cols.hierarchy, t->cols.attributes};
  return snap.rules->fire(s.profile_, ctx);
}

std::string Engine::run_command(Session& s, std::string_view line) {
  Command cmd = parse_command(line);
  auto record = [&](std::string text) {
    std::lock_guard lock(s.mu_);
    s.history_.push_back(std::move(text));
  };
  std::string stmt(trim(line));

  if (auto* op = std::get_if<Operation>(&cmd)) return render_text(apply(s, *op));

  if (auto* load = std::get_if<LoadCommand>(&cmd)) {
    std::string out;
    switch (load->what) {
      case LoadCommand::What::Schema: {
        load_schema_file(load->path);
        Snapshot snap = snapshot();
        out = "schema " + snap.schema->name() + ": " + std::to_string(snap.schema->facts().size()) +
              " fact(s), " + std::to_string(snap.schema->dimensions().size()) + " dimension(s)\n";
        break;
      }
      case LoadCommand::What::Data:
        for (const auto& [name, n] : load_data_dir(load->path)) {
          out += name + ": " + std::to_string(n) + " row(s)\n";
        }
        break;
      case LoadCommand::What::Rules:
        for (const auto& name : load_rules_file(s.profile(), load->path)) {
          out += "registered rule " + name + "\n";
        }
        break;
    }
    record(stmt);
    return out;
  }
  if (auto* set = std::get_if<SetProfileCommand>(&cmd)) {
    {
      std::lock_guard lock(s.mu_);
      s.profile_ = set->profile;
      s.last_weights_.reset();
    }
    record(stmt);
    return "profile " + set->profile + "\n";
  }
  if (auto* create = std::get_if<CreateRulesCommand>(&cmd)) {
    std::string out;
    for (const auto& name : load_rules_text(s.profile(), create->source)) {
      out += "registered rule " + name + "\n";
    }
    record(stmt);
    return out;
  }
  if (auto* drop = std::get_if<DropRuleCommand>(&cmd)) {
    drop_rule(s.profile(), drop->name);
    record(stmt);
    return "dropped rule " + drop->name + "\n";
  }
  if (std::holds_alternative<HelpCommand>(cmd)) return kHelp;

  const auto& show = std::get<ShowCommand>(cmd);
  switch (show.what) {
    case ShowCommand::What::Weights:
      return render_weights(session_weights(s));
    case ShowCommand::What::Table: {
      auto t = current_table(s);
      if (!t) throw Error(ErrorCode::NoTable, "no current table (run DISPLAY first)");
      return render_text(*t);
    }
    case ShowCommand::What::Rules: {
      Snapshot snap = require_schema();
      const Profile* p = snap.rules->profile(s.profile());
      if (!p || p->rules.empty()) return "(no rules)\n";
      std::string out;
      for (const auto& r : p->rules) out += to_source(r.source) + "\n";
      return out;
    }
    case ShowCommand::What::History: {
      std::string out;
      int i = 0;
      for (const auto& h : s.history()) out += std::to_string(++i) + "  " + h + "\n";
      return out;
    }
    case ShowCommand::What::Schema:
      return schema_to_json(*require_schema().schema).dump(2) + "\n";
  }
  return {};
}

WeightAssignment weights_for_context(const Snapshot& snap, std::string_view profile,
                                     const std::map<std::string, std::string>& fields) {
  if (!snap.schema) throw Error(ErrorCode::NoSchema, "no schema loaded");
  const Constellation& c = *snap.schema;
  auto get = [&](const char* key) -> std::string {
    auto it = fields.find(key);
    return it == fields.end() ? std::string() : it->second;
  };
  auto dimension = [&](const std::string& name) -> const Dimension* {
    if (name.empty()) return nullptr;
    const Dimension* d = c.find_dimension(name);
    if (!d) throw Error(ErrorCode::UnknownDimension, "unknown dimension " + name);
    return d;
  };

  OperationContext ctx;
  std::string event = get("event");
  if (!event.empty()) {
    auto k = parse_event_kind(event);
    if (!k) syntax("unknown event " + event);
    ctx.event = *k;
  }
  if (std::string fact = get("fact"); !fact.empty()) {
    const Fact* f = c.find_fact(fact);
    if (!f) throw Error(ErrorCode::UnknownFact, "unknown fact " + fact);
    ctx.fact = f->name;
    std::string measures = get("measures");
    if (measures.empty()) {
      ctx.measures = f->measures;
    } else {
      for (const auto& m : split(measures, ',')) ctx.measures.push_back(parse_measure_text(trim(m)));
    }
  }
  auto axis = [&](const char* dkey, const char* hkey, const char* akey) -> std::optional<ContextAxis> {
    const Dimension* d = dimension(get(dkey));
    if (!d) return std::nullopt;
    std::string hname = get(hkey);
    const Hierarchy* h = hname.empty() ? &d->hierarchies.front() : d->find_hierarchy(hname);
    if (!h) throw Error(ErrorCode::UnknownHierarchy, d->name + " has no hierarchy " + hname);
    ContextAxis a{d->name, h->name, {}};
    std::string attrs = get(akey);
    if (attrs.empty()) {
      a.attributes.push_back(h->coarsest());
    } else {
      for (const auto& x : split(attrs, ',')) a.attributes.emplace_back(trim(x));
    }
    return a;
  };
  ctx.rows = axis("rowdim", "rowhier", "rowattrs");
  ctx.cols = axis("coldim", "colhier", "colattrs");
  if (const Dimension* d = dimension(get("from"))) ctx.from_dim = d->name;
  if (const Dimension* d = dimension(get("to"))) ctx.to_dim = d->name;
  if (const Dimension* d = dimension(get("dim"))) {
    ctx.target_dim = d->name;
    std::string hname = get("hier");
    const Hierarchy* h = hname.empty() ? &d->hierarchies.front() : d->find_hierarchy(hname);
    if (!h) throw Error(ErrorCode::UnknownHierarchy, d->name + " has no hierarchy " + hname);
    ctx.target_hier = h->name;
    ctx.target_param = get("param");
  }
  return snap.rules->fire(profile, ctx);
}

}  // namespace olap
