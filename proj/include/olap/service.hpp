#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "olap/algebra.hpp"
#include "olap/data_store.hpp"
#include "olap/rule_engine.hpp"
#include "olap/schema.hpp"

namespace olap {

enum class OpKind { Display, Rotate, Drilldown, Rollup };

std::string_view to_string(OpKind k);  // "display", "rotate", ...

/// One algebra operation as requested by a client (REPL line or HTTP body).
struct Operation {
  OpKind kind = OpKind::Display;
  // display
  std::string fact;
  std::vector<MeasureSpec> measures;
  std::string row_dim, row_hier, col_dim, col_hier;
  // rotate
  std::string dim_old, dim_new, hier;
  // drilldown / rollup
  std::string dim, attr;
  std::optional<double> threshold;

  friend bool operator==(const Operation&, const Operation&) = default;
};

/// Canonical REPL spelling, e.g. `ROTATE Produits TO Temps.HTPS THRESHOLD 0.5;`.
std::string to_command(const Operation& op);

/// Reads {kind, args..., threshold?}; throws command-syntax-error.
Operation operation_from_json(const nlohmann::json& body);

struct LoadCommand {
  enum class What { Schema, Data, Rules } what;
  std::string path;
};
struct SetProfileCommand { std::string profile; };
struct ShowCommand {
  enum class What { Weights, Table, Rules, History, Schema } what;
};
struct CreateRulesCommand { std::string source; };
struct DropRuleCommand { std::string name; };
struct HelpCommand {};

using Command = std::variant<Operation, LoadCommand, SetProfileCommand, ShowCommand,
                             CreateRulesCommand, DropRuleCommand, HelpCommand>;

/// Parses one REPL statement (trailing `;` optional). Keywords are
/// case-insensitive. Throws command-syntax-error with a position.
Command parse_command(std::string_view line);

/// Immutable state every computation reads.
struct Snapshot {
  std::shared_ptr<const Constellation> schema;
  std::shared_ptr<const DataStore> data;
  std::shared_ptr<const RuleEngine> rules;
};

class Engine;

class Session {
 public:
  Session(std::string id, std::string profile) : id_(std::move(id)), profile_(std::move(profile)) {}

  const std::string& id() const { return id_; }
  std::string profile() const;
  std::optional<MultidimTable> table() const;
  std::vector<std::string> history() const;

 private:
  friend class Engine;

  std::string id_;
  std::string profile_;
  std::optional<MultidimTable> table_;
  std::shared_ptr<const Constellation> table_schema_;  // schema the table was built on
  std::optional<WeightAssignment> last_weights_;
  std::vector<std::string> history_;
  mutable std::mutex mu_;
};

/// Holds the current snapshot and the live sessions. Mutations build a new
/// snapshot and swap it in under the writer lock.
class Engine {
 public:
  Engine() = default;

  Snapshot snapshot() const;

  void load_schema_text(std::string_view ddl, std::string name = "constellation");
  void load_schema_file(const std::filesystem::path& path);
  /// Loads `<NAME>.csv` for every dimension then every fact found in `dir`.
  /// Returns (element, row count) per loaded file.
  std::vector<std::pair<std::string, std::size_t>> load_data_dir(const std::filesystem::path& dir);
  std::size_t load_csv(std::string_view element, std::istream& csv);
  /// Registers every rule of `source` into `profile`; all or nothing.
  std::vector<std::string> load_rules_text(std::string_view profile, std::string_view source);
  std::vector<std::string> load_rules_file(std::string_view profile, const std::filesystem::path& path);
  void drop_rule(std::string_view profile, std::string_view name);

  std::shared_ptr<Session> create_session(std::string profile);
  std::shared_ptr<Session> session(std::string_view id) const;  // unknown-session

  /// Applies `op` to the session's current table and records it in history.
  MultidimTable apply(Session& s, const Operation& op);
  std::optional<MultidimTable> current_table(Session& s) const;
  /// Weights fired by the session's last personalized operation, else those
  /// of a DISPLAYED context over its current table.
  WeightAssignment session_weights(Session& s) const;

  /// Executes one REPL statement and returns its text output.
  std::string run_command(Session& s, std::string_view line);

 private:
  Snapshot require_schema() const;
  void publish(Snapshot next);

  mutable std::shared_mutex mu_;
  std::mutex writer_mu_;  // serializes snapshot builders
  Snapshot snap_;
  mutable std::mutex sessions_mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

/// Fires the profile's rules for a context described by query-style fields
/// (event, fact, rowdim, rowhier, coldim, colhier, from, to, dim, param, hier).
WeightAssignment weights_for_context(const Snapshot& snap, std::string_view profile,
                                     const std::map<std::string, std::string>& fields);

}  // namespace olap
