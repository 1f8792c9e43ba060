#include "olap/http_api.hpp"

#include "httplib.h"
#include "olap/render.hpp"
#include "olap/rule.hpp"

namespace olap {

using nlohmann::json;

json error_body(const Error& e) {
  json j{{"code", std::string(to_string(e.code()))}, {"message", e.message()}};
  if (e.position()) j["position"] = {{"line", e.position()->line}, {"column", e.position()->column}};
  return j;
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownSession:
    case ErrorCode::UnknownRule:
      return 404;
    case ErrorCode::DuplicateRuleName:
    case ErrorCode::NoSchema:
    case ErrorCode::NoTable:
      return 409;
    default:
      return 400;
  }
}

namespace {

constexpr const char* kJson = "application/json";

void send(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::CommandSyntaxError, std::string("malformed JSON body: ") + e.what());
  }
}

// Runs `fn`, turning library errors into the wire error format.
template <class Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      send(res, http_status(e.code()), error_body(e));
    } catch (const std::exception& e) {
      send(res, 500, json{{"code", "internal-error"}, {"message", e.what()}});
    }
  };
}

json rules_json(const Snapshot& snap, const std::string& profile) {
  json rules = json::array();
  if (snap.rules) {
    if (const Profile* p = snap.rules->profile(profile)) {
      for (const auto& r : p->rules) {
        json events = json::array();
        for (const auto& ev : r.events) events.push_back(std::string(to_string(ev.kind)));
        rules.push_back({{"name", r.source.name},
                         {"target", r.target.spelling()},
                         {"events", events},
                         {"conditional", r.condition.has_value()},
                         {"source", to_source(r.source)}});
      }
    }
  }
  return json{{"profile", profile}, {"rules", rules}};
}

}  // namespace

void install_routes(httplib::Server& server, Engine& engine, const std::string& static_dir) {
  server.Post("/sessions", guarded([&engine](const httplib::Request& req, httplib::Response& res) {
    json body = parse_body(req);
    std::string profile = body.value("profile", std::string());
    auto s = engine.create_session(profile);
    send(res, 201, {{"session_id", s->id()}, {"profile", s->profile()}});
  }));

  server.Get("/schema", guarded([&engine](const httplib::Request&, httplib::Response& res) {
    Snapshot snap = engine.snapshot();
    if (!snap.schema) throw Error(ErrorCode::NoSchema, "no schema loaded");
    send(res, 200, schema_to_json(*snap.schema));
  }));

  server.Get("/profiles", guarded([&engine](const httplib::Request&, httplib::Response& res) {
    Snapshot snap = engine.snapshot();
    send(res, 200, {{"profiles", snap.rules ? snap.rules->profiles() : std::vector<std::string>{}}});
  }));

  server.Get(R"(/profiles/([^/]+)/rules)",
             guarded([&engine](const httplib::Request& req, httplib::Response& res) {
               send(res, 200, rules_json(engine.snapshot(), req.matches[1]));
             }));

  server.Post(R"(/profiles/([^/]+)/rules)",
              guarded([&engine](const httplib::Request& req, httplib::Response& res) {
                json body = parse_body(req);
                if (!body.contains("source") || !body["source"].is_string()) {
                  throw Error(ErrorCode::CommandSyntaxError, "missing string field 'source'");
                }
                std::string profile = req.matches[1];
                auto names = engine.load_rules_text(profile, body["source"].get<std::string>());
                json out = rules_json(engine.snapshot(), profile);
                out["registered"] = names;
                send(res, 201, out);
              }));

  server.Delete(R"(/profiles/([^/]+)/rules/([^/]+))",
                guarded([&engine](const httplib::Request& req, httplib::Response& res) {
                  engine.drop_rule(std::string(req.matches[1]), std::string(req.matches[2]));
                  send(res, 200, {{"dropped", std::string(req.matches[2])}});
                }));

  server.Get(R"(/profiles/([^/]+)/weights)",
             guarded([&engine](const httplib::Request& req, httplib::Response& res) {
               std::map<std::string, std::string> fields;
               for (const auto& [k, v] : req.params) fields[k] = v;
               WeightAssignment wa = weights_for_context(engine.snapshot(), std::string(req.matches[1]), fields);
               send(res, 200, {{"profile", std::string(req.matches[1])}, {"weights", weights_to_json(wa)}});
             }));

  server.Post(R"(/sessions/([^/]+)/op)",
              guarded([&engine](const httplib::Request& req, httplib::Response& res) {
                auto s = engine.session(std::string(req.matches[1]));
                Operation op = operation_from_json(parse_body(req));
                send(res, 200, table_to_json(engine.apply(*s, op)));
              }));

  server.Get(R"(/sessions/([^/]+)/table)",
             guarded([&engine](const httplib::Request& req, httplib::Response& res) {
               auto s = engine.session(std::string(req.matches[1]));
               auto t = engine.current_table(*s);
               if (!t) throw Error(ErrorCode::NoTable, "session has no current table");
               send(res, 200, table_to_json(*t));
             }));

  server.Get(R"(/sessions/([^/]+)/render)",
             guarded([&engine](const httplib::Request& req, httplib::Response& res) {
               auto s = engine.session(std::string(req.matches[1]));
               auto t = engine.current_table(*s);
               if (!t) throw Error(ErrorCode::NoTable, "session has no current table");
               res.set_content(render_text(*t), "text/plain; charset=utf-8");
             }));

  server.Get(R"(/sessions/([^/]+)/weights)",
             guarded([&engine](const httplib::Request& req, httplib::Response& res) {
               auto s = engine.session(std::string(req.matches[1]));
               send(res, 200, {{"profile", s->profile()}, {"weights", weights_to_json(engine.session_weights(*s))}});
             }));

  server.Get(R"(/sessions/([^/]+)/history)",
             guarded([&engine](const httplib::Request& req, httplib::Response& res) {
               auto s = engine.session(std::string(req.matches[1]));
               send(res, 200, {{"session_id", s->id()}, {"history", s->history()}});
             }));

  if (!static_dir.empty()) server.set_mount_point("/", static_dir);
}

}  // namespace olap
