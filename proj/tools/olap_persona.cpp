// Command-line front end: loads a schema, data and rules, then runs either
// the REPL on stdin or the HTTP service.
#include <unistd.h>

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "httplib.h"
#include "olap/http_api.hpp"
#include "olap/service.hpp"
#include "olap/text.hpp"

namespace {

int repl(olap::Engine& engine, const std::string& profile) {
  auto session = engine.create_session(profile);
  const bool tty = isatty(STDIN_FILENO);
  std::string buffer;
  std::string line;
  int failures = 0;
  if (tty) std::cout << "olap> " << std::flush;
  while (std::getline(std::cin, line)) {
    std::string_view t = olap::trim(line);
    if (buffer.empty() && (t.empty() || t.substr(0, 2) == "--")) {
      if (tty) std::cout << "olap> " << std::flush;
      continue;
    }
    if (buffer.empty() && (olap::iequals(t, "quit") || olap::iequals(t, "exit"))) break;
    buffer += line;
    buffer += '\n';
    if (t.empty() || t.back() != ';') {
      if (tty) std::cout << "  ... " << std::flush;
      continue;
    }
    try {
      std::cout << engine.run_command(*session, buffer) << std::flush;
    } catch (const olap::Error& e) {
      ++failures;
      std::cerr << "error: " << e.what() << "\n";
    }
    buffer.clear();
    if (tty) std::cout << "olap> " << std::flush;
  }
  return failures == 0 ? 0 : 1;
}

int serve(olap::Engine& engine, const std::string& addr, const std::string& static_dir) {
  auto colon = addr.rfind(':');
  if (colon == std::string::npos) {
    std::cerr << "--serve expects <addr:port>\n";
    return 2;
  }
  std::string host = addr.substr(0, colon);
  auto port = olap::parse_integer(addr.substr(colon + 1));
  if (!port || *port <= 0 || *port > 65535) {
    std::cerr << "invalid port in " << addr << "\n";
    return 2;
  }
  httplib::Server server;
  olap::install_routes(server, engine, static_dir);
  std::cerr << "listening on " << host << ":" << *port << "\n";
  return server.listen(host, static_cast<int>(*port)) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Personalized multidimensional database engine"};
  std::string schema, data, rules, addr, static_dir;
  bool run_repl = false;
  const char* env_profile = std::getenv("OLAP_PERSONA_PROFILE");
  std::string profile = env_profile && *env_profile ? env_profile : "default";

  app.add_option("--schema", schema, "Schema DDL file")->check(CLI::ExistingFile);
  app.add_option("--data", data, "Directory of <NAME>.csv files")->check(CLI::ExistingDirectory);
  app.add_option("--rules", rules, "Rule file registered into the profile")->check(CLI::ExistingFile);
  app.add_option("--profile", profile, "Profile for --rules and the REPL session");
  auto* serve_opt = app.add_option("--serve", addr, "Serve the HTTP API on <addr:port>");
  auto* repl_opt = app.add_flag("--repl", run_repl, "Read commands from stdin");
  app.add_option("--static", static_dir, "Directory served at / for the browser client")
      ->check(CLI::ExistingDirectory);
  serve_opt->excludes(repl_opt);
  CLI11_PARSE(app, argc, argv);

  olap::Engine engine;
  try {
    if (!schema.empty()) engine.load_schema_file(schema);
    if (!data.empty()) engine.load_data_dir(data);
    if (!rules.empty()) engine.load_rules_file(profile, rules);
  } catch (const olap::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  if (!addr.empty()) return serve(engine, addr, static_dir);
  return repl(engine, profile);
}
