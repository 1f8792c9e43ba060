#pragma once

#include <string>

#include "json.hpp"
#include "olap/error.hpp"
#include "olap/service.hpp"

namespace httplib {
class Server;
}

namespace olap {

/// {code, message, position?} body of an error response.
nlohmann::json error_body(const Error& e);

/// 404 for unknown sessions and rules, 409 for state conflicts, 400 otherwise.
int http_status(ErrorCode code);

/// Installs the JSON endpoint suite on `server`. When `static_dir` is not
/// empty it is mounted at `/` for the browser client.
void install_routes(httplib::Server& server, Engine& engine, const std::string& static_dir = {});

}  // namespace olap
