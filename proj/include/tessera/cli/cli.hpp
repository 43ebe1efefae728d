#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "tessera/prov/snapshot.hpp"

namespace tessera::service {
class HttpServer;
}

namespace tessera::cli {

/// Test seams; production callers pass the defaults.
struct CliHooks {
  prov::Clock clock = prov::system_now;
  // Called once serve has bound its socket, before it blocks.
  std::function<void(service::HttpServer&)> on_listening;
};

/// Runs one command line (args[0] is the program name). Results go to `out`,
/// diagnostics to `err`. Returns 0 on success, 1 for user errors (bad
/// arguments, configuration, input data, unknown entities or versions) and 2
/// for internal or store failures.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const CliHooks& hooks = {});

}  // namespace tessera::cli
