#include "tessera/cli/cli.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "tessera/errors.hpp"
#include "tessera/rdf/nquads.hpp"
#include "tessera/service/config.hpp"
#include "tessera/service/http_api.hpp"

namespace tessera::cli {

namespace {

// Raised for bad command-line input; maps to exit code 1.
class UsageError : public Error {
 public:
  using Error::Error;
};

rdf::Term iri_arg(const std::string& text, const std::string& what) {
  if (!rdf::is_absolute_iri(text)) throw UsageError(what + " must be an absolute IRI, got '" + text + "'");
  try {
    return rdf::Term::iri(text);
  } catch (const InvalidTerm& e) {
    throw UsageError(what + ": " + e.what());
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string snapshot_line(const service::TimelineEntry& e) {
  const auto& s = e.snapshot;
  std::string line = std::to_string(s.number) + "\t" + prov::format_timestamp(s.generated_at) + "\t" +
                     s.agent.text() + "\t+" + std::to_string(e.added_count) + "/-" + std::to_string(e.deleted_count);
  if (s.primary_source) line += "\tsource=" + s.primary_source->text();
  if (s.invalidated_at && *s.invalidated_at == s.generated_at) line += "\tdeleted";
  return line;
}

struct Options {
  std::string config;
  std::string data;
  std::string entity;
  std::string agent;
  std::string source;
  std::uint64_t m = 0;
  std::uint64_t n = 0;
  bool lenient = false;
};

int serve(service::Runtime& rt, std::ostream& err, const CliHooks& hooks) {
  service::HttpServer server(*rt.engine);
  const int port = server.bind(rt.config.bind, rt.config.port);
  err << "listening on " << rt.config.bind << ":" << port << std::endl;
  if (hooks.on_listening) hooks.on_listening(server);
  server.serve();
  return 0;
}

int import(service::Runtime& rt, const Options& o, std::ostream& out) {
  const std::string text = read_text(o.data);
  rdf::QuadSet quads;
  rdf::read_nquads(text, [&](const rdf::Quad& q, std::size_t line) {
    if (q.has_blank()) {
      throw BlankNodePresent(o.data + ": line " + std::to_string(line) +
                             ": blank nodes cannot be versioned; skolemize them first");
    }
    quads.insert(q);
  });
  std::optional<rdf::Term> source;
  if (!o.source.empty()) source = iri_arg(o.source, "--source");
  const auto summary = rt.engine->import_quads(quads, service::agent_from_header(o.agent), source);
  out << summary.entities << " entities, " << summary.quads << " quads\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const CliHooks& hooks) {
  // Logs are diagnostics; stdout carries command results only.
  static const bool logger_ready = [] {
    spdlog::set_default_logger(spdlog::stderr_color_mt("tessera"));
    return true;
  }();
  (void)logger_ready;
  CLI::App app{"Versioned RDF curation engine", args.empty() ? "tessera" : args[0]};
  app.require_subcommand(1);
  Options o;

  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("-c,--config", o.config, "Engine configuration (YAML)")->required();
    cmd->add_flag("--lenient", o.lenient, "Warn instead of failing on missing deletions in history");
  };
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP JSON API");
  add_config(serve_cmd);
  auto* import_cmd = app.add_subcommand("import", "Version every subject of an N-Quads file");
  add_config(import_cmd);
  import_cmd->add_option("data", o.data, "N-Quads file")->required();
  import_cmd->add_option("--agent", o.agent, "Responsible agent (IRI or name)")->required();
  import_cmd->add_option("--source", o.source, "Primary source IRI");
  auto* timeline_cmd = app.add_subcommand("timeline", "List the snapshots of an entity");
  add_config(timeline_cmd);
  timeline_cmd->add_option("entity", o.entity, "Entity IRI")->required();
  auto* diff_cmd = app.add_subcommand("diff", "Print the update query turning version M into version N");
  add_config(diff_cmd);
  diff_cmd->add_option("entity", o.entity, "Entity IRI")->required();
  diff_cmd->add_option("m", o.m, "Older version")->required();
  diff_cmd->add_option("n", o.n, "Newer version")->required();
  auto* restore_cmd = app.add_subcommand("restore", "Restore an entity to an earlier version");
  add_config(restore_cmd);
  restore_cmd->add_option("entity", o.entity, "Entity IRI")->required();
  restore_cmd->add_option("n", o.n, "Version to restore")->required();
  restore_cmd->add_option("--agent", o.agent, "Responsible agent (IRI or name)")->required();
  auto* validate_cmd = app.add_subcommand("validate-shapes", "Check the shapes and display files");
  add_config(validate_cmd);

  // CLI11 consumes arguments from the back.
  std::vector<std::string> rev(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rev.begin(), rev.end());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return 1;
  }

  try {
    const auto config = service::load_engine_config(o.config);
    auto rt = service::open_runtime(config, hooks.clock, o.lenient);
    if (*serve_cmd) return serve(rt, err, hooks);
    if (*import_cmd) return import(rt, o, out);
    if (*validate_cmd) {
      std::size_t constraints = 0;
      for (const auto& [cls, cs] : rt.engine->schema().classes) constraints += cs.size();
      out << rt.engine->schema().classes.size() << " shape classes, " << constraints << " property constraints, "
          << rt.engine->display().classes.size() << " display classes\n";
      return 0;
    }
    const rdf::Term entity = iri_arg(o.entity, "entity");
    if (*timeline_cmd) {
      for (const auto& e : rt.engine->get_timeline(entity)) out << snapshot_line(e) << "\n";
      return 0;
    }
    if (*diff_cmd) {
      out << rt.engine->diff_versions(entity, o.m, o.n) << "\n";
      return 0;
    }
    if (*restore_cmd) {
      const auto r = rt.engine->restore_version(entity, o.n, service::agent_from_header(o.agent));
      for (const auto& w : r.warnings) err << "warning: " << w.message << "\n";
      out << r.snapshot.number << "\t" << r.snapshot.snapshot_iri.text() << "\n";
      return 0;
    }
    return 2;
  } catch (const service::ApiError& e) {
    err << "error: " << e.what() << "\n";
    for (const auto& v : e.violations()) err << "  " << v.message << "\n";
    return e.status() >= 500 ? 2 : 1;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const SyntaxError& e) {
    err << "error: " << (o.data.empty() ? "" : o.data + ": ") << e.what() << "\n";
    return 1;
  } catch (const BlankNodePresent& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const UnsupportedShape& e) {
    err << "error: unsupported shape: " << e.what() << "\n";
    return 1;
  } catch (const InvalidShape& e) {
    err << "error: invalid shape: " << e.what() << "\n";
    return 1;
  } catch (const MalformedList& e) {
    err << "error: malformed shape list: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace tessera::cli
