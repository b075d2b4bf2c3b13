#include "ecoloom/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ecoloom/compiler.hpp"
#include "ecoloom/engine.hpp"
#include "ecoloom/eol.hpp"
#include "ecoloom/errors.hpp"
#include "ecoloom/exemplars.hpp"
#include "ecoloom/model_io.hpp"
#include "ecoloom/service.hpp"
#include "ecoloom/validate.hpp"

namespace ecoloom::cli {
namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return ss.str();
}

// Refuses to clobber any of the command's inputs.
void write_file(const std::string& path, std::string_view content,
                const std::vector<std::string>& inputs) {
  std::error_code ec;
  for (const auto& in : inputs) {
    if (!in.empty() && fs::exists(path, ec) && fs::equivalent(path, in, ec)) {
      throw IoError("refusing to overwrite input file " + in);
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  out.flush();
  if (!out) throw IoError("cannot write " + path);
}

ConceptualModel load_model(const std::string& path) { return parse_model(read_file(path)); }

EngineConfig load_config(const std::string& path, EngineConfig base) {
  if (path.empty()) return base;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return config_from_json(j, base);
}

// predator_prey.json pairs with predator_prey.config.json
std::string sibling_config(const std::string& model) {
  fs::path p(model);
  fs::path c = p.parent_path() / (p.stem().string() + ".config.json");
  std::error_code ec;
  return fs::is_regular_file(c, ec) ? c.string() : std::string{};
}

struct Options {
  std::string model;
  std::string out;
  std::string emit = "netlogo";
  std::string config;
  std::string csv;
  std::optional<int> ticks;
  std::optional<std::uint64_t> seed;
  bool serial = false;
  std::string exemplar;
  std::string config_out;
  std::vector<std::string> species;
  std::string taxon;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string store;
};

int cmd_validate(const Options& o, std::ostream& out) {
  auto report = validate_model(load_model(o.model));
  if (report.ok()) {
    out << o.model << ": ok\n";
    return kOk;
  }
  out << report.to_text();
  return kRejected;
}

int cmd_compile(Options o, std::ostream& out, std::ostream& err) {
  if (o.config.empty() && o.emit == "netlogo") o.config = sibling_config(o.model);
  if (!o.config.empty()) err << "config: " << o.config << '\n';
  SimProgram p = compile(load_model(o.model));
  std::string text;
  if (o.emit == "ir") {
    text = emit_ir(p);
  } else {
    text = emit_netlogo(p, load_config(o.config, {}));
  }
  if (o.out.empty()) {
    out << text;
  } else {
    write_file(o.out, text, {o.model, o.config});
  }
  return kOk;
}

int cmd_run(Options o, std::ostream& out, std::ostream& err) {
  if (o.config.empty()) o.config = sibling_config(o.model);
  if (!o.config.empty()) err << "config: " << o.config << '\n';
  EngineConfig cfg = load_config(o.config, {});
  if (o.ticks) cfg.max_ticks = *o.ticks;
  if (o.seed) cfg.rng_seed = *o.seed;
  cfg.validate();
  SimProgram p = compile(load_model(o.model));
  TimeSeries ts = run(p, cfg, {}, o.serial ? ExecutionPolicy::Serial : ExecutionPolicy::Parallel);
  if (o.csv.empty()) {
    out << ts.to_csv();
  } else {
    write_file(o.csv, ts.to_csv(), {o.model, o.config});
    out << "wrote " << ts.records.size() << " records to " << o.csv << '\n';
  }
  return kOk;
}

int cmd_exemplar_list(std::ostream& out) {
  for (ExemplarId id : all_exemplars()) out << slug(id) << '\t' << title(id) << '\n';
  return kOk;
}

int cmd_exemplar_export(const Options& o, std::ostream& out, std::ostream& err) {
  auto id = exemplar_from_string(o.exemplar);
  if (!id) {
    err << "unknown exemplar '" << o.exemplar << "'; try `ecoloom exemplar list`\n";
    return kRejected;
  }
  std::string_view doc = exemplar_document(*id);
  if (o.out.empty()) {
    out << doc;
  } else {
    write_file(o.out, doc, {});
  }
  if (!o.config_out.empty()) write_file(o.config_out, exemplar_config_document(*id), {o.out});
  return kOk;
}

int cmd_lookup(const Options& o, std::ostream& out, std::ostream& err) {
  eol::Client client(eol::ClientConfig::from_env());
  std::string taxon = o.taxon;
  if (taxon.empty()) {
    std::string query;
    for (const auto& w : o.species) query += (query.empty() ? "" : " ") + w;
    if (query.empty()) {
      err << "give a species name or --taxon\n";
      return kUsage;
    }
    auto found = client.search_species(query);
    if (found.empty()) {
      err << "no species matches '" << query << "'\n";
      return kRejected;
    }
    const auto& best = found.front();
    out << best.scientific_name;
    if (best.common_name) out << " (" << *best.common_name << ")";
    out << ", taxon " << best.taxon_id << '\n';
    for (std::size_t i = 1; i < found.size() && i < 5; ++i) {
      out << "  also: " << found[i].scientific_name << ", taxon " << found[i].taxon_id << '\n';
    }
    taxon = best.taxon_id;
  }
  auto traits = client.fetch_traits(taxon);
  out << traits.size() << " numeric trait records\n";
  auto estimate = eol::estimate_to_json(eol::traits_to_parameters(traits));
  if (estimate["parameters"].empty()) out << "no parameters could be estimated\n";
  for (const auto& [name, value] : estimate["parameters"].items()) {
    out << "  " << std::left << std::setw(24) << name << value.dump() << '\n';
  }
  for (const auto& f : estimate["flags"]) {
    out << "  skipped " << f["predicate"].get<std::string>() << " ["
        << f["units"].get<std::string>() << "]: " << f["reason"].get<std::string>() << '\n';
  }
  return kOk;
}

int cmd_serve(const Options& o, std::ostream& out) {
  ServiceOptions so;
  so.host = o.host;
  if (!o.store.empty()) so.store = std::make_shared<FileStore>(o.store);
  so.eol_config = eol::ClientConfig::from_env();
  Service service(std::move(so));
  int port = service.bind(o.port);
  out << "listening on http://" << o.host << ':' << port << std::endl;
  service.listen();
  return kOk;
}

}  // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Build, check and run ecosystem models.", "ecoloom"};
  app.require_subcommand(1);
  app.footer("Exit status: 0 ok, 1 rejected input, 2 I/O error, 3 network error, 64 usage.");
  Options o;

  auto* validate = app.add_subcommand("validate", "Check a model document against the rules");
  validate->add_option("model", o.model, "Model file (.json or .xml)")->required();

  auto* compile_cmd = app.add_subcommand("compile", "Emit NetLogo source or the program IR");
  compile_cmd->add_option("model", o.model, "Model file")->required();
  compile_cmd->add_option("--emit", o.emit, "netlogo or ir")
      ->check(CLI::IsMember({"netlogo", "ir"}))
      ->capture_default_str();
  compile_cmd->add_option("--out,-o", o.out, "Write here instead of stdout");
  compile_cmd->add_option("--config", o.config,
                          "Engine config JSON (netlogo only; default <model>.config.json)");

  auto* run_cmd = app.add_subcommand("run", "Simulate a model and export the time series");
  run_cmd->add_option("model", o.model, "Model file")->required();
  run_cmd->add_option("--config", o.config,
                      "Engine config JSON (default <model>.config.json); flags override it");
  run_cmd->add_option("--ticks", o.ticks, "Ticks to run after tick 0");
  run_cmd->add_option("--seed", o.seed, "RNG seed");
  run_cmd->add_option("--csv", o.csv, "Write the CSV here instead of stdout");
  run_cmd->add_flag("--serial", o.serial, "Disable parallel kernels");

  auto* exemplar = app.add_subcommand("exemplar", "Shipped example models");
  exemplar->require_subcommand(1);
  auto* ex_list = exemplar->add_subcommand("list", "Print exemplar ids and titles");
  auto* ex_export = exemplar->add_subcommand("export", "Write an exemplar model document");
  ex_export->add_option("id", o.exemplar, "Exemplar id")->required();
  ex_export->add_option("--out,-o", o.out, "Write here instead of stdout");
  ex_export->add_option("--config-out", o.config_out, "Also write its engine config here");

  auto* lookup =
      app.add_subcommand("lookup", "Suggest parameters from Encyclopedia of Life traits");
  lookup->add_option("species", o.species, "Species name, common or scientific");
  lookup->add_option("--taxon", o.taxon, "Skip the search and use this taxon id");

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--host", o.host)->capture_default_str();
  serve->add_option("--port", o.port, "0 picks a free port")->capture_default_str();
  serve->add_option("--store", o.store, "Keep documents in this directory (default: memory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(o, out);
    if (*compile_cmd) return cmd_compile(o, out, err);
    if (*run_cmd) return cmd_run(o, out, err);
    if (*ex_list) return cmd_exemplar_list(out);
    if (*ex_export) return cmd_exemplar_export(o, out, err);
    if (*lookup) return cmd_lookup(o, out, err);
    if (*serve) return cmd_serve(o, out);
  } catch (const CompileError& e) {
    err << e.what();
    return kRejected;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kRejected;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kRejected;
  } catch (const CapacityError& e) {
    err << e.what() << '\n';
    return kRejected;
  } catch (const IoError& e) {
    err << e.what() << '\n';
    return kIoError;
  } catch (const NetworkError& e) {
    err << "network error: " << e.what() << '\n';
    return kNetworkError;
  } catch (const MalformedResponse& e) {
    err << "unexpected response: " << e.what() << '\n';
    return kNetworkError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
  return kUsage;
}

}  // namespace ecoloom::cli
