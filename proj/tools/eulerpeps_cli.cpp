// Command-line front end. Talks to the library through the C API only.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "eulerpeps/c_api.h"

using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitPrecondition = 3;

struct Flags {
  std::optional<int> L1, L2, grid, cut, schmidt_L1, schmidt_L2;
  std::optional<std::string> boundary, beta, orientation, output_dir, format, mutation;
  std::optional<double> mu, alpha, fd_step, tolerance, eps_max;
  std::string config_file;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_file, "JSON run configuration; its values override flags");
  sub->add_option("--L1", f.L1, "cells along a1");
  sub->add_option("--L2", f.L2, "cells along a2");
  sub->add_option("--boundary", f.boundary, "torus | cylinder");
  sub->add_option("--mu", f.mu, "chemical potential");
  sub->add_option("--alpha", f.alpha, "circuit angle in [0, 2pi)");
  sub->add_option("--beta", f.beta, "hexagon coefficients as JSON [[re,im] x6]");
  sub->add_option("--grid", f.grid, "k-grid points per direction");
  sub->add_option("--fd-step", f.fd_step, "finite-difference step");
  sub->add_option("--tolerance", f.tolerance, "flatness tolerance");
  sub->add_option("--eps-max", f.eps_max, "entanglement-energy ceiling");
  sub->add_option("--cut", f.cut, "cell columns in subsystem A");
  sub->add_option("--schmidt-L1", f.schmidt_L1, "Schmidt torus L1");
  sub->add_option("--schmidt-L2", f.schmidt_L2, "Schmidt torus L2");
  sub->add_option("--orientation", f.orientation, "k2xk1 | k1xk2");
  sub->add_option("--output-dir", f.output_dir, "output directory (default $EULERPEPS_OUT_DIR or ./out)");
  sub->add_option("--format", f.format, "csv | json");
  sub->add_option("--mutation", f.mutation, "none | map_tensor_sign | gate_sigma (negative controls)");
}

json flags_to_config(const Flags& f) {
  json j = json::object();
  auto put = [&](const char* sec, const char* key, const auto& v) {
    if (v) j[sec][key] = *v;
  };
  put("lattice", "L1", f.L1);
  put("lattice", "L2", f.L2);
  put("lattice", "boundary", f.boundary);
  put("model", "mu", f.mu);
  put("model", "alpha", f.alpha);
  if (f.beta) j["model"]["beta"] = json::parse(*f.beta);
  put("numerics", "grid", f.grid);
  put("numerics", "fd_step", f.fd_step);
  put("numerics", "tolerance", f.tolerance);
  put("numerics", "eps_max", f.eps_max);
  put("numerics", "cut", f.cut);
  put("numerics", "schmidt_L1", f.schmidt_L1);
  put("numerics", "schmidt_L2", f.schmidt_L2);
  put("numerics", "orientation", f.orientation);
  put("output", "format", f.format);
  put("testing", "mutation", f.mutation);
  if (f.output_dir)
    j["output"]["directory"] = *f.output_dir;
  else if (const char* env = std::getenv("EULERPEPS_OUT_DIR"); env && *env)
    j["output"]["directory"] = env;
  return j;
}

int error_exit(const std::string& kind, const std::string& message, int code) {
  std::cerr << "error: " << message << "\n";
  std::cout << json{{"pass", false}, {"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}}.dump(2)
            << "\n";
  return code;
}

int run(const std::string& command, const Flags& f) {
  json cfg;
  try {
    cfg = flags_to_config(f);
  } catch (const json::exception& e) {
    return error_exit("config", std::string("--beta: ") + e.what(), kExitConfig);
  }
  if (!f.config_file.empty()) {
    std::ifstream in(f.config_file);
    if (!in) return error_exit("config", "cannot read " + f.config_file, kExitConfig);
    json file;
    try {
      file = json::parse(in);
    } catch (const json::exception& e) {
      return error_exit("config", f.config_file + ": " + e.what(), kExitConfig);
    }
    if (!file.is_object()) return error_exit("config", f.config_file + ": expected a JSON object", kExitConfig);
    cfg.merge_patch(file);
  }
  char* report = nullptr;
  int verdict = 0;
  const ep_status st = ep_run(command.c_str(), cfg.dump().c_str(), nullptr, &report, &verdict);
  if (st != EP_OK) {
    const std::string msg = std::string(ep_status_name(st)) + ": " + ep_last_error();
    return error_exit(st == EP_CONFIG ? "config" : "precondition", msg,
                      st == EP_CONFIG ? kExitConfig : kExitPrecondition);
  }
  std::cout << report << "\n";
  if (!verdict) {
    const json r = json::parse(report);
    for (const auto& c : r.at("checks"))
      if (!c.value("pass", false) && !c.value("informational", false))
        std::cerr << "check failed: " << c.at("name").get<std::string>()
                  << " (value " << c.at("value").dump() << ", margin " << c.at("margin").dump() << ")\n";
  }
  ep_string_free(report);
  return verdict ? kExitPass : kExitCheckFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flat-band Euler-class PEPS toolkit"};
  app.require_subcommand(0, 1);
  bool print_schema = false;
  app.add_flag("--print-schema", print_schema, "print the run-configuration JSON schema and exit");

  const std::map<std::string, std::string> commands = {
      {"bands", "band structure CSV and gap/flatness checks"},
      {"topology", "Euler curvature, quantum metric, Euler class and quantum volume"},
      {"state", "hexagon-operator state versus PEPS evaluation"},
      {"entanglement", "correlation-matrix and Schmidt entanglement spectra"},
      {"circuit", "shallow-circuit iso-spectrality and layout checks"},
      {"metric", "many-body quantum metric from twisted boundary conditions"},
      {"verify-all", "run every acceptance check"},
  };
  std::map<std::string, Flags> flags;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    subs[name] = app.add_subcommand(name, help);
    add_flags(subs[name], flags[name]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (print_schema) {
    char* s = nullptr;
    if (ep_config_schema(&s) != EP_OK) return error_exit("internal", ep_last_error(), kExitPrecondition);
    std::cout << s << "\n";
    ep_string_free(s);
    return kExitPass;
  }
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) return run(name, flags[name]);
  std::cout << app.help() << "\n";
  return kExitConfig;
}
