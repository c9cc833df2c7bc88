#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "eulerpeps/lattice.hpp"
#include "eulerpeps/realspace.hpp"

namespace eulerpeps {

enum class Mutation { None, MapTensorSign, GateSigma };

struct RunConfig {
  std::string command;
  std::optional<int> L1, L2;
  Boundary boundary = Boundary::Torus;
  double mu = 0.0;
  double alpha = 0.0;
  std::optional<Beta> beta;
  std::optional<int> grid;
  std::optional<double> fd_step;
  double tolerance = 1e-9;
  double eps_max = 12.0;
  std::optional<int> cut;
  int schmidt_L1 = 2;
  int schmidt_L2 = 4;
  std::string orientation = "k2xk1";
  std::string directory = "out";
  std::string format = "csv";
  Mutation mutation = Mutation::None;
};

const std::vector<std::string>& command_names();

// Throws Error(Config) on unknown keys, wrong types or out-of-range values.
RunConfig parse_config(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);
nlohmann::json config_schema();

struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double target = 0.0;
  double margin = 0.0;  // ≥ 0 exactly when the check passes
  std::string detail;
  bool informational = false;  // reported, never affects the verdict
};

nlohmann::json check_to_json(const Check& c);

// |value − target| ≤ tol
Check check_near(const std::string& name, double value, double target, double tol);
// value ≤ bound
Check check_at_most(const std::string& name, double value, double bound);
// value ≥ bound, or value > bound when strict
Check check_at_least(const std::string& name, double value, double bound, bool strict = false);
Check check_flag(const std::string& name, bool ok, const std::string& detail = {});

struct RunReport {
  std::string command;
  std::vector<Check> checks;
  std::vector<std::string> artifacts;
  nlohmann::json data = nlohmann::json::object();
  bool pass() const;
  nlohmann::json to_json(const RunConfig& cfg) const;
};

// Runs one command and writes its artifacts plus summary.json into
// cfg.directory. Throws Error for precondition failures.
RunReport run_command(const RunConfig& cfg);

struct AcceptanceOptions {
  bool timing = false;  // wall-clock limits make the output run-dependent
  Mutation mutation = Mutation::None;
};

struct Criterion {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  bool pass() const;
};

std::vector<Criterion> acceptance_criteria(const AcceptanceOptions& opts = {});

std::string format_double(double v);

}  // namespace eulerpeps
