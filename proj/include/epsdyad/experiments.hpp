#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "epsdyad/bank.hpp"
#include "epsdyad/epsilon.hpp"
#include "epsdyad/exponent.hpp"
#include "epsdyad/io.hpp"
#include "epsdyad/lebesgue.hpp"

namespace epsdyad {

struct Tolerances {
  double norm = kDefaultNormTolerance;
  double slack = kDefaultInequalitySlack;
};

/// Batch experiment settings. Keys not consumed here stay in `options` for
/// the individual commands (see README for the list).
struct ExperimentConfig {
  int dimension = 1;
  DyadicCube root = DyadicCube::unit(1);
  int depth = 8;
  ExponentFunction exponent = ExponentFunction::origin(0.5);
  EpsilonCollection epsilon = EpsilonCollection::origin(1.2, 0.5);
  BankSpec bank;
  bool bank_given = false;
  Tolerances tol;
  std::string output_dir = "out";
  nlohmann::json options = nlohmann::json::object();
};

/// Command-line values that take precedence over the config file.
struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> depth;
  std::optional<int> dimension;
  std::optional<std::string> output_dir;
};

/// Throws io::ConfigError on any invalid or inconsistent entry.
ExperimentConfig load_config(const nlohmann::json& j, const ConfigOverrides& overrides = {});

struct RunResult {
  bool passed = true;
  std::vector<std::string> files;  ///< written, relative to the output directory
  std::vector<std::string> notes;  ///< one line per failed or reported check
};

RunResult run_check_conditions(const ExperimentConfig& cfg);
RunResult run_oracle_suite(const ExperimentConfig& cfg);
RunResult run_opnorm(const ExperimentConfig& cfg);
RunResult run_compactness(const ExperimentConfig& cfg);
RunResult run_cz(const ExperimentConfig& cfg);
RunResult run_haar(const ExperimentConfig& cfg);
RunResult run_sparse(const ExperimentConfig& cfg);

}  // namespace epsdyad
