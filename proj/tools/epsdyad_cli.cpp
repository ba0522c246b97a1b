// Batch driver: each subcommand reads a JSON config, writes CSV/JSON files
// into the output directory and exits 0 (all checks pass), 1 (a check
// failed) or 2 (bad config or input).

#include <fstream>
#include <functional>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "epsdyad/experiments.hpp"

namespace {

using Runner = std::function<epsdyad::RunResult(const epsdyad::ExperimentConfig&)>;

nlohmann::json read_config(const std::string& path) {
  if (path.empty()) {
    return nlohmann::json::object();
  }
  std::ifstream in(path);
  if (!in) {
    throw epsdyad::io::ConfigError("cannot open config '" + path + "'");
  }
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw epsdyad::io::ConfigError("config '" + path + "': " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dyadic operator experiments on grid functions"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int depth = 0;
  int dim = 0;

  const std::map<std::string, std::pair<std::string, Runner>> commands{
      {"check-conditions", {"Diening, eps-Diening, decay and conjugate checks", epsdyad::run_check_conditions}},
      {"oracle-suite", {"fast operators against brute-force oracles", epsdyad::run_oracle_suite}},
      {"opnorm", {"empirical operator norms over a depth sweep", epsdyad::run_opnorm}},
      {"compactness", {"truncation probe e_N of the sparse operator", epsdyad::run_compactness}},
      {"cz", {"Calderon-Zygmund decompositions of the bank", epsdyad::run_cz}},
      {"haar", {"Haar multiplier on the bank", epsdyad::run_haar}},
      {"sparse", {"stopping-time sparse collections and domination", epsdyad::run_sparse}},
  };
  std::map<CLI::App*, Runner> runners;
  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--out", out_dir, "output directory (overrides the config)");
    sub->add_option("--seed", seed, "bank seed");
    sub->add_option("--depth", depth, "grid depth")->check(CLI::PositiveNumber);
    sub->add_option("--dim", dim, "dimension")->check(CLI::Range(1, epsdyad::kMaxDimension));
    runners[sub] = entry.second;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  try {
    epsdyad::ConfigOverrides overrides;
    if (chosen->count("--seed") > 0) overrides.seed = seed;
    if (chosen->count("--depth") > 0) overrides.depth = depth;
    if (chosen->count("--dim") > 0) overrides.dimension = dim;
    if (chosen->count("--out") > 0) overrides.output_dir = out_dir;

    const epsdyad::ExperimentConfig cfg = epsdyad::load_config(read_config(config_path), overrides);
    const epsdyad::RunResult result = runners.at(chosen)(cfg);
    for (const auto& note : result.notes) {
      std::cout << note << '\n';
    }
    for (const auto& file : result.files) {
      std::cout << "wrote " << cfg.output_dir << '/' << file << '\n';
    }
    std::cout << chosen->get_name() << ": " << (result.passed ? "PASS" : "FAIL") << '\n';
    return result.passed ? 0 : 1;
  } catch (const epsdyad::io::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
