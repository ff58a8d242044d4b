#include <iostream>

#include <CLI11.hpp>

#include "conegap/cli.hpp"

int main(int argc, char** argv) {
  using namespace conegap::cli;
  CLI::App app{"Cone contraction and spectral gap experiments"};
  std::string experiment_arg;
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  app.add_option("experiment", experiment_arg,
                 "exterior-check | metrics | gauge | spectral-gap | lyapunov | sec6")
      ->required();
  app.add_option("--config", config_path, "INI config file")->required();
  auto* out_opt = app.add_option("--out", out_dir, "output directory (overrides `output`)");
  auto* seed_opt = app.add_option("--seed", seed, "seed override");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto experiment = parse_experiment(experiment_arg);
  if (!experiment) {
    std::cerr << "unknown experiment '" << experiment_arg << "'\n";
    return 2;
  }
  try {
    Config config = load_config(config_path, *experiment);
    if (*out_opt) config.output = out_dir;
    if (*seed_opt) config.seed = seed;
    const auto findings = validate(config);
    if (!findings.empty()) {
      for (const auto& f : findings) std::cerr << f.key << ": " << f.message << "\n";
      return 2;
    }
    const RunResult result = run(config);
    std::cout << result.csv.string() << "\n" << result.json.string() << "\n"
              << (result.passed ? "pass" : "FAIL") << "\n";
    return result.passed ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}
