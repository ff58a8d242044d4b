#include <fstream>
#include <sstream>

#include "conegap/error.hpp"
#include "experiments.hpp"

namespace conegap::cli {

namespace {

using detail::Json;
using detail::Outcome;

Outcome dispatch(const detail::Params& params, Experiment experiment, std::uint64_t seed) {
  switch (experiment) {
    case Experiment::ExteriorCheck: return detail::run_exterior_check(params, seed);
    case Experiment::Metrics: return detail::run_metrics(params, seed);
    case Experiment::Gauge: return detail::run_gauge(params, seed);
    case Experiment::SpectralGap: return detail::run_spectral_gap(params, seed);
    case Experiment::Lyapunov: return detail::run_lyapunov(params, seed);
    case Experiment::Sec6: return detail::run_sec6(params, seed);
  }
  return {};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

std::string csv_text(const Outcome& outcome) {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(outcome.header);
  for (const auto& row : outcome.rows) line(row);
  return out.str();
}

Json checks_json(const std::vector<detail::Check>& checks) {
  Json out = Json::array();
  for (const auto& c : checks) out.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return out;
}

}  // namespace

RunResult run(const Config& config) {
  const auto findings = validate(config);
  if (!findings.empty()) {
    std::ostringstream msg;
    for (const auto& f : findings) msg << f.key << ": " << f.message << "\n";
    throw ConfigError(msg.str());
  }
  const detail::Params params(config.experiment, config.params);
  const std::string name = experiment_name(config.experiment);
  const std::filesystem::path dir(*config.output);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create " + dir.string() + ": " + ec.message());

  Outcome outcome;
  std::string failure;
  try {
    outcome = dispatch(params, config.experiment, *config.seed);
  } catch (const Error& e) {
    failure = e.what();
  }

  RunResult result;
  result.passed = failure.empty();
  for (const auto& a : outcome.assertions) result.passed = result.passed && a.pass;

  Json summary;
  summary["experiment"] = name;
  summary["seed"] = *config.seed;
  Json echoed = Json::object();
  for (const auto& [key, value] : params.values()) echoed[key] = value;
  summary["config"] = echoed;
  summary["assertions"] = checks_json(outcome.assertions);
  summary["flags"] = checks_json(outcome.flags);
  if (!failure.empty()) summary["error"] = failure;
  summary["results"] = outcome.results;
  summary["csv"] = name + ".csv";
  summary["passed"] = result.passed;

  result.csv = dir / (name + ".csv");
  result.json = dir / (name + ".json");
  write_file(result.csv, csv_text(outcome));
  write_file(result.json, summary.dump(2) + "\n");
  return result;
}

}  // namespace conegap::cli
