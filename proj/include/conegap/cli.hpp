#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace conegap::cli {

enum class Experiment { ExteriorCheck, Metrics, Gauge, SpectralGap, Lyapunov, Sec6 };

std::optional<Experiment> parse_experiment(std::string_view name);
const char* experiment_name(Experiment experiment);

/// Malformed config file or value; maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Top-level `seed` and `output`, plus the keys of the section named after
/// the experiment.
struct Config {
  Experiment experiment = Experiment::ExteriorCheck;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output;
  std::map<std::string, std::string> params;
};

/// Parses INI text (`key = value`, `[section]`). Throws ConfigError on
/// syntax errors or a malformed seed.
Config parse_config(const std::string& text, Experiment experiment);
Config load_config(const std::filesystem::path& path, Experiment experiment);

struct Finding {
  std::string key;
  std::string message;
};

/// Empty exactly when run() would start.
std::vector<Finding> validate(const Config& config);

struct RunResult {
  bool passed = false;
  std::filesystem::path csv;
  std::filesystem::path json;
};

/// Writes <output>/<experiment>.csv and <output>/<experiment>.json. Throws
/// ConfigError when validate() reports findings.
RunResult run(const Config& config);

/// Accepts "1", "-0.5", "0.5i", "-i", "0.2+0.1i", "1e-3-2e-3i".
std::optional<std::complex<double>> parse_complex(std::string_view text);

}  // namespace conegap::cli
