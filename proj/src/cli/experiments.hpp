#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "params.hpp"

namespace conegap::cli::detail {

using Json = nlohmann::ordered_json;

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Outcome {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<Check> assertions;
  std::vector<Check> flags;  // reported, never fail the run
  Json results = Json::object();
};

/// Decimal text with 12 significant digits ("inf", "-inf", "nan" otherwise).
std::string num(double value);
std::string flag(bool value);

Outcome run_exterior_check(const Params& params, std::uint64_t seed);
Outcome run_metrics(const Params& params, std::uint64_t seed);
Outcome run_gauge(const Params& params, std::uint64_t seed);
Outcome run_spectral_gap(const Params& params, std::uint64_t seed);
Outcome run_lyapunov(const Params& params, std::uint64_t seed);
Outcome run_sec6(const Params& params, std::uint64_t seed);

}  // namespace conegap::cli::detail
