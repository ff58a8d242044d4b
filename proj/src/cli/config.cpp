#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "params.hpp"

namespace conegap::cli {

namespace {

constexpr std::pair<Experiment, const char*> kNames[] = {
    {Experiment::ExteriorCheck, "exterior-check"},
    {Experiment::Metrics, "metrics"},
    {Experiment::Gauge, "gauge"},
    {Experiment::SpectralGap, "spectral-gap"},
    {Experiment::Lyapunov, "lyapunov"},
    {Experiment::Sec6, "sec6"},
};

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

}  // namespace

std::optional<Experiment> parse_experiment(std::string_view name) {
  for (const auto& [experiment, text] : kNames)
    if (name == text) return experiment;
  return std::nullopt;
}

const char* experiment_name(Experiment experiment) {
  for (const auto& [value, text] : kNames)
    if (value == experiment) return text;
  return "unknown";
}

std::optional<std::complex<double>> parse_complex(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (ch != ' ' && ch != '\t') s.push_back(ch);
  if (s.empty()) return std::nullopt;
  auto real_of = [](const std::string& part) -> std::optional<double> {
    return detail::parse_real(part);
  };
  if (s.back() != 'i' && s.back() != 'j') {
    const auto re = real_of(s);
    if (!re) return std::nullopt;
    return std::complex<double>(*re, 0.0);
  }
  s.pop_back();
  // split at the last sign that is not a leading sign or an exponent sign
  std::size_t split_at = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split_at = k;
      break;
    }
  }
  auto imag_of = [&](const std::string& part) -> std::optional<double> {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    return real_of(part);
  };
  if (split_at == std::string::npos) {
    const auto im = imag_of(s);
    if (!im) return std::nullopt;
    return std::complex<double>(0.0, *im);
  }
  const auto re = real_of(s.substr(0, split_at));
  const auto im = imag_of(s.substr(split_at));
  if (!re || !im) return std::nullopt;
  return std::complex<double>(*re, *im);
}

Config parse_config(const std::string& text, Experiment experiment) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config: " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  Config config;
  config.experiment = experiment;
  for (const auto& [key, node] : tree) {
    if (!node.empty()) continue;
    const std::string value = trim(node.data());
    if (key == "seed") {
      std::uint64_t seed = 0;
      const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), seed);
      if (ec != std::errc() || end != value.data() + value.size())
        throw ConfigError("config: seed must be an unsigned 64-bit integer, got '" + value + "'");
      config.seed = seed;
    } else if (key == "output") {
      config.output = value;
    } else {
      throw ConfigError("config: unknown top-level key '" + key + "'");
    }
  }
  if (const auto section = tree.get_child_optional(experiment_name(experiment))) {
    for (const auto& [key, node] : *section) config.params[key] = trim(node.data());
  }
  return config;
}

Config load_config(const std::filesystem::path& path, Experiment experiment) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), experiment);
}

namespace detail {

const std::vector<ParamSpec>& schema(Experiment experiment) {
  static const std::vector<ParamSpec> exterior = {
      {"n", Type::Int, "6", 2, 8},
      {"p_values", Type::IntList, "1,2,3", 1, 8},
      {"trials", Type::Int, "200", 1, 1e6},
      {"wedge1_samples", Type::Int, "64", 1, 1e5},
  };
  static const std::vector<ParamSpec> metrics = {
      {"n_values", Type::IntList, "4,6,8", 2, 64},
      {"p_values", Type::IntList, "1,2,3", 1, 63},
      {"pairs", Type::Int, "500", 1, 1e7},
  };
  static const std::vector<ParamSpec> gauge = {
      {"n_values", Type::IntList, "3,4,6", 2, 64},
      {"p_values", Type::IntList, "1,2", 1, 63},
      {"a_outer", Type::Real, "1.0", 1e-6, 1e6},
      {"a_inner", Type::Real, "0.5", 1e-6, 1e6},
      {"pairs", Type::Int, "200", 0, 1e6},
      {"distance_pairs", Type::Int, "100", 0, 1e6},
      {"contraction_instances", Type::Int, "50", 0, 1e5},
      {"contraction_samples", Type::Int, "20", 1, 1e5},
      {"search_starts", Type::Int, "32", 1, 1e5},
      {"search_iterations", Type::Int, "300", 1, 1e6},
  };
  static const std::vector<ParamSpec> spectral = {
      {"diag", Type::ComplexList, ""},
      {"matrix", Type::Matrix, ""},
      {"p", Type::Int, "", 1, 31},
      {"instances", Type::Int, "30", 1, 1e5},
      {"n_values", Type::IntList, "4,6,8,12", 2, 12},
      {"p_values", Type::IntList, "2,3", 1, 11},
      {"aperture", Type::Real, "1.0", 1e-6, 1e6},
      {"tol", Type::Real, "1e-10", 1e-15, 1e-2},
      {"max_iter", Type::Int, "10000", 1, 1e8},
      {"decay_steps", Type::Int, "30", 2, 1e4},
  };
  static const std::vector<ParamSpec> lyapunov = {
      {"family", Type::Word, "sec6", 0, 0, "sec6|exp-scalar"},
      {"dimension", Type::Int, "3", 1, 12},
      {"noise", Type::Word, "disk", 0, 0, "disk|circle"},
      {"noise_radius", Type::Real, "1.0", 0, 1},
      {"t_values", Type::ComplexList, "0,0.3,0.5i", 0, 0, nullptr, Disk::Open},
      {"p_values", Type::IntList, "1,2,3", 1, 12},
      {"n_steps", Type::Int, "100000", 100, 1e10},
      {"burn_in", Type::Int, "1000", 0, 1e10},
      {"cone_aperture", Type::Real, "1.0", 1e-6, 1e6},
      {"fd_h", Type::Real, "0.01", 1e-8, 0.5},
      {"fd_sup_samples", Type::Int, "2000", 1, 1e7},
      {"orbit_steps", Type::Int, "60", 3, 1e6},
  };
  static const std::vector<ParamSpec> sec6 = {
      {"t_grid", Type::ComplexList, "0,0.3,0.5i,0.2+0.1i", 0, 0, nullptr, Disk::Open},
      {"n_steps", Type::Int, "100000", 100, 1e10},
      {"burn_in", Type::Int, "1000", 0, 1e10},
      {"closed_form_samples", Type::Int, "100000", 2, 1e10},
      {"harmonic_radius", Type::Real, "0.2", 1e-6, 1},
      {"n_circle", Type::Int, "12", 8, 1e4},
      {"mapping_samples", Type::Int, "100000", 1, 1e10},
      {"mapping_t_grid", Type::ComplexList,
       "0,0.3,0.5i,0.2+0.1i,0.4+0.1i,0.95,-0.95,0.95i,-0.95i,0.67+0.67i,-0.67+0.67i,0.67-0.67i,-0.67-0.67i",
       0, 0, nullptr, Disk::Closed},
  };
  switch (experiment) {
    case Experiment::ExteriorCheck: return exterior;
    case Experiment::Metrics: return metrics;
    case Experiment::Gauge: return gauge;
    case Experiment::SpectralGap: return spectral;
    case Experiment::Lyapunov: return lyapunov;
    case Experiment::Sec6: return sec6;
  }
  return exterior;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

std::optional<std::int64_t> parse_int(const std::string& text) {
  std::int64_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    // accept integral scientific notation such as 1e5
    const auto real = parse_real(text);
    if (real && std::isfinite(*real) && *real == std::floor(*real) && std::abs(*real) < 9e18)
      return static_cast<std::int64_t>(*real);
    return std::nullopt;
  }
  return value;
}

std::optional<double> parse_real(const std::string& text) {
  const char* begin = text.data();
  if (!text.empty() && text[0] == '+') ++begin;
  double value = 0.0;
  const auto [end, ec] = std::from_chars(begin, text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size()) return std::nullopt;
  return value;
}

std::optional<CMatrix> parse_matrix(const std::string& text) {
  const auto rows = split(text, ';');
  if (rows.empty()) return std::nullopt;
  std::vector<std::vector<Complex>> entries;
  for (const auto& row : rows) {
    std::vector<Complex> parsed;
    for (const auto& item : split(row, ',')) {
      const auto z = parse_complex(item);
      if (!z) return std::nullopt;
      parsed.push_back(*z);
    }
    entries.push_back(std::move(parsed));
  }
  const auto n = static_cast<Index>(entries.size());
  CMatrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    if (static_cast<Index>(entries[i].size()) != n) return std::nullopt;
    for (Index j = 0; j < n; ++j) m(i, j) = entries[i][j];
  }
  return m;
}

Params::Params(Experiment experiment, const std::map<std::string, std::string>& raw) {
  for (const ParamSpec& spec : schema(experiment)) {
    const auto it = raw.find(spec.key);
    if (it != raw.end())
      values_[spec.key] = it->second;
    else if (spec.fallback != nullptr && spec.fallback[0] != '\0')
      values_[spec.key] = spec.fallback;
  }
}

std::int64_t Params::integer(const std::string& key) const { return *parse_int(values_.at(key)); }

double Params::real(const std::string& key) const { return *parse_real(values_.at(key)); }

std::vector<std::int64_t> Params::integers(const std::string& key) const {
  std::vector<std::int64_t> out;
  for (const auto& item : split(values_.at(key), ',')) out.push_back(*parse_int(item));
  return out;
}

std::vector<Complex> Params::complexes(const std::string& key) const {
  std::vector<Complex> out;
  for (const auto& item : split(values_.at(key), ',')) out.push_back(*parse_complex(item));
  return out;
}

const std::string& Params::word(const std::string& key) const { return values_.at(key); }

CMatrix Params::matrix(const std::string& key) const { return *parse_matrix(values_.at(key)); }

}  // namespace detail

namespace {

using detail::ParamSpec;
using detail::Disk;
using detail::Type;

// Checks one value against its spec; empty string when fine.
std::string check_value(const ParamSpec& spec, const std::string& value) {
  auto in_range = [&](double v) { return v >= spec.min && v <= spec.max; };
  std::ostringstream msg;
  switch (spec.type) {
    case Type::Int: {
      const auto v = detail::parse_int(value);
      if (!v) return "must be an integer";
      if (!in_range(static_cast<double>(*v))) {
        msg << "must lie in [" << spec.min << ", " << spec.max << "]";
        return msg.str();
      }
      return {};
    }
    case Type::Real: {
      const auto v = detail::parse_real(value);
      if (!v || !std::isfinite(*v)) return "must be a finite real number";
      if (!in_range(*v)) {
        msg << "must lie in [" << spec.min << ", " << spec.max << "]";
        return msg.str();
      }
      return {};
    }
    case Type::IntList: {
      const auto items = detail::split(value, ',');
      if (items.empty()) return "must be a nonempty comma-separated list of integers";
      for (const auto& item : items) {
        const auto v = detail::parse_int(item);
        if (!v) return "entry '" + item + "' is not an integer";
        if (!in_range(static_cast<double>(*v))) {
          msg << "entries must lie in [" << spec.min << ", " << spec.max << "]";
          return msg.str();
        }
      }
      return {};
    }
    case Type::ComplexList: {
      const auto items = detail::split(value, ',');
      if (items.empty()) return "must be a nonempty comma-separated list of complex numbers";
      for (const auto& item : items) {
        const auto z = parse_complex(item);
        if (!z) return "entry '" + item + "' is not a complex number";
        const double r = std::abs(*z);
        if ((spec.disk == Disk::Open && !(r < 1.0)) || (spec.disk == Disk::Closed && !(r <= 1.0)))
          return "entry '" + item + "' lies outside the unit disk";
      }
      return {};
    }
    case Type::Word: {
      for (const auto& w : detail::split(spec.words, '|'))
        if (w == value) return {};
      return std::string("must be one of ") + spec.words;
    }
    case Type::Matrix:
      if (!detail::parse_matrix(value)) return "must be a square matrix, rows separated by ';'";
      return {};
  }
  return {};
}

void cross_checks(const Config& config, std::vector<Finding>& out) {
  const detail::Params params(config.experiment, config.params);
  auto p_below_n = [&](const std::string& n_key, const std::string& p_key) {
    const auto ns = params.integers(n_key);
    const auto ps = params.integers(p_key);
    const auto n_min = *std::min_element(ns.begin(), ns.end());
    for (auto p : ps)
      if (p >= n_min) {
        out.push_back({p_key, "every p must be smaller than every n in " + n_key});
        return;
      }
  };
  switch (config.experiment) {
    case Experiment::ExteriorCheck:
      for (auto p : params.integers("p_values"))
        if (p > params.integer("n")) out.push_back({"p_values", "every p must be at most n"});
      break;
    case Experiment::Metrics:
      p_below_n("n_values", "p_values");
      break;
    case Experiment::Gauge:
      p_below_n("n_values", "p_values");
      if (!(params.real("a_inner") < params.real("a_outer")))
        out.push_back({"a_inner",
                       "a_inner must be smaller than a_outer (diameter_bound requires 0 < a_inner < a_outer)"});
      break;
    case Experiment::SpectralGap: {
      const bool has_diag = params.has("diag");
      const bool has_matrix = params.has("matrix");
      if (has_diag && has_matrix) out.push_back({"matrix", "give either diag or matrix, not both"});
      if (has_diag || has_matrix) {
        const Index n = has_diag ? static_cast<Index>(params.complexes("diag").size())
                                 : params.matrix("matrix").rows();
        if (!params.has("p"))
          out.push_back({"p", "p required with diag or matrix"});
        else if (params.integer("p") >= n)
          out.push_back({"p", "p must be smaller than the matrix dimension"});
        if (n > 32) out.push_back({has_diag ? "diag" : "matrix", "dimension must be at most 32"});
      } else {
        p_below_n("n_values", "p_values");
      }
      break;
    }
    case Experiment::Lyapunov: {
      const Index n = params.word("family") == "sec6" ? 3 : params.integer("dimension");
      for (auto p : params.integers("p_values"))
        if (p > n) out.push_back({"p_values", "every p must be at most the family dimension"});
      const double h = params.real("fd_h");
      for (Complex t : params.complexes("t_values"))
        if (!(std::abs(t) + h < 1.0))
          out.push_back({"fd_h", "t + fd_h must stay inside the unit disk for every t"});
      break;
    }
    case Experiment::Sec6: {
      const double r = params.real("harmonic_radius");
      for (Complex t : params.complexes("t_grid"))
        if (!(std::abs(t) + r < 1.0)) {
          out.push_back({"harmonic_radius", "the disk of radius harmonic_radius around every t must lie inside the unit disk"});
          break;
        }
      break;
    }
  }
}

}  // namespace

std::vector<Finding> validate(const Config& config) {
  std::vector<Finding> out;
  if (!config.seed) out.push_back({"seed", "seed required"});
  if (!config.output || config.output->empty()) out.push_back({"output", "output directory required"});
  const auto& specs = detail::schema(config.experiment);
  for (const auto& [key, value] : config.params) {
    const bool known = std::any_of(specs.begin(), specs.end(),
                                   [&](const ParamSpec& s) { return key == s.key; });
    if (!known) out.push_back({key, "unknown key for " + std::string(experiment_name(config.experiment))});
  }
  bool typed_ok = true;
  for (const ParamSpec& spec : specs) {
    const auto it = config.params.find(spec.key);
    if (it == config.params.end()) {
      if (spec.fallback == nullptr) {
        out.push_back({spec.key, "required"});
        typed_ok = false;
      }
      continue;
    }
    const std::string problem = check_value(spec, it->second);
    if (!problem.empty()) {
      out.push_back({spec.key, problem});
      typed_ok = false;
    }
  }
  if (typed_ok) cross_checks(config, out);
  return out;
}

}  // namespace conegap::cli
