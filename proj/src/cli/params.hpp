#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "conegap/cli.hpp"
#include "conegap/types.hpp"

namespace conegap::cli::detail {

enum class Type { Int, Real, IntList, ComplexList, Word, Matrix };

// Constraint on the entries of a complex list.
enum class Disk { Any, Closed, Open };

struct ParamSpec {
  const char* key;
  Type type;
  const char* fallback;  // nullptr: required, "": optional without default
  double min = -1e300;
  double max = 1e300;
  const char* words = nullptr;  // "a|b|c" for Type::Word
  Disk disk = Disk::Any;
};

const std::vector<ParamSpec>& schema(Experiment experiment);

std::vector<std::string> split(const std::string& text, char sep);

/// Typed view of the resolved parameters (defaults filled in). Values are
/// assumed validated.
class Params {
 public:
  Params(Experiment experiment, const std::map<std::string, std::string>& raw);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::int64_t integer(const std::string& key) const;
  double real(const std::string& key) const;
  std::vector<std::int64_t> integers(const std::string& key) const;
  std::vector<Complex> complexes(const std::string& key) const;
  const std::string& word(const std::string& key) const;
  CMatrix matrix(const std::string& key) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// Parse helpers shared with validation; std::nullopt on malformed input.
std::optional<std::int64_t> parse_int(const std::string& text);
std::optional<double> parse_real(const std::string& text);
std::optional<CMatrix> parse_matrix(const std::string& text);

}  // namespace conegap::cli::detail
