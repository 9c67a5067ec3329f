#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "eigenflow/errors.hpp"

namespace eigenflow {

/// Result container for every experiment runner. Insertion order is the
/// serialization order, so identical runs serialize identically. Scalars
/// and series entries must be finite; the seed is recorded whenever a
/// runner consumed randomness.
struct ExperimentReport {
  std::string name;
  std::vector<std::pair<std::string, double>> scalars;
  std::vector<std::pair<std::string, std::vector<double>>> series;
  std::vector<std::pair<std::string, std::string>> meta;
  std::uint64_t seed = 0;
  bool usedSeed = false;

  void scalar(const std::string& key, double v) {
    if (!std::isfinite(v))
      throw Error(Errc::BadParam, "scalar '" + key + "' is not finite");
    scalars.emplace_back(key, v);
  }

  void add_series(const std::string& key, std::vector<double> v) {
    for (double t : v)
      if (!std::isfinite(t))
        throw Error(Errc::BadParam, "series '" + key + "' has a non-finite entry");
    series.emplace_back(key, std::move(v));
  }

  void note(const std::string& key, const std::string& v) { meta.emplace_back(key, v); }

  double get_scalar(const std::string& key) const {
    for (const auto& [k, v] : scalars)
      if (k == key) return v;
    throw Error(Errc::BadParam, "no scalar named '" + key + "'");
  }

  const std::vector<double>& get_series(const std::string& key) const {
    for (const auto& [k, v] : series)
      if (k == key) return v;
    throw Error(Errc::BadParam, "no series named '" + key + "'");
  }

  bool has_scalar(const std::string& key) const {
    for (const auto& [k, v] : scalars)
      if (k == key) return true;
    return false;
  }
};

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

/// 16-hex-digit hash of the run parameters (name, meta notes, seed);
/// results do not enter, so re-running the same configuration targets the
/// same files.
inline std::string params_hash(const ExperimentReport& r) {
  std::string canon = r.name;
  canon += ';';
  for (const auto& [k, v] : r.meta) {
    canon += k;
    canon += '=';
    canon += v;
    canon += ';';
  }
  if (r.usedSeed) {
    canon += "seed=";
    canon += std::to_string(r.seed);
    canon += ';';
  }
  const std::uint64_t h = fnv1a(canon);
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 0; i < 16; ++i) out[15 - i] = hex[(h >> (4 * i)) & 0xF];
  return out;
}

}  // namespace eigenflow
