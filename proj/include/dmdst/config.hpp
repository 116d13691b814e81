#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dmdst {

/// `paper` runs the algorithms with their original loop thresholds and
/// eligibility constants; `practical` keeps improving until no admissible
/// move remains.
enum class Profile { Paper, Practical };

inline const char* to_string(Profile p) { return p == Profile::Paper ? "paper" : "practical"; }

inline Profile parse_profile(std::string_view s) {
  if (s == "paper") return Profile::Paper;
  if (s == "practical") return Profile::Practical;
  throw std::invalid_argument("unknown profile '" + std::string(s) + "'");
}

/// User-facing knobs. Unset optionals are derived from n by resolve().
struct Config {
  double epsilon = 0.1;
  Profile profile = Profile::Practical;
  std::optional<double> base_c;
  double psi_factor = 0.125;
  std::optional<double> stop_threshold_local;
  std::optional<double> stop_threshold_aug;
  std::uint64_t rng_seed = 0;
};

/// Config with every derived quantity fixed for a given vertex count.
struct ResolvedConfig {
  double epsilon = 0.1;
  Profile profile = Profile::Practical;
  double base_c = 4.0;
  double psi_factor = 0.125;
  double stop_threshold_local = 0.0;
  double stop_threshold_aug = 0.0;
  std::uint64_t rng_seed = 0;
};

inline double log2_n(std::int64_t n) { return n > 1 ? std::log2(static_cast<double>(n)) : 0.0; }

/// Smallest admissible c for this n and epsilon: c >= 4, c > 1/epsilon, and
/// at least 2 * log2(n)^0.4.
inline double base_c_floor(double epsilon, std::int64_t n) {
  return std::max({4.0, 1.0 / epsilon + 1e-9, 2.0 * std::pow(log2_n(n), 0.4)});
}

inline ResolvedConfig resolve(const Config& cfg, std::int64_t n) {
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 0.25))
    throw std::invalid_argument("epsilon must lie in (0, 1/4), got " + std::to_string(cfg.epsilon));
  if (!(cfg.psi_factor > 0.0) || !std::isfinite(cfg.psi_factor))
    throw std::invalid_argument("psi_factor must be positive and finite");
  ResolvedConfig r;
  r.epsilon = cfg.epsilon;
  r.profile = cfg.profile;
  r.rng_seed = cfg.rng_seed;
  const double floor_c = base_c_floor(cfg.epsilon, n);
  r.base_c = std::max(cfg.base_c.value_or(floor_c), floor_c);
  const bool paper = cfg.profile == Profile::Paper;
  r.psi_factor = paper ? 0.125 : cfg.psi_factor;
  const double lg = log2_n(n);
  r.stop_threshold_local = cfg.stop_threshold_local.value_or(paper ? 34.0 * lg : 0.0);
  r.stop_threshold_aug = cfg.stop_threshold_aug.value_or(paper ? 2.0 * lg / std::log2(r.base_c / 2.0) : 0.0);
  return r;
}

}  // namespace dmdst
