#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "krr/errors.hpp"

namespace krr {

enum class Method { Alpha, Kappa, Icc, Sb, KrrEmpirical, KrrBootstrap };

const char* to_string(Method m) noexcept;
Method method_from_string(std::string_view s);

/// One estimated coefficient plus how it was obtained.
///
/// `dispersion` is the sample standard deviation over repetitions and is
/// present exactly when the estimate averaged more than one random draw;
/// `seed` is present whenever randomness was consumed. Coefficients are
/// reported unclamped — negative values are meaningful — so a value outside
/// [-1, 1] (possible only for degenerate designs) is flagged in `warnings`
/// rather than altered.
struct ReliabilityReport {
  Method method = Method::Alpha;
  int k = 1;
  double value = 0.0;
  Eigen::Index n_items = 0;
  std::optional<double> dispersion;
  std::optional<std::uint64_t> seed;
  std::optional<int> draws;
  std::optional<int> bootstrap_iterations;
  std::vector<std::string> warnings;

  void flag_if_out_of_range();
};

inline const char* to_string(Method m) noexcept {
  switch (m) {
    case Method::Alpha: return "alpha";
    case Method::Kappa: return "kappa";
    case Method::Icc: return "icc";
    case Method::Sb: return "sb";
    case Method::KrrEmpirical: return "krr_empirical";
    case Method::KrrBootstrap: return "krr_bootstrap";
  }
  return "alpha";
}

inline Method method_from_string(std::string_view s) {
  if (s == "alpha") return Method::Alpha;
  if (s == "kappa") return Method::Kappa;
  if (s == "icc") return Method::Icc;
  if (s == "sb") return Method::Sb;
  if (s == "krr_empirical" || s == "empirical") return Method::KrrEmpirical;
  if (s == "krr_bootstrap" || s == "bootstrap") return Method::KrrBootstrap;
  fail(ErrorKind::ValueError, "unknown method '" + std::string(s) + "'");
}

inline void ReliabilityReport::flag_if_out_of_range() {
  if (value < -1.0 || value > 1.0)
    warnings.push_back("coefficient " + std::to_string(value) +
                       " falls outside [-1, 1]; reported unclamped");
}

}  // namespace krr
