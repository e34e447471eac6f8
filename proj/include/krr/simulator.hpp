#pragma once

#include <cstdint>
#include <optional>

#include "krr/rating_table.hpp"

namespace krr {

/// Parameters of the one-way random-effects generator
/// x_ij = mu + phi_i + eps_ij, phi_i ~ N(0, sigma2_phi), eps_ij ~ N(0, sigma2_eps).
struct GeneratorParams {
  double mu = 0.0;
  double sigma2_phi = 1.0;
  double sigma2_eps = 1.0;
  Eigen::Index n = 2;
  int k = 1;
  std::uint64_t seed = 0;
  // Optional instrument emulation, applied after the Gaussian draw: clip to
  // [min, max], then round to the nearest multiple of round_step, then
  // re-clip. Widens the moment-based recovery tolerances.
  std::optional<std::pair<double, double>> value_clip;
  std::optional<double> round_step;
};

/// Draw a complete n x k interval-scale table; deterministic per seed.
RatingTable generate(const GeneratorParams& params);

/// Population ICC(k): sigma2_phi / (sigma2_phi + sigma2_eps / k).
double true_icc(const GeneratorParams& params, int k);

}  // namespace krr
