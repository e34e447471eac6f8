#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <utility>
#include <vector>

#include "krr/rating_table.hpp"
#include "krr/report.hpp"

namespace krr {

/// Variance components of the one-way random-effects model
/// x_ij = mu + phi_i + eps_ij, estimated from sums of squares:
///   sigma2_eps = SSW / (n(k-1))
///   sigma2_phi = SSB / (k(n-1)) - sigma2_eps / k   (may be negative)
struct VarianceComponents {
  double ssw = 0.0;
  double ssb = 0.0;
  double sigma2_eps = 0.0;
  double sigma2_phi = 0.0;
  double grand_mean = 0.0;
  Eigen::Index n = 0;
  Eigen::Index k = 0;
};

/// Kernel over a complete numeric matrix (no validation).
VarianceComponents variance_components(const Eigen::Ref<const Eigen::MatrixXd>& cells);

/// Contract wrapper: complete table, n >= 2, k >= 2.
VarianceComponents variance_components(const RatingTable& table);

/// ICC(k_eval) = sigma2_phi / (sigma2_phi + sigma2_eps / k_eval).
double icc_from_components(const VarianceComponents& vc, int k_eval);

enum class IccMode {
  FullTable,  // components from the full table, formula evaluated at k_eval
  Subsample,  // components from a seeded k_eval-column subsample
};

ReliabilityReport icc_k(const RatingTable& table, int k_eval,
                        IccMode mode = IccMode::FullTable, std::uint64_t seed = 0);

/// Spearman-Brown prophecy: k*r / (1 + (k-1)*r).
double spearman_brown(double icc1, int k);

/// ICC(1) from a pilot_k-column subsample, prophesied out to k = 1..k_max.
std::vector<std::pair<int, double>> sb_curve(const RatingTable& table, int pilot_k, int k_max,
                                             std::uint64_t seed);

}  // namespace krr
