#include "krr/icc.hpp"

#include "krr/aggregate.hpp"

namespace krr {

VarianceComponents variance_components(const Eigen::Ref<const Eigen::MatrixXd>& cells) {
  const auto n = cells.rows();
  const auto k = cells.cols();
  VarianceComponents vc;
  vc.n = n;
  vc.k = k;
  vc.grand_mean = cells.mean();

  const Eigen::VectorXd item_means = cells.rowwise().mean();
  vc.ssw = (cells.colwise() - item_means).squaredNorm();
  vc.ssb = static_cast<double>(k) *
           (item_means.array() - vc.grand_mean).square().sum();
  vc.sigma2_eps = vc.ssw / (static_cast<double>(n) * static_cast<double>(k - 1));
  vc.sigma2_phi = vc.ssb / (static_cast<double>(k) * static_cast<double>(n - 1)) -
                  vc.sigma2_eps / static_cast<double>(k);
  return vc;
}

VarianceComponents variance_components(const RatingTable& table) {
  if (!is_numeric(table.scale()))
    fail(ErrorKind::ScaleMismatch, "variance components need a numeric scale");
  if (table.n() < 2 || table.k() < 2)
    fail(ErrorKind::InsufficientDesign, "need at least 2 items and 2 slots, got " +
                                            std::to_string(table.n()) + "x" +
                                            std::to_string(table.k()));
  if (!table.complete())
    fail(ErrorKind::IncompleteData,
         std::to_string(table.missing_count()) +
             " missing cell(s); apply a complete-case filter first");
  return variance_components(table.cells());
}

double icc_from_components(const VarianceComponents& vc, int k_eval) {
  const double denom = vc.sigma2_phi + vc.sigma2_eps / static_cast<double>(k_eval);
  if (denom == 0.0)
    fail(ErrorKind::DegenerateData, "zero total variance at k=" + std::to_string(k_eval));
  return vc.sigma2_phi / denom;
}

ReliabilityReport icc_k(const RatingTable& table, int k_eval, IccMode mode, std::uint64_t seed) {
  if (k_eval < 1 || k_eval > table.k())
    fail(ErrorKind::BadRedundancy, "k_eval " + std::to_string(k_eval) +
                                       " outside 1.." + std::to_string(table.k()));

  ReliabilityReport report;
  report.method = Method::Icc;
  report.k = k_eval;
  report.n_items = table.n();

  VarianceComponents vc;
  if (mode == IccMode::Subsample && k_eval < table.k()) {
    if (k_eval < 2)
      fail(ErrorKind::InsufficientDesign,
           "a single sampled column cannot identify the variance components");
    vc = variance_components(column_subsample(table, k_eval, seed));
    report.seed = seed;
  } else {
    vc = variance_components(table);
  }
  report.value = icc_from_components(vc, k_eval);
  if (vc.sigma2_phi < 0.0)
    report.warnings.push_back("negative between-item variance estimate; ICC reported unclamped");
  report.flag_if_out_of_range();
  return report;
}

double spearman_brown(double icc1, int k) {
  if (!(icc1 >= -1.0 && icc1 <= 1.0))
    fail(ErrorKind::SBDomainError, "ICC(1) must lie in [-1, 1]");
  if (k < 1) fail(ErrorKind::SBDomainError, "k must be at least 1");
  const double denom = 1.0 + static_cast<double>(k - 1) * icc1;
  if (denom <= 0.0)
    fail(ErrorKind::SBDomainError,
         "prophecy denominator 1 + (k-1)*ICC(1) is not positive");
  return static_cast<double>(k) * icc1 / denom;
}

std::vector<std::pair<int, double>> sb_curve(const RatingTable& table, int pilot_k, int k_max,
                                             std::uint64_t seed) {
  if (pilot_k < 2)
    fail(ErrorKind::InsufficientDesign, "pilot needs at least 2 columns");
  if (pilot_k > table.k())
    fail(ErrorKind::BadRedundancy, "pilot_k exceeds available columns");
  if (k_max < 1) fail(ErrorKind::BadRedundancy, "k_max must be at least 1");

  const RatingTable pilot =
      pilot_k == table.k() ? table : column_subsample(table, pilot_k, seed);
  const double icc1 = icc_from_components(variance_components(pilot), 1);

  std::vector<std::pair<int, double>> curve;
  curve.reserve(static_cast<std::size_t>(k_max));
  for (int k = 1; k <= k_max; ++k) curve.emplace_back(k, spearman_brown(icc1, k));
  return curve;
}

}  // namespace krr
