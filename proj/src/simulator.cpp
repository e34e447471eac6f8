#include "krr/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "krr/rng.hpp"

namespace krr {

namespace {

void check(const GeneratorParams& p) {
  if (!(p.sigma2_phi >= 0.0) || !(p.sigma2_eps >= 0.0))
    fail(ErrorKind::ValueError, "variances must be non-negative");
  if (!std::isfinite(p.mu)) fail(ErrorKind::ValueError, "mu must be finite");
  if (p.n < 2) fail(ErrorKind::ValueError, "need at least 2 items");
  if (p.k < 1) fail(ErrorKind::ValueError, "need at least 1 slot");
  if (p.value_clip && !(p.value_clip->first < p.value_clip->second))
    fail(ErrorKind::ValueError, "clip range must satisfy min < max");
  if (p.round_step && !(*p.round_step > 0.0))
    fail(ErrorKind::ValueError, "round step must be positive");
}

}  // namespace

RatingTable generate(const GeneratorParams& params) {
  check(params);
  Rng rng = make_rng(params.seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  const double sd_phi = std::sqrt(params.sigma2_phi);
  const double sd_eps = std::sqrt(params.sigma2_eps);

  Eigen::VectorXd item_effects(params.n);
  for (Eigen::Index i = 0; i < params.n; ++i) item_effects(i) = sd_phi * unit(rng);

  Eigen::MatrixXd cells(params.n, params.k);
  for (Eigen::Index i = 0; i < params.n; ++i)
    for (int j = 0; j < params.k; ++j)
      cells(i, j) = params.mu + item_effects(i) + sd_eps * unit(rng);

  if (params.value_clip) {
    const auto [lo, hi] = *params.value_clip;
    cells = cells.cwiseMax(lo).cwiseMin(hi);
    if (params.round_step) {
      const double step = *params.round_step;
      cells = ((cells / step).array().round() * step).matrix();
      cells = cells.cwiseMax(lo).cwiseMin(hi);
    }
  } else if (params.round_step) {
    const double step = *params.round_step;
    cells = ((cells / step).array().round() * step).matrix();
  }

  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(params.n));
  const std::size_t width = std::to_string(params.n).size();
  for (Eigen::Index i = 0; i < params.n; ++i) {
    std::string num = std::to_string(i + 1);
    ids.push_back("item_" + std::string(width - num.size(), '0') + std::move(num));
  }
  return RatingTable(std::move(ids), std::move(cells), Scale::Interval);
}

double true_icc(const GeneratorParams& params, int k) {
  check(params);
  if (k < 1) fail(ErrorKind::ValueError, "k must be at least 1");
  const double denom = params.sigma2_phi + params.sigma2_eps / static_cast<double>(k);
  if (denom <= 0.0)
    fail(ErrorKind::DegenerateData, "both variance components are zero");
  return params.sigma2_phi / denom;
}

}  // namespace krr
