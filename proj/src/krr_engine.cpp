#include "krr/krr_engine.hpp"

#include <cmath>

#include "krr/aggregate.hpp"
#include "krr/rng.hpp"

namespace krr {

namespace {

void check_config(const KrrConfig& cfg) {
  if (cfg.k < 1) fail(ErrorKind::BadRedundancy, "k must be at least 1");
  if (cfg.draws < 1) fail(ErrorKind::ValueError, "draws must be at least 1");
  if (cfg.bootstrap_iterations < 1) fail(ErrorKind::ValueError, "B must be at least 1");
  if (cfg.coefficient != Method::Alpha && cfg.coefficient != Method::Kappa)
    fail(ErrorKind::ValueError, "coefficient must be alpha or kappa");
  if (cfg.coefficient == Method::Kappa &&
      cfg.aggregation.kind != AggregationFn::Kind::Majority)
    fail(ErrorKind::ScaleMismatch, "kappa needs categorical aggregates (majority)");
}

double coefficient_between(const AggregateVector& a, const AggregateVector& b,
                           const KrrConfig& cfg) {
  if (cfg.coefficient == Method::Kappa) return cohens_kappa(a, b).value;
  return krippendorff_alpha(pair_as_table(a, b), cfg.metric).value;
}

struct DrawStats {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation
};

DrawStats summarize(const std::vector<double>& values) {
  DrawStats s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

std::vector<Eigen::Index> sampled_slots(Eigen::Index available, int k, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  const std::vector<int> cols = sample_without_replacement(static_cast<int>(available), k, rng);
  return {cols.begin(), cols.end()};
}

// Resample each item's ratings with replacement at the original redundancy.
RatingTable pseudo_replication(const RatingTable& table, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  const auto k = table.k();
  Eigen::MatrixXd cells(table.n(), k);
  for (Eigen::Index i = 0; i < table.n(); ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      cells(i, j) = table.cell(
          i, static_cast<Eigen::Index>(uniform_below(rng, static_cast<std::uint64_t>(k))));
  return RatingTable(table.item_ids(), std::move(cells), table.scale(), table.labels());
}

void require_complete(const RatingTable& table, const char* role) {
  if (!table.complete())
    fail(ErrorKind::IncompleteData, std::string(role) + " has " +
                                        std::to_string(table.missing_count()) +
                                        " missing cell(s); apply a complete-case filter first");
}

}  // namespace

ReliabilityReport krr_empirical(const RatingTable& rep_a, const RatingTable& rep_b,
                                const KrrConfig& cfg) {
  check_config(cfg);
  if (rep_a.item_ids() != rep_b.item_ids())
    fail(ErrorKind::ReplicationMismatch, "replications cover different items or orders");
  if (cfg.k > rep_a.k() || cfg.k > rep_b.k())
    fail(ErrorKind::BadRedundancy,
         "k=" + std::to_string(cfg.k) + " exceeds a replication's redundancy");
  require_complete(rep_a, "first replication");
  require_complete(rep_b, "second replication");

  ReliabilityReport report;
  report.method = Method::KrrEmpirical;
  report.k = cfg.k;
  report.n_items = rep_a.n();

  const bool deterministic = cfg.k == rep_a.k() && cfg.k == rep_b.k();
  if (deterministic) {
    const AggregateVector agg_a = aggregate(rep_a, cfg.aggregation);
    const AggregateVector agg_b = aggregate(rep_b, cfg.aggregation);
    report.value = coefficient_between(agg_a, agg_b, cfg);
    report.draws = 1;
    report.flag_if_out_of_range();
    return report;
  }

  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(cfg.draws));
  for (int d = 0; d < cfg.draws; ++d) {
    const auto stream = 2 * static_cast<std::uint64_t>(d);
    const auto slots_a = sampled_slots(rep_a.k(), cfg.k, derive_seed(cfg.seed, stream));
    const auto slots_b = sampled_slots(rep_b.k(), cfg.k, derive_seed(cfg.seed, stream + 1));
    const AggregateVector agg_a = aggregate(rep_a, cfg.aggregation, slots_a);
    const AggregateVector agg_b = aggregate(rep_b, cfg.aggregation, slots_b);
    values.push_back(coefficient_between(agg_a, agg_b, cfg));
  }
  const DrawStats stats = summarize(values);
  report.value = stats.mean;
  if (values.size() > 1) report.dispersion = stats.sd;
  report.seed = cfg.seed;
  report.draws = cfg.draws;
  report.flag_if_out_of_range();
  return report;
}

ReliabilityReport krr_bootstrap(const RatingTable& table, const KrrConfig& cfg) {
  check_config(cfg);
  require_complete(table, "table");
  if (cfg.k != table.k())
    fail(ErrorKind::BadRedundancy,
         "bootstrap resamples at the original redundancy k=" + std::to_string(table.k()));

  const int iterations = cfg.bootstrap_iterations;
  std::vector<double> values;
  if (cfg.pairing == BootstrapPairing::Independent) {
    values.reserve(static_cast<std::size_t>(iterations));
    for (int b = 0; b < iterations; ++b) {
      const auto stream = 2 * static_cast<std::uint64_t>(b);
      const RatingTable pseudo_a = pseudo_replication(table, derive_seed(cfg.seed, stream));
      const RatingTable pseudo_b = pseudo_replication(table, derive_seed(cfg.seed, stream + 1));
      values.push_back(coefficient_between(aggregate(pseudo_a, cfg.aggregation),
                                           aggregate(pseudo_b, cfg.aggregation), cfg));
    }
  } else {
    if (iterations < 2)
      fail(ErrorKind::ValueError, "consecutive pairing needs at least 2 iterations");
    for (int b = 0; b + 1 < iterations; b += 2) {
      const RatingTable pseudo_a = pseudo_replication(table, derive_seed(cfg.seed, b));
      const RatingTable pseudo_b = pseudo_replication(table, derive_seed(cfg.seed, b + 1));
      values.push_back(coefficient_between(aggregate(pseudo_a, cfg.aggregation),
                                           aggregate(pseudo_b, cfg.aggregation), cfg));
    }
  }

  const DrawStats stats = summarize(values);
  ReliabilityReport report;
  report.method = Method::KrrBootstrap;
  report.k = cfg.k;
  report.n_items = table.n();
  report.value = stats.mean;
  if (values.size() > 1) report.dispersion = stats.sd;
  report.seed = cfg.seed;
  report.bootstrap_iterations = iterations;
  report.flag_if_out_of_range();
  return report;
}

Curve k_curve(const RatingTable& rep_a, const RatingTable* rep_b, const KrrConfig& cfg,
              const CurveOptions& options) {
  if (options.k_max < 1) fail(ErrorKind::BadRedundancy, "k_max must be at least 1");
  if (options.k_max > rep_a.k() || (rep_b && options.k_max > rep_b->k()))
    fail(ErrorKind::BadRedundancy, "k_max exceeds the available redundancy");

  Curve curve;
  if (!rep_b)
    curve.notices.push_back("empirical series omitted: needs two replications");
  const bool numeric = is_numeric(rep_a.scale());
  if (!numeric)
    curve.notices.push_back("icc and sb series omitted: they need a numeric scale");

  // Sub-seed streams: 0 reserved for the SB pilot, then (series, k) pairs.
  const std::uint64_t sb_seed = derive_seed(cfg.seed, 0);
  const auto series_seed = [&](int series, int k) {
    return derive_seed(cfg.seed, 1 + (static_cast<std::uint64_t>(series) << 32) +
                                     static_cast<std::uint64_t>(k));
  };

  for (int k = 1; k <= options.k_max; ++k) {
    if (rep_b) {
      KrrConfig step = cfg;
      step.k = k;
      step.seed = series_seed(0, k);
      const ReliabilityReport r = krr_empirical(rep_a, *rep_b, step);
      curve.rows.push_back({k, "empirical", r.value, r.dispersion});
    }

    if (!numeric) {
      continue;
    } else if (options.icc_mode == IccMode::Subsample && k == 1 && rep_a.k() > 1) {
      curve.notices.push_back(
          "icc series: ICC(1) unavailable, a single sampled column cannot "
          "identify the variance components");
    } else if (options.icc_mode == IccMode::Subsample && k < rep_a.k()) {
      // Subsampling is stochastic; average it over the same number of draws
      // as the empirical series.
      std::vector<double> values;
      values.reserve(static_cast<std::size_t>(cfg.draws));
      for (int d = 0; d < cfg.draws; ++d)
        values.push_back(
            icc_k(rep_a, k, IccMode::Subsample, derive_seed(series_seed(1, k), d)).value);
      const DrawStats stats = summarize(values);
      CurveRow row{k, "icc", stats.mean, {}};
      if (values.size() > 1) row.dispersion = stats.sd;
      curve.rows.push_back(row);
    } else {
      const ReliabilityReport r = icc_k(rep_a, k, IccMode::FullTable);
      curve.rows.push_back({k, "icc", r.value, {}});
    }
  }

  if (numeric)
    for (const auto& [k, value] : sb_curve(rep_a, options.pilot_k, options.k_max, sb_seed))
      curve.rows.push_back({k, "sb", value, {}});
  return curve;
}

}  // namespace krr
