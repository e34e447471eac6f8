#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "krr/agreement.hpp"
#include "krr/icc.hpp"
#include "krr/rating_table.hpp"
#include "krr/report.hpp"

namespace krr {

/// How two bootstrap pseudo-replications are paired per iteration.
enum class BootstrapPairing {
  Independent,  // each iteration draws two fresh pseudo-replications
  Consecutive,  // one draw per iteration, paired (1,2), (3,4), ...
};

struct KrrConfig {
  int k = 1;
  AggregationFn aggregation{};
  Method coefficient = Method::Alpha;  // Alpha or Kappa
  DistanceMetric metric = DistanceMetric::Interval;
  int draws = 30;                   // column-draw repetitions
  int bootstrap_iterations = 100;   // B
  std::uint64_t seed = 0;
  BootstrapPairing pairing = BootstrapPairing::Independent;
};

/// k-rater reliability from two replications: per draw, sample k columns
/// independently from each replication, aggregate, and score the coefficient
/// between the two aggregate vectors. Reports mean and dispersion over draws.
/// At k equal to both tables' full redundancy the draw is deterministic and
/// collapses to a single repetition.
ReliabilityReport krr_empirical(const RatingTable& rep_a, const RatingTable& rep_b,
                                const KrrConfig& cfg);

/// k-rater reliability without a replication: per iteration, build two
/// pseudo-replications by resampling each item's k ratings with replacement
/// at the same size, then score the coefficient between their aggregates.
ReliabilityReport krr_bootstrap(const RatingTable& table, const KrrConfig& cfg);

struct CurveRow {
  int k = 1;
  std::string method;  // "empirical" | "icc" | "sb"
  double value = 0.0;
  std::optional<double> dispersion;
};

struct CurveOptions {
  int k_max = 1;
  int pilot_k = 2;                       // ratings feeding the SB prophecy
  IccMode icc_mode = IccMode::Subsample; // Subsample leaves ICC(1) unavailable
};

struct Curve {
  std::vector<CurveRow> rows;
  std::vector<std::string> notices;
};

/// Reliability as a function of redundancy, by every applicable method. The
/// empirical series needs both replications; ICC(k) and the SB prediction are
/// computed on rep_a alone and only for numeric scales. In subsample mode the
/// ICC point at k=1 is unavailable (a single sampled column cannot identify
/// the components). Every omitted series leaves a notice.
Curve k_curve(const RatingTable& rep_a, const RatingTable* rep_b, const KrrConfig& cfg,
              const CurveOptions& options);

}  // namespace krr
