#pragma once

#include <Eigen/Dense>

#include <string_view>
#include <vector>

#include "krr/aggregate.hpp"
#include "krr/rating_table.hpp"
#include "krr/report.hpp"

namespace krr {

enum class DistanceMetric { Nominal, Ordinal, Interval, Ratio };

const char* to_string(DistanceMetric m) noexcept;
DistanceMetric metric_from_string(std::string_view s);
DistanceMetric default_metric(Scale scale) noexcept;

/// Symmetric value-pair counts pooled over items. Each item with m >= 2
/// ratings contributes its m(m-1) ordered pairs weighted 1/(m-1), so item
/// weight in the marginals equals its rating count.
struct CoincidenceMatrix {
  std::vector<double> values;  // distinct pairable values, ascending
  Eigen::MatrixXd counts;      // o(c, c')
  Eigen::VectorXd marginals;   // n(c)
  double total = 0.0;          // n
  Eigen::Index items_used = 0;
  Eigen::Index items_skipped = 0;  // items with < 2 ratings
};

CoincidenceMatrix coincidence_matrix(const RatingTable& table);

/// delta^2 between every pair of alphabet values. Ordinal distances come from
/// the coincidence marginals (squared difference of cumulative rank positions).
Eigen::MatrixXd squared_distances(const CoincidenceMatrix& cm, DistanceMetric metric);

/// Krippendorff's alpha = 1 - D_o/D_e over the coincidence matrix. Tolerates
/// missing cells; items with < 2 ratings are left out and noted in warnings.
ReliabilityReport krippendorff_alpha(const RatingTable& table, DistanceMetric metric);

/// Cohen's kappa between two categorical columns: (p_o - p_e) / (1 - p_e)
/// with chance agreement from the product of the two columns' marginals.
ReliabilityReport cohens_kappa(const AggregateVector& col_a, const AggregateVector& col_b);
ReliabilityReport cohens_kappa(const RatingTable& two_columns);

}  // namespace krr
