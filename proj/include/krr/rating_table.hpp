#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "krr/errors.hpp"

namespace krr {

enum class Scale { Nominal, Ordinal, Interval, Ratio };

constexpr bool is_numeric(Scale s) noexcept { return s != Scale::Nominal; }
const char* to_string(Scale s) noexcept;
Scale scale_from_string(std::string_view s);

/// An n-items x k-slots rating matrix. Slots are positional, not rater
/// identities: ratings land in slots in arrival order and every computation
/// treats columns as interchangeable.
///
/// Cells are stored as doubles; NaN marks a missing cell. Nominal tables
/// store label codes (indices into labels()); numeric scales store the
/// rating value itself.
class RatingTable {
 public:
  RatingTable(std::vector<std::string> item_ids, Eigen::MatrixXd cells, Scale scale,
              std::vector<std::string> labels = {});

  Eigen::Index n() const noexcept { return cells_.rows(); }
  Eigen::Index k() const noexcept { return cells_.cols(); }
  Scale scale() const noexcept { return scale_; }
  const std::vector<std::string>& item_ids() const noexcept { return item_ids_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const Eigen::MatrixXd& cells() const noexcept { return cells_; }

  double cell(Eigen::Index item, Eigen::Index slot) const { return cells_(item, slot); }
  bool missing(Eigen::Index item, Eigen::Index slot) const {
    return is_missing(cells_(item, slot));
  }
  Eigen::Index ratings_in_item(Eigen::Index item) const;
  Eigen::Index missing_count() const;
  bool complete() const { return missing_count() == 0; }

  /// Human-readable form of a cell value (label string for nominal tables).
  std::string value_name(double value) const;

  static bool is_missing(double v) noexcept { return std::isnan(v); }
  static constexpr double missing_value() noexcept {
    return std::numeric_limits<double>::quiet_NaN();
  }

 private:
  std::vector<std::string> item_ids_;
  Eigen::MatrixXd cells_;
  Scale scale_;
  std::vector<std::string> labels_;
};

struct AggregationFn {
  enum class Kind { Mean, Median, Majority };
  enum class TieBreak { Error, LowestLabel };

  Kind kind = Kind::Mean;
  TieBreak tie_break = TieBreak::Error;  // majority only
};

const char* to_string(AggregationFn::Kind k) noexcept;
AggregationFn::Kind aggregation_from_string(std::string_view s);

/// Per-item aggregated values, one per item of the source table, in the same
/// item order. `k` records how many ratings went into each value.
struct AggregateVector {
  std::vector<std::string> item_ids;
  Eigen::VectorXd values;
  int k = 1;
  Scale scale = Scale::Interval;
  std::vector<std::string> labels;  // carried over for majority on nominal data
};

}  // namespace krr
