#include "krr/rating_table.hpp"

#include <cmath>
#include <unordered_set>

namespace krr {

const char* to_string(Scale s) noexcept {
  switch (s) {
    case Scale::Nominal: return "nominal";
    case Scale::Ordinal: return "ordinal";
    case Scale::Interval: return "interval";
    case Scale::Ratio: return "ratio";
  }
  return "interval";
}

Scale scale_from_string(std::string_view s) {
  if (s == "nominal") return Scale::Nominal;
  if (s == "ordinal") return Scale::Ordinal;
  if (s == "interval") return Scale::Interval;
  if (s == "ratio") return Scale::Ratio;
  fail(ErrorKind::ValueError, "unknown scale '" + std::string(s) + "'");
}

const char* to_string(AggregationFn::Kind k) noexcept {
  switch (k) {
    case AggregationFn::Kind::Mean: return "mean";
    case AggregationFn::Kind::Median: return "median";
    case AggregationFn::Kind::Majority: return "majority";
  }
  return "mean";
}

AggregationFn::Kind aggregation_from_string(std::string_view s) {
  if (s == "mean") return AggregationFn::Kind::Mean;
  if (s == "median") return AggregationFn::Kind::Median;
  if (s == "majority") return AggregationFn::Kind::Majority;
  fail(ErrorKind::ValueError, "unknown aggregation '" + std::string(s) + "'");
}

RatingTable::RatingTable(std::vector<std::string> item_ids, Eigen::MatrixXd cells, Scale scale,
                         std::vector<std::string> labels)
    : item_ids_(std::move(item_ids)), cells_(std::move(cells)), scale_(scale),
      labels_(std::move(labels)) {
  if (cells_.rows() < 1 || cells_.cols() < 1)
    fail(ErrorKind::ValueError, "rating table needs at least one item and one slot");
  if (static_cast<Eigen::Index>(item_ids_.size()) != cells_.rows())
    fail(ErrorKind::ValueError, "item id count does not match row count");

  std::unordered_set<std::string> seen;
  for (const auto& id : item_ids_) {
    if (id.empty()) fail(ErrorKind::ValueError, "empty item id");
    if (!seen.insert(id).second) fail(ErrorKind::ValueError, "duplicate item id '" + id + "'");
  }

  if (scale_ == Scale::Nominal) {
    if (labels_.empty())
      fail(ErrorKind::ValueError, "nominal table needs a label alphabet");
    std::unordered_set<std::string> label_set;
    for (const auto& l : labels_) {
      if (l.empty()) fail(ErrorKind::ValueError, "empty label in alphabet");
      if (!label_set.insert(l).second)
        fail(ErrorKind::ValueError, "duplicate label '" + l + "' in alphabet");
    }
  } else if (!labels_.empty()) {
    fail(ErrorKind::ScaleMismatch, "label alphabet given for a numeric scale");
  }

  for (Eigen::Index i = 0; i < cells_.rows(); ++i) {
    for (Eigen::Index j = 0; j < cells_.cols(); ++j) {
      const double v = cells_(i, j);
      if (is_missing(v)) continue;
      if (std::isinf(v)) fail(ErrorKind::ValueError, "non-finite rating value");
      if (scale_ == Scale::Nominal) {
        if (v != std::floor(v) || v < 0 ||
            v >= static_cast<double>(labels_.size()))
          fail(ErrorKind::ValueError, "nominal cell is not a valid label code");
      } else if (scale_ == Scale::Ratio && v < 0) {
        fail(ErrorKind::ValueError, "negative value on a ratio scale");
      }
    }
  }
}

Eigen::Index RatingTable::ratings_in_item(Eigen::Index item) const {
  Eigen::Index count = 0;
  for (Eigen::Index j = 0; j < k(); ++j)
    if (!missing(item, j)) ++count;
  return count;
}

Eigen::Index RatingTable::missing_count() const {
  Eigen::Index count = 0;
  for (Eigen::Index i = 0; i < n(); ++i) count += k() - ratings_in_item(i);
  return count;
}

std::string RatingTable::value_name(double value) const {
  if (is_missing(value)) return "<missing>";
  if (scale_ == Scale::Nominal) return labels_.at(static_cast<std::size_t>(value));
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", value);
  return buf;
}

}  // namespace krr
