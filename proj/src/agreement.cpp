#include "krr/agreement.hpp"

#include <algorithm>
#include <map>

namespace krr {

const char* to_string(DistanceMetric m) noexcept {
  switch (m) {
    case DistanceMetric::Nominal: return "nominal";
    case DistanceMetric::Ordinal: return "ordinal";
    case DistanceMetric::Interval: return "interval";
    case DistanceMetric::Ratio: return "ratio";
  }
  return "interval";
}

DistanceMetric metric_from_string(std::string_view s) {
  if (s == "nominal") return DistanceMetric::Nominal;
  if (s == "ordinal") return DistanceMetric::Ordinal;
  if (s == "interval") return DistanceMetric::Interval;
  if (s == "ratio") return DistanceMetric::Ratio;
  fail(ErrorKind::ValueError, "unknown distance metric '" + std::string(s) + "'");
}

DistanceMetric default_metric(Scale scale) noexcept {
  switch (scale) {
    case Scale::Nominal: return DistanceMetric::Nominal;
    case Scale::Ordinal: return DistanceMetric::Ordinal;
    case Scale::Interval: return DistanceMetric::Interval;
    case Scale::Ratio: return DistanceMetric::Ratio;
  }
  return DistanceMetric::Interval;
}

CoincidenceMatrix coincidence_matrix(const RatingTable& table) {
  // Alphabet: distinct non-missing values across pairable items.
  std::map<double, Eigen::Index> index_of;
  std::vector<std::vector<double>> item_values(static_cast<std::size_t>(table.n()));
  CoincidenceMatrix cm;
  for (Eigen::Index i = 0; i < table.n(); ++i) {
    auto& vals = item_values[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < table.k(); ++j)
      if (!table.missing(i, j)) vals.push_back(table.cell(i, j));
    if (vals.size() < 2) {
      ++cm.items_skipped;
      vals.clear();
      continue;
    }
    ++cm.items_used;
    for (double v : vals) index_of.emplace(v, 0);
  }
  if (cm.items_used == 0)
    fail(ErrorKind::InsufficientPairs, "no item has two or more ratings");

  Eigen::Index next = 0;
  for (auto& [value, idx] : index_of) {
    idx = next++;
    cm.values.push_back(value);
  }

  const auto a = static_cast<Eigen::Index>(cm.values.size());
  cm.counts = Eigen::MatrixXd::Zero(a, a);
  for (const auto& vals : item_values) {
    if (vals.empty()) continue;
    const double weight = 1.0 / static_cast<double>(vals.size() - 1);
    for (std::size_t u = 0; u < vals.size(); ++u)
      for (std::size_t v = 0; v < vals.size(); ++v)
        if (u != v) cm.counts(index_of[vals[u]], index_of[vals[v]]) += weight;
  }
  cm.marginals = cm.counts.rowwise().sum();
  cm.total = cm.marginals.sum();
  return cm;
}

Eigen::MatrixXd squared_distances(const CoincidenceMatrix& cm, DistanceMetric metric) {
  const auto a = static_cast<Eigen::Index>(cm.values.size());
  Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(a, a);

  // Prefix sums of marginals for the ordinal metric: values are ascending, so
  // the rank position of value c is sum(n_g, g <= c) - n_c / 2.
  Eigen::VectorXd prefix(a);
  double run = 0.0;
  for (Eigen::Index c = 0; c < a; ++c) {
    run += cm.marginals(c);
    prefix(c) = run;
  }

  for (Eigen::Index c = 0; c < a; ++c) {
    for (Eigen::Index d = c + 1; d < a; ++d) {
      const double x = cm.values[static_cast<std::size_t>(c)];
      const double y = cm.values[static_cast<std::size_t>(d)];
      double v = 0.0;
      switch (metric) {
        case DistanceMetric::Nominal: v = 1.0; break;
        case DistanceMetric::Interval: v = (x - y) * (x - y); break;
        case DistanceMetric::Ratio: {
          const double denom = x + y;
          v = denom == 0.0 ? 0.0 : ((x - y) / denom) * ((x - y) / denom);
          break;
        }
        case DistanceMetric::Ordinal: {
          const double span = prefix(d) - (c > 0 ? prefix(c - 1) : 0.0) -
                              (cm.marginals(c) + cm.marginals(d)) / 2.0;
          v = span * span;
          break;
        }
      }
      d2(c, d) = v;
      d2(d, c) = v;
    }
  }
  return d2;
}

ReliabilityReport krippendorff_alpha(const RatingTable& table, DistanceMetric metric) {
  const CoincidenceMatrix cm = coincidence_matrix(table);
  const Eigen::MatrixXd d2 = squared_distances(cm, metric);

  const double n = cm.total;
  const double observed = (cm.counts.array() * d2.array()).sum() / n;
  const double expected =
      (cm.marginals * cm.marginals.transpose()).cwiseProduct(d2).sum() / (n * (n - 1.0));
  if (expected == 0.0)
    fail(ErrorKind::DegenerateData, "zero expected disagreement (all pairable values identical)");

  ReliabilityReport report;
  report.method = Method::Alpha;
  report.k = 1;
  report.value = 1.0 - observed / expected;
  report.n_items = cm.items_used;
  if (cm.items_skipped > 0)
    report.warnings.push_back(std::to_string(cm.items_skipped) +
                              " item(s) with fewer than 2 ratings excluded");
  report.flag_if_out_of_range();
  return report;
}

namespace {

ReliabilityReport kappa_from_codes(const std::vector<Eigen::Index>& a,
                                   const std::vector<Eigen::Index>& b, Eigen::Index n_labels,
                                   int k, Eigen::Index n_items) {
  const double n = static_cast<double>(a.size());
  Eigen::MatrixXd confusion = Eigen::MatrixXd::Zero(n_labels, n_labels);
  for (std::size_t i = 0; i < a.size(); ++i) confusion(a[i], b[i]) += 1.0;

  const double p_o = confusion.trace() / n;
  const Eigen::VectorXd row = confusion.rowwise().sum() / n;
  const Eigen::VectorXd col = confusion.colwise().sum().transpose() / n;
  const double p_e = row.dot(col);
  if (p_e == 1.0)
    fail(ErrorKind::DegenerateData, "both columns use a single identical label");

  ReliabilityReport report;
  report.method = Method::Kappa;
  report.k = k;
  report.value = (p_o - p_e) / (1.0 - p_e);
  report.n_items = n_items;
  report.flag_if_out_of_range();
  return report;
}

std::vector<Eigen::Index> codes_of(const Eigen::VectorXd& values, const char* which) {
  std::vector<Eigen::Index> codes(static_cast<std::size_t>(values.size()));
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (RatingTable::is_missing(values(i)))
      fail(ErrorKind::IncompleteData, std::string("missing value in ") + which + " column");
    codes[static_cast<std::size_t>(i)] = static_cast<Eigen::Index>(values(i));
  }
  return codes;
}

}  // namespace

ReliabilityReport cohens_kappa(const AggregateVector& col_a, const AggregateVector& col_b) {
  if (col_a.scale != Scale::Nominal || col_b.scale != Scale::Nominal)
    fail(ErrorKind::ScaleMismatch, "kappa needs categorical columns");
  if (col_a.labels != col_b.labels)
    fail(ErrorKind::ScaleMismatch, "kappa columns use different alphabets");
  if (col_a.values.size() != col_b.values.size() || col_a.values.size() < 1)
    fail(ErrorKind::ValueError, "kappa needs two equal-length non-empty columns");
  return kappa_from_codes(codes_of(col_a.values, "first"), codes_of(col_b.values, "second"),
                          static_cast<Eigen::Index>(col_a.labels.size()),
                          std::max(col_a.k, col_b.k), col_a.values.size());
}

ReliabilityReport cohens_kappa(const RatingTable& two_columns) {
  if (two_columns.scale() != Scale::Nominal)
    fail(ErrorKind::ScaleMismatch, "kappa needs a nominal table");
  if (two_columns.k() != 2)
    fail(ErrorKind::BadRedundancy, "kappa compares exactly two columns");
  if (!two_columns.complete())
    fail(ErrorKind::IncompleteData, "kappa needs a complete table");
  return kappa_from_codes(codes_of(two_columns.cells().col(0), "first"),
                          codes_of(two_columns.cells().col(1), "second"),
                          static_cast<Eigen::Index>(two_columns.labels().size()), 1,
                          two_columns.n());
}

}  // namespace krr
