#include "krr/aggregate.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "krr/rng.hpp"

namespace krr {

namespace {

double mean_of(const std::vector<double>& v) {
  double sum = 0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

// Even count: arithmetic midpoint of the two central order statistics.
double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  if (m % 2 == 1) return v[m / 2];
  return (v[m / 2 - 1] + v[m / 2]) / 2.0;
}

double majority_of(const std::vector<double>& v, AggregationFn::TieBreak tie_break,
                   const RatingTable& table, Eigen::Index item) {
  std::map<double, int> counts;
  for (double x : v) ++counts[x];
  int best = 0;
  for (const auto& [value, count] : counts) best = std::max(best, count);
  std::vector<double> winners;
  for (const auto& [value, count] : counts)
    if (count == best) winners.push_back(value);
  if (winners.size() > 1 && tie_break == AggregationFn::TieBreak::Error)
    fail(ErrorKind::AggregationTie,
         "majority tie on item '" + table.item_ids()[static_cast<std::size_t>(item)] + "'");
  // winners is sorted ascending; for nominal data codes follow alphabet order,
  // so the lowest code is the earliest declared label.
  return winners.front();
}

}  // namespace

AggregateVector aggregate(const RatingTable& table, const AggregationFn& fn,
                          const std::optional<std::vector<Eigen::Index>>& slot_subset) {
  std::vector<Eigen::Index> slots;
  if (slot_subset) {
    if (slot_subset->empty())
      fail(ErrorKind::BadRedundancy, "empty slot subset");
    std::unordered_set<Eigen::Index> seen;
    for (Eigen::Index s : *slot_subset) {
      if (s < 0 || s >= table.k())
        fail(ErrorKind::BadRedundancy, "slot index out of range");
      if (!seen.insert(s).second)
        fail(ErrorKind::BadRedundancy, "repeated slot index in subset");
    }
    slots = *slot_subset;
  } else {
    slots.resize(static_cast<std::size_t>(table.k()));
    for (Eigen::Index j = 0; j < table.k(); ++j) slots[static_cast<std::size_t>(j)] = j;
  }

  const bool numeric_fn =
      fn.kind == AggregationFn::Kind::Mean || fn.kind == AggregationFn::Kind::Median;
  if (numeric_fn && !is_numeric(table.scale()))
    fail(ErrorKind::ScaleMismatch,
         std::string(to_string(fn.kind)) + " aggregation needs a numeric scale");

  AggregateVector out;
  out.item_ids = table.item_ids();
  out.values.resize(table.n());
  out.k = static_cast<int>(slots.size());
  if (fn.kind == AggregationFn::Kind::Majority) {
    out.scale = table.scale();
    out.labels = table.labels();
  } else {
    // A mean of ordinal ranks lives on an interval scale.
    out.scale = table.scale() == Scale::Ordinal ? Scale::Interval : table.scale();
  }

  std::vector<double> picked;
  picked.reserve(slots.size());
  for (Eigen::Index i = 0; i < table.n(); ++i) {
    picked.clear();
    for (Eigen::Index j : slots) {
      const double v = table.cell(i, j);
      if (RatingTable::is_missing(v))
        fail(ErrorKind::IncompleteData,
             "item '" + table.item_ids()[static_cast<std::size_t>(i)] +
                 "' is missing a rating in the selected slots");
      picked.push_back(v);
    }
    switch (fn.kind) {
      case AggregationFn::Kind::Mean: out.values(i) = mean_of(picked); break;
      case AggregationFn::Kind::Median: out.values(i) = median_of(picked); break;
      case AggregationFn::Kind::Majority:
        out.values(i) = majority_of(picked, fn.tie_break, table, i);
        break;
    }
  }
  return out;
}

RatingTable column_subsample(const RatingTable& table, int k, std::uint64_t seed) {
  if (k < 1 || k > table.k())
    fail(ErrorKind::BadRedundancy,
         "cannot sample " + std::to_string(k) + " of " + std::to_string(table.k()) + " columns");
  Rng rng = make_rng(seed);
  const std::vector<int> cols = sample_without_replacement(static_cast<int>(table.k()), k, rng);
  Eigen::MatrixXd cells(table.n(), k);
  for (int j = 0; j < k; ++j) cells.col(j) = table.cells().col(cols[static_cast<std::size_t>(j)]);
  return RatingTable(table.item_ids(), std::move(cells), table.scale(), table.labels());
}

RatingTable pair_as_table(const AggregateVector& a, const AggregateVector& b) {
  if (a.item_ids != b.item_ids)
    fail(ErrorKind::ReplicationMismatch, "aggregate vectors cover different items");
  if (a.scale != b.scale || a.labels != b.labels)
    fail(ErrorKind::ScaleMismatch, "aggregate vectors use different scales");
  Eigen::MatrixXd cells(a.values.size(), 2);
  cells.col(0) = a.values;
  cells.col(1) = b.values;
  return RatingTable(a.item_ids, std::move(cells), a.scale, a.labels);
}

}  // namespace krr
