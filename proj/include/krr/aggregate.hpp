#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "krr/rating_table.hpp"

namespace krr {

/// Reduce each item's ratings to one value over `slot_subset` (all slots when
/// absent). Mean and median need a numeric scale; majority works on any.
/// Majority ties follow fn.tie_break: Error throws AggregationTie,
/// LowestLabel picks the smallest value (for nominal data, the label declared
/// earliest in the alphabet).
AggregateVector aggregate(const RatingTable& table, const AggregationFn& fn,
                          const std::optional<std::vector<Eigen::Index>>& slot_subset = {});

/// Uniform sample of `k` distinct columns, in sampled order, same items.
RatingTable column_subsample(const RatingTable& table, int k, std::uint64_t seed);

/// Two equal-length aggregate vectors viewed as a two-slot table, so that
/// agreement coefficients apply to aggregates unchanged.
RatingTable pair_as_table(const AggregateVector& a, const AggregateVector& b);

}  // namespace krr
