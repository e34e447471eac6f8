#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "krr/rating_table.hpp"

namespace krr {

/// One (item, replication, slot, value) observation from a long-format file.
/// `value` is the parsed cell (label code for nominal scales); `raw` keeps the
/// source token for error reporting and serialization.
struct LongRecord {
  std::string item_id;
  std::string replication_id;
  std::optional<int> slot;
  double value = 0.0;
  std::string raw;
  std::size_t line = 0;  // 1-based source line

  friend bool operator==(const LongRecord&, const LongRecord&) = default;
};

struct DatasetManifest {
  Scale scale = Scale::Interval;
  std::optional<double> min_value;
  std::optional<double> max_value;
  std::vector<std::string> labels;        // declared alphabet (nominal)
  std::optional<int> k;                   // expected redundancy
  std::vector<std::string> replications;  // replication ids present
};

/// Key-value manifest: scale=interval, min=1, max=10, k=13,
/// labels=a,b,c, replications=rep1,rep2. Unknown keys are rejected.
DatasetManifest parse_manifest(const std::filesystem::path& path);

/// A parsed long file plus its effective manifest (labels inferred from the
/// data when the declaration left them open, replication ids in file order).
struct ParsedDataset {
  DatasetManifest manifest;
  std::vector<LongRecord> records;
};

/// Long CSV with header `item_id,replication_id,slot,value`; slot may be
/// empty. Values must parse under the declared scale and range/alphabet.
ParsedDataset parse_long_csv(const std::filesystem::path& path, const DatasetManifest& declared);

/// Wide CSV with header `item_id,r1,...,rk`; empty cells are missing.
RatingTable parse_wide_csv(const std::filesystem::path& path, const DatasetManifest& declared);

void write_long_csv(const ParsedDataset& dataset, std::ostream& out);
void write_wide_csv(const RatingTable& table, std::ostream& out);

/// Records of one replication as an n x k table; k is the largest rating
/// count of any item, items with fewer ratings get missing cells. Slots fill
/// in arrival order unless a record carries an explicit slot index.
RatingTable to_table(const ParsedDataset& dataset, const std::string& replication_id);

/// Keep items with at least k_required ratings, truncated to their first
/// k_required non-missing cells; the result is complete.
RatingTable complete_case_filter(const RatingTable& table, int k_required);

/// The two replications of a long file as tables with identical item order.
std::pair<RatingTable, RatingTable> pair_replications(const ParsedDataset& dataset);

/// b's rows reordered to a's item order. ReplicationMismatch, reporting the
/// symmetric difference, when the item sets differ.
RatingTable align_items(const RatingTable& a, const RatingTable& b);

enum class CsvShape { Long, Wide };

CsvShape detect_shape(const std::filesystem::path& path);

/// Load either declared shape as a single table. Long files holding several
/// replications need `replication` to pick one.
RatingTable load_table(const std::filesystem::path& path, const DatasetManifest& declared,
                       const std::optional<std::string>& replication = {});

struct Finding {
  std::size_t line = 0;
  std::string message;
};

struct ItemMissing {
  std::string replication_id;  // empty for wide files
  std::string item_id;
  Eigen::Index missing = 0;
};

struct ValidationSummary {
  CsvShape shape = CsvShape::Long;
  Eigen::Index n_items = 0;
  Eigen::Index k = 0;
  Eigen::Index missing_cells = 0;
  Eigen::Index items_with_missing = 0;
  std::vector<ItemMissing> missing_by_item;
  std::vector<std::string> replications;
  std::vector<Finding> findings;

  bool clean() const { return findings.empty(); }
};

/// Lenient scan for `validate`: value-level problems become findings instead
/// of exceptions; structural problems (unreadable file, bad header, wrong
/// field count) still throw ParseError.
ValidationSummary validate_file(const std::filesystem::path& path,
                                const DatasetManifest* declared);

}  // namespace krr
