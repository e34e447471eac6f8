#include "krr/ingestion.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace krr {

namespace {

// Minimal RFC 4180 line splitter: comma-separated, optional double quotes,
// "" escapes a quote inside a quoted field. No embedded newlines.
std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      if (!field.empty())
        fail(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": stray quote");
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  if (quoted)
    fail(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": unterminated quote");
  fields.push_back(std::move(field));
  return fields;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
  std::size_t b = 0;
  while (b < s.size() && (s[b] == ' ' || s[b] == '\t')) ++b;
  return s.substr(b);
}

// Reads all lines, strips a UTF-8 BOM and trailing CR, drops trailing blanks.
std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ParseError, "cannot open '" + path.string() + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  if (!lines.empty() && lines.front().rfind("\xEF\xBB\xBF", 0) == 0)
    lines.front().erase(0, 3);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

bool parse_double_strict(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last && std::isfinite(out);
}

// Parses one value token under the manifest. Returns an error message, or an
// empty string on success; `code_pending` flags nominal labels waiting for an
// inferred alphabet.
std::string parse_value(const std::string& token, const DatasetManifest& m, double& value,
                        bool& code_pending) {
  code_pending = false;
  if (m.scale == Scale::Nominal) {
    if (token.empty()) return "empty label";
    if (m.labels.empty()) {
      code_pending = true;  // alphabet inferred after the full read
      return "";
    }
    const auto it = std::find(m.labels.begin(), m.labels.end(), token);
    if (it == m.labels.end())
      return "label '" + token + "' not in the declared alphabet";
    value = static_cast<double>(it - m.labels.begin());
    return "";
  }
  if (!parse_double_strict(token, value))
    return "value '" + token + "' does not parse as " + to_string(m.scale);
  if (m.scale == Scale::Ratio && value < 0) return "negative value on a ratio scale";
  if (m.min_value && value < *m.min_value)
    return "value " + token + " below declared minimum";
  if (m.max_value && value > *m.max_value)
    return "value " + token + " above declared maximum";
  return "";
}

const std::vector<std::string> kLongHeader = {"item_id", "replication_id", "slot", "value"};

bool is_long_header(const std::vector<std::string>& fields) {
  return fields == kLongHeader;
}

bool is_wide_header(const std::vector<std::string>& fields) {
  if (fields.size() < 2 || fields[0] != "item_id") return false;
  for (std::size_t j = 1; j < fields.size(); ++j)
    if (fields[j] != "r" + std::to_string(j)) return false;
  return true;
}

// Assign codes for an inferred nominal alphabet: distinct labels, sorted.
void infer_alphabet(ParsedDataset& dataset) {
  std::set<std::string> distinct;
  for (const auto& r : dataset.records) distinct.insert(r.raw);
  dataset.manifest.labels.assign(distinct.begin(), distinct.end());
  std::unordered_map<std::string, double> code;
  for (std::size_t i = 0; i < dataset.manifest.labels.size(); ++i)
    code[dataset.manifest.labels[i]] = static_cast<double>(i);
  for (auto& r : dataset.records) r.value = code[r.raw];
}

}  // namespace

DatasetManifest parse_manifest(const std::filesystem::path& path) {
  DatasetManifest m;
  bool scale_seen = false;
  std::size_t line_no = 0;
  for (const auto& raw : read_lines(path)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorKind::ParseError,
           "manifest line " + std::to_string(line_no) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "scale") {
      m.scale = scale_from_string(value);
      scale_seen = true;
    } else if (key == "min" || key == "max") {
      double v;
      if (!parse_double_strict(value, v))
        fail(ErrorKind::ParseError, "manifest: bad number for '" + key + "'");
      (key == "min" ? m.min_value : m.max_value) = v;
    } else if (key == "k") {
      int v = 0;
      const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
      if (res.ec != std::errc() || res.ptr != value.data() + value.size() || v < 1)
        fail(ErrorKind::ParseError, "manifest: bad redundancy k");
      m.k = v;
    } else if (key == "labels") {
      std::stringstream ss(value);
      std::string label;
      while (std::getline(ss, label, ',')) m.labels.push_back(trim(label));
    } else if (key == "replications") {
      std::stringstream ss(value);
      std::string rep;
      while (std::getline(ss, rep, ',')) m.replications.push_back(trim(rep));
    } else {
      fail(ErrorKind::ParseError, "manifest: unknown key '" + key + "'");
    }
  }
  if (!scale_seen) fail(ErrorKind::ParseError, "manifest: missing 'scale'");
  if (m.scale == Scale::Nominal && (m.min_value || m.max_value))
    fail(ErrorKind::ParseError, "manifest: numeric range on a nominal scale");
  if (m.scale != Scale::Nominal && !m.labels.empty())
    fail(ErrorKind::ParseError, "manifest: label alphabet on a numeric scale");
  if (m.min_value && m.max_value && !(*m.min_value <= *m.max_value))
    fail(ErrorKind::ParseError, "manifest: min exceeds max");
  return m;
}

ParsedDataset parse_long_csv(const std::filesystem::path& path, const DatasetManifest& declared) {
  const auto lines = read_lines(path);
  if (lines.empty()) fail(ErrorKind::ParseError, "'" + path.string() + "' is empty");
  if (!is_long_header(split_csv_line(lines[0], 1)))
    fail(ErrorKind::ParseError, "expected header 'item_id,replication_id,slot,value'");

  ParsedDataset dataset;
  dataset.manifest = declared;
  dataset.manifest.replications.clear();
  std::set<std::tuple<std::string, std::string, int>> explicit_cells;

  for (std::size_t idx = 1; idx < lines.size(); ++idx) {
    const std::size_t line_no = idx + 1;
    const auto fields = split_csv_line(lines[idx], line_no);
    if (fields.size() != 4)
      fail(ErrorKind::ParseError,
           "line " + std::to_string(line_no) + ": expected 4 fields, got " +
               std::to_string(fields.size()));

    LongRecord rec;
    rec.line = line_no;
    rec.item_id = fields[0];
    rec.replication_id = fields[1];
    if (rec.item_id.empty())
      fail(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": empty item_id");
    if (rec.replication_id.empty())
      fail(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": empty replication_id");

    if (!fields[2].empty()) {
      int slot = -1;
      const auto res =
          std::from_chars(fields[2].data(), fields[2].data() + fields[2].size(), slot);
      if (res.ec != std::errc() || res.ptr != fields[2].data() + fields[2].size() || slot < 0)
        fail(ErrorKind::ParseError,
             "line " + std::to_string(line_no) + ": slot must be a non-negative integer");
      rec.slot = slot;
      if (!explicit_cells.insert({rec.item_id, rec.replication_id, slot}).second)
        fail(ErrorKind::DuplicateCell,
             "line " + std::to_string(line_no) + ": duplicate (item '" + rec.item_id +
                 "', replication '" + rec.replication_id + "', slot " + std::to_string(slot) +
                 ")");
    }

    rec.raw = fields[3];
    bool code_pending = false;
    const std::string err = parse_value(rec.raw, dataset.manifest, rec.value, code_pending);
    if (!err.empty())
      fail(ErrorKind::ValueError, "line " + std::to_string(line_no) + ": " + err);

    if (std::find(dataset.manifest.replications.begin(), dataset.manifest.replications.end(),
                  rec.replication_id) == dataset.manifest.replications.end())
      dataset.manifest.replications.push_back(rec.replication_id);
    dataset.records.push_back(std::move(rec));
  }

  if (dataset.manifest.scale == Scale::Nominal && declared.labels.empty())
    infer_alphabet(dataset);
  return dataset;
}

RatingTable parse_wide_csv(const std::filesystem::path& path, const DatasetManifest& declared) {
  const auto lines = read_lines(path);
  if (lines.empty()) fail(ErrorKind::ParseError, "'" + path.string() + "' is empty");
  const auto header = split_csv_line(lines[0], 1);
  if (!is_wide_header(header))
    fail(ErrorKind::ParseError, "expected header 'item_id,r1,...,rk'");
  const std::size_t k = header.size() - 1;
  if (lines.size() < 2) fail(ErrorKind::EmptyReplication, "wide file has no data rows");

  DatasetManifest manifest = declared;
  std::vector<std::string> item_ids;
  std::vector<std::vector<std::string>> raw_rows;
  for (std::size_t idx = 1; idx < lines.size(); ++idx) {
    const std::size_t line_no = idx + 1;
    auto fields = split_csv_line(lines[idx], line_no);
    if (fields.size() != k + 1)
      fail(ErrorKind::ParseError,
           "line " + std::to_string(line_no) + ": expected " + std::to_string(k + 1) +
               " fields, got " + std::to_string(fields.size()));
    if (fields[0].empty())
      fail(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": empty item_id");
    item_ids.push_back(fields[0]);
    raw_rows.emplace_back(fields.begin() + 1, fields.end());
  }

  if (manifest.scale == Scale::Nominal && manifest.labels.empty()) {
    std::set<std::string> distinct;
    for (const auto& row : raw_rows)
      for (const auto& tok : row)
        if (!tok.empty()) distinct.insert(tok);
    manifest.labels.assign(distinct.begin(), distinct.end());
  }

  Eigen::MatrixXd cells(static_cast<Eigen::Index>(item_ids.size()), static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < raw_rows.size(); ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const std::string& tok = raw_rows[i][j];
      if (tok.empty()) {
        cells(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            RatingTable::missing_value();
        continue;
      }
      double value = 0.0;
      bool code_pending = false;
      const std::string err = parse_value(tok, manifest, value, code_pending);
      if (!err.empty())
        fail(ErrorKind::ValueError, "line " + std::to_string(i + 2) + ": " + err);
      cells(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
    }
  }
  return RatingTable(std::move(item_ids), std::move(cells), manifest.scale, manifest.labels);
}

void write_long_csv(const ParsedDataset& dataset, std::ostream& out) {
  out << "item_id,replication_id,slot,value\n";
  for (const auto& r : dataset.records) {
    out << csv_escape(r.item_id) << ',' << csv_escape(r.replication_id) << ',';
    if (r.slot) out << *r.slot;
    out << ',';
    if (dataset.manifest.scale == Scale::Nominal)
      out << csv_escape(dataset.manifest.labels.at(static_cast<std::size_t>(r.value)));
    else
      out << format_double(r.value);
    out << '\n';
  }
}

void write_wide_csv(const RatingTable& table, std::ostream& out) {
  out << "item_id";
  for (Eigen::Index j = 0; j < table.k(); ++j) out << ",r" << (j + 1);
  out << '\n';
  for (Eigen::Index i = 0; i < table.n(); ++i) {
    out << csv_escape(table.item_ids()[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < table.k(); ++j) {
      out << ',';
      if (table.missing(i, j)) continue;
      if (table.scale() == Scale::Nominal)
        out << csv_escape(table.labels().at(static_cast<std::size_t>(table.cell(i, j))));
      else
        out << format_double(table.cell(i, j));
    }
    out << '\n';
  }
}

RatingTable to_table(const ParsedDataset& dataset, const std::string& replication_id) {
  // Rows keyed by item in first-appearance order; each record lands in its
  // explicit slot or the lowest unoccupied one.
  std::vector<std::string> item_ids;
  std::unordered_map<std::string, std::size_t> item_row;
  std::vector<std::vector<double>> rows;

  for (const auto& rec : dataset.records) {
    if (rec.replication_id != replication_id) continue;
    auto [it, inserted] = item_row.try_emplace(rec.item_id, rows.size());
    if (inserted) {
      item_ids.push_back(rec.item_id);
      rows.emplace_back();
    }
    auto& row = rows[it->second];
    std::size_t slot;
    if (rec.slot) {
      slot = static_cast<std::size_t>(*rec.slot);
    } else {
      slot = 0;
      while (slot < row.size() && !RatingTable::is_missing(row[slot])) ++slot;
    }
    if (slot >= row.size()) row.resize(slot + 1, RatingTable::missing_value());
    if (!RatingTable::is_missing(row[slot]))
      fail(ErrorKind::DuplicateCell, "item '" + rec.item_id + "' slot " + std::to_string(slot) +
                                         " filled twice in replication '" + replication_id + "'");
    row[slot] = rec.value;
  }

  if (rows.empty())
    fail(ErrorKind::EmptyReplication, "no records for replication '" + replication_id + "'");

  std::size_t k = 0;
  for (const auto& row : rows) k = std::max(k, row.size());
  Eigen::MatrixXd cells = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(rows.size()),
                                                    static_cast<Eigen::Index>(k),
                                                    RatingTable::missing_value());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      cells(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];

  return RatingTable(std::move(item_ids), std::move(cells), dataset.manifest.scale,
                     dataset.manifest.labels);
}

RatingTable complete_case_filter(const RatingTable& table, int k_required) {
  if (k_required < 1 || k_required > table.k())
    fail(ErrorKind::BadRedundancy, "k_required " + std::to_string(k_required) + " outside 1.." +
                                       std::to_string(table.k()));
  std::vector<std::string> kept_ids;
  std::vector<Eigen::Index> kept_rows;
  for (Eigen::Index i = 0; i < table.n(); ++i) {
    if (table.ratings_in_item(i) >= k_required) {
      kept_rows.push_back(i);
      kept_ids.push_back(table.item_ids()[static_cast<std::size_t>(i)]);
    }
  }
  if (kept_rows.empty())
    fail(ErrorKind::EmptyReplication,
         "no item has " + std::to_string(k_required) + " ratings");

  Eigen::MatrixXd cells(static_cast<Eigen::Index>(kept_rows.size()), k_required);
  for (std::size_t r = 0; r < kept_rows.size(); ++r) {
    Eigen::Index filled = 0;
    for (Eigen::Index j = 0; j < table.k() && filled < k_required; ++j) {
      const double v = table.cell(kept_rows[r], j);
      if (!RatingTable::is_missing(v)) cells(static_cast<Eigen::Index>(r), filled++) = v;
    }
  }
  return RatingTable(std::move(kept_ids), std::move(cells), table.scale(), table.labels());
}

std::pair<RatingTable, RatingTable> pair_replications(const ParsedDataset& dataset) {
  const auto& reps = dataset.manifest.replications;
  if (reps.size() != 2)
    fail(ErrorKind::BadReplicationCount,
         "expected exactly 2 replications, found " + std::to_string(reps.size()));
  RatingTable a = to_table(dataset, reps[0]);
  RatingTable b = align_items(a, to_table(dataset, reps[1]));
  return {std::move(a), std::move(b)};
}

RatingTable align_items(const RatingTable& a, const RatingTable& b) {
  if (a.item_ids() == b.item_ids()) return b;

  const std::set<std::string> set_a(a.item_ids().begin(), a.item_ids().end());
  const std::set<std::string> set_b(b.item_ids().begin(), b.item_ids().end());
  std::vector<std::string> only_a, only_b;
  std::set_difference(set_a.begin(), set_a.end(), set_b.begin(), set_b.end(),
                      std::back_inserter(only_a));
  std::set_difference(set_b.begin(), set_b.end(), set_a.begin(), set_a.end(),
                      std::back_inserter(only_b));
  if (!only_a.empty() || !only_b.empty()) {
    std::string msg = "item sets differ;";
    msg += " only in the first: " + std::to_string(only_a.size());
    for (std::size_t i = 0; i < only_a.size() && i < 5; ++i) msg += " " + only_a[i];
    msg += "; only in the second: " + std::to_string(only_b.size());
    for (std::size_t i = 0; i < only_b.size() && i < 5; ++i) msg += " " + only_b[i];
    fail(ErrorKind::ReplicationMismatch, msg);
  }

  // Same set, different order.
  std::unordered_map<std::string, Eigen::Index> row_of;
  for (Eigen::Index i = 0; i < b.n(); ++i)
    row_of[b.item_ids()[static_cast<std::size_t>(i)]] = i;
  Eigen::MatrixXd cells(b.n(), b.k());
  for (Eigen::Index i = 0; i < a.n(); ++i)
    cells.row(i) = b.cells().row(row_of[a.item_ids()[static_cast<std::size_t>(i)]]);
  return RatingTable(a.item_ids(), std::move(cells), b.scale(), b.labels());
}

CsvShape detect_shape(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) fail(ErrorKind::ParseError, "'" + path.string() + "' is empty");
  const auto header = split_csv_line(lines[0], 1);
  if (is_long_header(header)) return CsvShape::Long;
  if (is_wide_header(header)) return CsvShape::Wide;
  fail(ErrorKind::ParseError,
       "unrecognized header; expected 'item_id,replication_id,slot,value' or 'item_id,r1,...,rk'");
}

RatingTable load_table(const std::filesystem::path& path, const DatasetManifest& declared,
                       const std::optional<std::string>& replication) {
  if (detect_shape(path) == CsvShape::Wide) return parse_wide_csv(path, declared);
  const ParsedDataset dataset = parse_long_csv(path, declared);
  const auto& reps = dataset.manifest.replications;
  if (reps.empty()) fail(ErrorKind::EmptyReplication, "no data rows");
  if (replication) {
    if (std::find(reps.begin(), reps.end(), *replication) == reps.end())
      fail(ErrorKind::EmptyReplication, "replication '" + *replication + "' not in file");
    return to_table(dataset, *replication);
  }
  if (reps.size() > 1)
    fail(ErrorKind::BadReplicationCount,
         "file holds " + std::to_string(reps.size()) +
             " replications; pick one with --replication");
  return to_table(dataset, reps[0]);
}

ValidationSummary validate_file(const std::filesystem::path& path,
                                const DatasetManifest* declared) {
  DatasetManifest manifest = declared ? *declared : DatasetManifest{};
  ValidationSummary summary;
  summary.shape = detect_shape(path);
  const auto lines = read_lines(path);

  // Row-level scan; value problems become findings and the cell missing.
  struct ItemStats {
    Eigen::Index ratings = 0;
    std::size_t max_slot_plus1 = 0;
  };
  std::vector<std::string> item_order;
  std::map<std::string, std::map<std::string, ItemStats>> per_rep;  // rep -> item -> stats

  if (summary.shape == CsvShape::Long) {
    std::set<std::tuple<std::string, std::string, int>> explicit_cells;
    std::map<std::pair<std::string, std::string>, std::size_t> arrival;
    for (std::size_t idx = 1; idx < lines.size(); ++idx) {
      const std::size_t line_no = idx + 1;
      const auto fields = split_csv_line(lines[idx], line_no);
      if (fields.size() != 4)
        fail(ErrorKind::ParseError,
             "line " + std::to_string(line_no) + ": expected 4 fields, got " +
                 std::to_string(fields.size()));
      const std::string& item = fields[0];
      const std::string& rep = fields[1];
      if (item.empty() || rep.empty()) {
        summary.findings.push_back({line_no, "empty item_id or replication_id"});
        continue;
      }
      if (std::find(summary.replications.begin(), summary.replications.end(), rep) ==
          summary.replications.end())
        summary.replications.push_back(rep);

      auto& stats = per_rep[rep][item];
      std::size_t slot;
      if (!fields[2].empty()) {
        int s = -1;
        const auto res =
            std::from_chars(fields[2].data(), fields[2].data() + fields[2].size(), s);
        if (res.ec != std::errc() || res.ptr != fields[2].data() + fields[2].size() || s < 0) {
          fail(ErrorKind::ParseError,
               "line " + std::to_string(line_no) + ": slot must be a non-negative integer");
        }
        slot = static_cast<std::size_t>(s);
        if (!explicit_cells.insert({item, rep, s}).second) {
          summary.findings.push_back(
              {line_no, "duplicate cell (item '" + item + "', slot " + std::to_string(s) + ")"});
          continue;
        }
      } else {
        slot = arrival[{rep, item}]++;
      }

      double value = 0.0;
      bool code_pending = false;
      const std::string err = parse_value(fields[3], manifest, value, code_pending);
      if (!err.empty()) {
        summary.findings.push_back({line_no, err});
        continue;
      }
      ++stats.ratings;
      stats.max_slot_plus1 = std::max(stats.max_slot_plus1, slot + 1);
    }
    // Shape numbers cover the union of replications.
    std::set<std::string> items;
    std::size_t k = 0;
    for (const auto& [rep, item_map] : per_rep)
      for (const auto& [item, stats] : item_map) {
        items.insert(item);
        k = std::max(k, stats.max_slot_plus1);
      }
    if (manifest.k) k = std::max(k, static_cast<std::size_t>(*manifest.k));
    summary.n_items = static_cast<Eigen::Index>(items.size());
    summary.k = static_cast<Eigen::Index>(k);
    for (const auto& [rep, item_map] : per_rep) {
      for (const auto& [item, stats] : item_map) {
        const auto missing = static_cast<Eigen::Index>(k) - stats.ratings;
        if (missing > 0) {
          summary.missing_cells += missing;
          ++summary.items_with_missing;
          summary.missing_by_item.push_back({rep, item, missing});
        }
      }
    }
    if (manifest.k)
      for (const auto& [rep, item_map] : per_rep)
        for (const auto& [item, stats] : item_map)
          if (stats.ratings != *manifest.k)
            summary.findings.push_back(
                {0, "item '" + item + "' in '" + rep + "' has " +
                        std::to_string(stats.ratings) + " ratings, manifest declares " +
                        std::to_string(*manifest.k)});
    if (!manifest.replications.empty()) {
      for (const auto& rep : manifest.replications)
        if (per_rep.find(rep) == per_rep.end())
          summary.findings.push_back({0, "declared replication '" + rep + "' absent"});
    }
  } else {
    const auto header = split_csv_line(lines[0], 1);
    const std::size_t k = header.size() - 1;
    summary.k = static_cast<Eigen::Index>(k);
    std::set<std::string> items;
    for (std::size_t idx = 1; idx < lines.size(); ++idx) {
      const std::size_t line_no = idx + 1;
      const auto fields = split_csv_line(lines[idx], line_no);
      if (fields.size() != k + 1)
        fail(ErrorKind::ParseError,
             "line " + std::to_string(line_no) + ": expected " + std::to_string(k + 1) +
                 " fields, got " + std::to_string(fields.size()));
      if (fields[0].empty()) {
        summary.findings.push_back({line_no, "empty item_id"});
        continue;
      }
      if (!items.insert(fields[0]).second)
        summary.findings.push_back({line_no, "duplicate item_id '" + fields[0] + "'"});
      Eigen::Index row_missing = 0;
      for (std::size_t j = 1; j <= k; ++j) {
        if (fields[j].empty()) {
          ++row_missing;
          continue;
        }
        double value = 0.0;
        bool code_pending = false;
        const std::string err = parse_value(fields[j], manifest, value, code_pending);
        if (!err.empty()) {
          summary.findings.push_back({line_no, err});
          ++row_missing;
        }
      }
      summary.missing_cells += row_missing;
      if (row_missing > 0) {
        ++summary.items_with_missing;
        summary.missing_by_item.push_back({"", fields[0], row_missing});
      }
    }
    summary.n_items = static_cast<Eigen::Index>(items.size());
    if (manifest.k && static_cast<Eigen::Index>(*manifest.k) != summary.k)
      summary.findings.push_back({1, "file has " + std::to_string(summary.k) +
                                         " slots, manifest declares " +
                                         std::to_string(*manifest.k)});
  }
  return summary;
}

}  // namespace krr
