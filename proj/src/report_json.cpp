#include "krr/report_json.hpp"

#include <charconv>

namespace krr {

nlohmann::json report_to_json(const ReliabilityReport& report) {
  nlohmann::json j;
  j["method"] = to_string(report.method);
  j["k"] = report.k;
  j["value"] = report.value;
  j["n_items"] = report.n_items;
  if (report.dispersion) j["dispersion"] = *report.dispersion;
  if (report.seed) j["seed"] = *report.seed;
  if (report.draws) j["draws"] = *report.draws;
  if (report.bootstrap_iterations) j["B"] = *report.bootstrap_iterations;
  if (!report.warnings.empty()) j["warnings"] = report.warnings;
  return j;
}

ReliabilityReport report_from_json(const nlohmann::json& j) {
  ReliabilityReport report;
  report.method = method_from_string(j.at("method").get<std::string>());
  report.k = j.at("k").get<int>();
  report.value = j.at("value").get<double>();
  report.n_items = j.at("n_items").get<Eigen::Index>();
  if (j.contains("dispersion")) report.dispersion = j["dispersion"].get<double>();
  if (j.contains("seed")) report.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("draws")) report.draws = j["draws"].get<int>();
  if (j.contains("B")) report.bootstrap_iterations = j["B"].get<int>();
  if (j.contains("warnings")) report.warnings = j["warnings"].get<std::vector<std::string>>();
  return report;
}

nlohmann::json curve_row_to_json(const CurveRow& row) {
  nlohmann::json j;
  j["k"] = row.k;
  j["method"] = row.method;
  j["value"] = row.value;
  if (row.dispersion) j["dispersion"] = *row.dispersion;
  return j;
}

std::string curve_to_csv(const Curve& curve) {
  std::string out = "k,method,value,dispersion\n";
  char buf[64];
  const auto append_double = [&](double v) {
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
  };
  for (const auto& row : curve.rows) {
    out += std::to_string(row.k);
    out += ',';
    out += row.method;
    out += ',';
    append_double(row.value);
    out += ',';
    if (row.dispersion) append_double(*row.dispersion);
    out += '\n';
  }
  return out;
}

}  // namespace krr
