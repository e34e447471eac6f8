// krr — reliability of crowdsourced annotation data at the right unit of
// analysis: inter-rater reliability for single ratings, k-rater reliability
// for aggregates.
//
// Subcommands: validate, irr, krr, kcurve, simulate. Reports go to stdout as
// JSON lines; curves as CSV. Exit codes: 0 ok, 1 analysis finding, 2
// usage/parse error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "krr/aggregate.hpp"
#include "krr/agreement.hpp"
#include "krr/errors.hpp"
#include "krr/icc.hpp"
#include "krr/ingestion.hpp"
#include "krr/krr_engine.hpp"
#include "krr/report_json.hpp"
#include "krr/simulator.hpp"
#include "krr/version.hpp"

namespace {

using nlohmann::json;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("KRR_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      krr::fail(krr::ErrorKind::ValueError, "KRR_SEED is not an integer");
    }
  }
  return 0;
}

// FNV-1a 64 over the file bytes, as a 16-digit hex string.
std::string hex_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) krr::fail(krr::ErrorKind::ParseError, "cannot open '" + path.string() + "'");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 14];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

struct CommonInput {
  std::vector<std::string> paths;
  std::string manifest_path;
  std::string scale = "interval";
  std::optional<std::string> replication;
};

krr::DatasetManifest resolve_manifest(const CommonInput& in) {
  if (!in.manifest_path.empty()) return krr::parse_manifest(in.manifest_path);
  krr::DatasetManifest m;
  m.scale = krr::scale_from_string(in.scale);
  return m;
}

// One table from either a wide file or a long file (single replication or
// --replication picked).
krr::RatingTable load_one(const CommonInput& in) {
  return krr::load_table(in.paths.at(0), resolve_manifest(in), in.replication);
}

// Two replications from two files or one long file holding exactly two.
std::pair<krr::RatingTable, krr::RatingTable> load_two(const CommonInput& in) {
  const auto manifest = resolve_manifest(in);
  if (in.paths.size() == 2) {
    krr::RatingTable a = krr::load_table(in.paths[0], manifest, {});
    krr::RatingTable b = krr::align_items(a, krr::load_table(in.paths[1], manifest, {}));
    return {std::move(a), std::move(b)};
  }
  if (krr::detect_shape(in.paths.at(0)) != krr::CsvShape::Long)
    krr::fail(krr::ErrorKind::BadReplicationCount,
              "a wide file holds one replication; pass two files");
  return krr::pair_replications(krr::parse_long_csv(in.paths.at(0), manifest));
}

struct RunRecord {
  std::string record_path;
  json doc;

  void open(const std::string& command, const std::vector<std::string>& argv_tail,
            const CommonInput& in) {
    if (record_path.empty()) return;
    doc["tool"] = "krr";
    doc["version"] = krr::kVersion;
    doc["command"] = command;
    doc["argv"] = argv_tail;
    for (const auto& p : in.paths)
      doc["inputs"].push_back({{"path", p}, {"digest", hex_digest(p)}});
    doc["reports"] = json::array();
  }
  void config(const json& cfg) {
    if (!record_path.empty()) doc["config"] = cfg;
  }
  void report(const json& r) {
    if (!record_path.empty()) doc["reports"].push_back(r);
  }
  void close() {
    if (record_path.empty()) return;
    std::ofstream out(record_path);
    if (!out) krr::fail(krr::ErrorKind::ParseError, "cannot write '" + record_path + "'");
    out << doc.dump(2) << '\n';
  }
};

void emit(const krr::ReliabilityReport& r, RunRecord& record) {
  const json j = krr::report_to_json(r);
  std::cout << j.dump() << '\n';
  record.report(j);
}

int run_validate(const CommonInput& in) {
  std::optional<krr::DatasetManifest> manifest;
  if (!in.manifest_path.empty()) manifest = krr::parse_manifest(in.manifest_path);
  const krr::ValidationSummary s =
      krr::validate_file(in.paths.at(0), manifest ? &*manifest : nullptr);
  std::cout << s.n_items << " items, " << s.k << " slots, " << s.missing_cells << " missing";
  if (s.items_with_missing > 0) std::cout << " (" << s.items_with_missing << " item(s) affected)";
  std::cout << '\n';
  if (s.replications.size() > 1) {
    std::cout << "replications:";
    for (const auto& rep : s.replications) std::cout << ' ' << rep;
    std::cout << '\n';
  }
  for (const auto& m : s.missing_by_item) {
    std::cout << "item '" << m.item_id << "'";
    if (!m.replication_id.empty()) std::cout << " in '" << m.replication_id << "'";
    std::cout << ": " << m.missing << " missing\n";
  }
  for (const auto& f : s.findings) {
    if (f.line > 0)
      std::cout << "line " << f.line << ": " << f.message << '\n';
    else
      std::cout << f.message << '\n';
  }
  return s.clean() ? 0 : 1;
}

int run_irr(const CommonInput& in, const std::string& coefficient,
            const std::optional<std::string>& metric_flag, RunRecord& record) {
  const krr::RatingTable table = load_one(in);
  krr::ReliabilityReport report;
  if (coefficient == "alpha") {
    const krr::DistanceMetric metric = metric_flag ? krr::metric_from_string(*metric_flag)
                                                   : krr::default_metric(table.scale());
    report = krr::krippendorff_alpha(table, metric);
  } else if (coefficient == "kappa") {
    report = krr::cohens_kappa(table);
  } else if (coefficient == "icc") {
    report = krr::icc_k(table, 1);
  } else {
    krr::fail(krr::ErrorKind::ValueError, "coefficient must be alpha, kappa, or icc");
  }
  record.config({{"coefficient", coefficient}});
  emit(report, record);
  return 0;
}

struct KrrFlags {
  std::string method;
  std::optional<int> k;
  std::string agg = "mean";
  std::string tie_break = "error";
  std::optional<std::string> coefficient;
  std::optional<std::string> metric;
  int draws = 30;
  int bootstrap_iterations = 100;
  int pilot_k = 2;
  std::optional<std::uint64_t> seed;
  // icc_mode defaults per command: "full" for point estimates, "subsample"
  // for curves (where ICC(1) is then unavailable, matching the column-draw
  // experiment).
  std::optional<std::string> icc_mode;
  std::string pairing = "independent";
};

krr::KrrConfig make_config(const KrrFlags& flags, const krr::RatingTable& table, int k) {
  krr::KrrConfig cfg;
  cfg.k = k;
  cfg.aggregation.kind = krr::aggregation_from_string(flags.agg);
  cfg.aggregation.tie_break = flags.tie_break == "lowest-label"
                                  ? krr::AggregationFn::TieBreak::LowestLabel
                                  : krr::AggregationFn::TieBreak::Error;
  if (flags.coefficient) {
    cfg.coefficient = krr::method_from_string(*flags.coefficient);
  } else {
    cfg.coefficient = krr::Method::Alpha;
  }
  if (flags.metric) {
    cfg.metric = krr::metric_from_string(*flags.metric);
  } else if (cfg.aggregation.kind == krr::AggregationFn::Kind::Majority) {
    cfg.metric = krr::default_metric(table.scale());
  } else {
    cfg.metric = krr::DistanceMetric::Interval;
  }
  cfg.draws = flags.draws;
  cfg.bootstrap_iterations = flags.bootstrap_iterations;
  cfg.seed = resolve_seed(flags.seed);
  cfg.pairing = flags.pairing == "consecutive" ? krr::BootstrapPairing::Consecutive
                                               : krr::BootstrapPairing::Independent;
  return cfg;
}

json config_json(const krr::KrrConfig& cfg, const KrrFlags& flags) {
  return {{"method", flags.method},
          {"k", cfg.k},
          {"agg", krr::to_string(cfg.aggregation.kind)},
          {"coefficient", krr::to_string(cfg.coefficient)},
          {"metric", krr::to_string(cfg.metric)},
          {"draws", cfg.draws},
          {"B", cfg.bootstrap_iterations},
          {"pilot_k", flags.pilot_k},
          {"seed", cfg.seed}};
}

int run_krr(const CommonInput& in, const KrrFlags& flags, RunRecord& record) {
  if (flags.method == "empirical") {
    const auto [rep_a, rep_b] = load_two(in);
    const int k = flags.k.value_or(static_cast<int>(std::min(rep_a.k(), rep_b.k())));
    const krr::KrrConfig cfg = make_config(flags, rep_a, k);
    record.config(config_json(cfg, flags));
    emit(krr::krr_empirical(rep_a, rep_b, cfg), record);
    return 0;
  }

  if (in.paths.size() != 1)
    krr::fail(krr::ErrorKind::BadReplicationCount,
              "method '" + flags.method + "' takes exactly one input file");
  const krr::RatingTable table = load_one(in);

  if (flags.method == "bootstrap") {
    const int k = flags.k.value_or(static_cast<int>(table.k()));
    const krr::KrrConfig cfg = make_config(flags, table, k);
    record.config(config_json(cfg, flags));
    emit(krr::krr_bootstrap(table, cfg), record);
    return 0;
  }
  if (flags.method == "icc") {
    const int k = flags.k.value_or(static_cast<int>(table.k()));
    const std::uint64_t seed = resolve_seed(flags.seed);
    const krr::IccMode mode = flags.icc_mode.value_or("full") == "subsample"
                                  ? krr::IccMode::Subsample
                                  : krr::IccMode::FullTable;
    record.config(config_json(make_config(flags, table, k), flags));
    emit(krr::icc_k(table, k, mode, seed), record);
    return 0;
  }
  if (flags.method == "sb") {
    const int k = flags.k.value_or(static_cast<int>(table.k()));
    const std::uint64_t seed = resolve_seed(flags.seed);
    const auto curve = krr::sb_curve(table, flags.pilot_k, k, seed);
    krr::ReliabilityReport report;
    report.method = krr::Method::Sb;
    report.k = k;
    report.value = curve.back().second;
    report.n_items = table.n();
    if (flags.pilot_k < table.k()) report.seed = seed;
    record.config(config_json(make_config(flags, table, k), flags));
    emit(report, record);
    return 0;
  }
  krr::fail(krr::ErrorKind::ValueError,
            "method must be empirical, bootstrap, icc, or sb");
}

int run_kcurve(const CommonInput& in, const KrrFlags& flags, int k_max_flag,
               const std::string& out_path, const std::string& format, RunRecord& record) {
  std::optional<krr::RatingTable> rep_a, rep_b;
  if (in.paths.size() == 2 ||
      (in.paths.size() == 1 && krr::detect_shape(in.paths[0]) == krr::CsvShape::Long &&
       krr::parse_long_csv(in.paths[0], resolve_manifest(in)).manifest.replications.size() == 2)) {
    auto [a, b] = load_two(in);
    rep_a = std::move(a);
    rep_b = std::move(b);
  } else {
    rep_a = load_one(in);
  }

  const int k_max = k_max_flag > 0 ? k_max_flag : static_cast<int>(rep_a->k());
  krr::KrrConfig cfg = make_config(flags, *rep_a, 1);
  krr::CurveOptions options;
  options.k_max = k_max;
  options.pilot_k = flags.pilot_k;
  options.icc_mode = flags.icc_mode.value_or("subsample") == "full" ? krr::IccMode::FullTable
                                                                    : krr::IccMode::Subsample;

  const krr::Curve curve = krr::k_curve(*rep_a, rep_b ? &*rep_b : nullptr, cfg, options);
  for (const auto& notice : curve.notices) std::cerr << "notice: " << notice << '\n';

  std::string payload;
  if (format == "csv") {
    payload = krr::curve_to_csv(curve);
  } else {
    for (const auto& row : curve.rows) payload += krr::curve_row_to_json(row).dump() + '\n';
  }
  if (out_path.empty() || out_path == "-") {
    std::cout << payload;
  } else {
    std::ofstream out(out_path);
    if (!out) krr::fail(krr::ErrorKind::ParseError, "cannot write '" + out_path + "'");
    out << payload;
  }
  record.config(config_json(cfg, flags));
  record.doc["curve_rows"] = curve.rows.size();
  return 0;
}

int run_simulate(double mu, double sigma2_phi, double sigma2_eps, long long n, int k,
                 std::optional<std::uint64_t> seed_flag, std::optional<double> clip_min,
                 std::optional<double> clip_max, std::optional<double> round_step,
                 const std::string& out_path) {
  krr::GeneratorParams params;
  params.mu = mu;
  params.sigma2_phi = sigma2_phi;
  params.sigma2_eps = sigma2_eps;
  params.n = static_cast<Eigen::Index>(n);
  params.k = k;
  params.seed = resolve_seed(seed_flag);
  if (clip_min.has_value() != clip_max.has_value())
    krr::fail(krr::ErrorKind::ValueError, "--clip-min and --clip-max go together");
  if (clip_min) params.value_clip = {{*clip_min, *clip_max}};
  params.round_step = round_step;

  const krr::RatingTable table = krr::generate(params);
  {
    std::ofstream out(out_path);
    if (!out) krr::fail(krr::ErrorKind::ParseError, "cannot write '" + out_path + "'");
    krr::write_wide_csv(table, out);
  }

  json truth;
  truth["mu"] = params.mu;
  truth["sigma2_phi"] = params.sigma2_phi;
  truth["sigma2_eps"] = params.sigma2_eps;
  truth["n"] = n;
  truth["k"] = k;
  truth["seed"] = params.seed;
  truth["true_icc"] = json::array();
  for (int kk = 1; kk <= k; ++kk)
    truth["true_icc"].push_back({{"k", kk}, {"value", krr::true_icc(params, kk)}});
  const std::string sidecar = out_path + ".truth.json";
  {
    std::ofstream out(sidecar);
    if (!out) krr::fail(krr::ErrorKind::ParseError, "cannot write '" + sidecar + "'");
    out << truth.dump(2) << '\n';
  }
  std::cout << json({{"command", "simulate"},
                     {"out", out_path},
                     {"truth", sidecar},
                     {"seed", params.seed}})
                   .dump()
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reliability of crowdsourced annotations: IRR and k-rater reliability"};
  app.set_version_flag("--version", krr::kVersion);
  app.require_subcommand(1);

  CommonInput in;
  RunRecord record;
  KrrFlags flags;

  const auto add_common = [&](CLI::App* cmd, std::size_t max_paths) {
    cmd->add_option("paths", in.paths, "input CSV file(s)")
        ->required()
        ->expected(1, static_cast<int>(max_paths));
    cmd->add_option("--manifest", in.manifest_path, "dataset manifest (key=value lines)");
    cmd->add_option("--scale", in.scale, "value scale when no manifest is given")
        ->check(CLI::IsMember({"nominal", "ordinal", "interval", "ratio"}));
    cmd->add_option("--replication", in.replication,
                    "replication id to pick from a multi-replication long file");
  };

  auto* validate = app.add_subcommand("validate", "check a dataset file and report its shape");
  add_common(validate, 1);

  auto* irr = app.add_subcommand("irr", "inter-rater reliability of single ratings");
  add_common(irr, 1);
  std::string irr_coefficient = "alpha";
  std::optional<std::string> irr_metric;
  irr->add_option("--coefficient", irr_coefficient, "alpha | kappa | icc")
      ->check(CLI::IsMember({"alpha", "kappa", "icc"}));
  irr->add_option("--metric", irr_metric, "alpha distance metric (defaults to the scale)")
      ->check(CLI::IsMember({"nominal", "ordinal", "interval", "ratio"}));
  irr->add_option("--record", record.record_path, "write a run record JSON file");

  auto* krr_cmd = app.add_subcommand("krr", "k-rater reliability of aggregate ratings");
  add_common(krr_cmd, 2);
  krr_cmd->add_option("--method", flags.method, "empirical | bootstrap | icc | sb")
      ->required()
      ->check(CLI::IsMember({"empirical", "bootstrap", "icc", "sb"}));
  krr_cmd->add_option("--k", flags.k, "redundancy to evaluate (default: full)");
  krr_cmd->add_option("--agg", flags.agg, "mean | median | majority")
      ->check(CLI::IsMember({"mean", "median", "majority"}));
  krr_cmd->add_option("--tie-break", flags.tie_break, "majority tie policy")
      ->check(CLI::IsMember({"error", "lowest-label"}));
  krr_cmd->add_option("--coefficient", flags.coefficient, "alpha | kappa");
  krr_cmd->add_option("--metric", flags.metric, "alpha distance metric");
  krr_cmd->add_option("--draws", flags.draws, "column-draw repetitions")
      ->check(CLI::PositiveNumber);
  krr_cmd->add_option("--B", flags.bootstrap_iterations, "bootstrap iterations")
      ->check(CLI::PositiveNumber);
  krr_cmd->add_option("--pilot-k", flags.pilot_k, "pilot ratings for the SB prophecy");
  krr_cmd->add_option("--seed", flags.seed, "RNG seed (overrides KRR_SEED)");
  krr_cmd->add_option("--icc-mode", flags.icc_mode, "full | subsample")
      ->check(CLI::IsMember({"full", "subsample"}));
  krr_cmd->add_option("--pairing", flags.pairing, "bootstrap pairing policy")
      ->check(CLI::IsMember({"independent", "consecutive"}));
  krr_cmd->add_option("--record", record.record_path, "write a run record JSON file");

  auto* kcurve = app.add_subcommand("kcurve", "reliability as a function of redundancy");
  add_common(kcurve, 2);
  int k_max = 0;
  std::string out_path;
  std::string format = "csv";
  kcurve->add_option("--k-max", k_max, "largest k to evaluate (default: full redundancy)");
  kcurve->add_option("--out", out_path, "output path ('-' for stdout)");
  kcurve->add_option("--format", format, "csv | jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
  kcurve->add_option("--agg", flags.agg, "mean | median | majority")
      ->check(CLI::IsMember({"mean", "median", "majority"}));
  kcurve->add_option("--tie-break", flags.tie_break, "majority tie policy")
      ->check(CLI::IsMember({"error", "lowest-label"}));
  kcurve->add_option("--coefficient", flags.coefficient, "alpha | kappa");
  kcurve->add_option("--metric", flags.metric, "alpha distance metric");
  kcurve->add_option("--draws", flags.draws, "column-draw repetitions")
      ->check(CLI::PositiveNumber);
  kcurve->add_option("--pilot-k", flags.pilot_k, "pilot ratings for the SB prophecy");
  kcurve->add_option("--seed", flags.seed, "RNG seed (overrides KRR_SEED)");
  kcurve->add_option("--icc-mode", flags.icc_mode, "full | subsample")
      ->check(CLI::IsMember({"full", "subsample"}));
  kcurve->add_option("--record", record.record_path, "write a run record JSON file");

  auto* simulate = app.add_subcommand("simulate", "draw a table from the one-way model");
  double mu = 0.0, sigma2_phi = 1.0, sigma2_eps = 1.0;
  long long sim_n = 0;
  int sim_k = 0;
  std::optional<std::uint64_t> sim_seed;
  std::optional<double> clip_min, clip_max, round_step;
  std::string sim_out;
  simulate->add_option("--mu", mu, "grand mean");
  simulate->add_option("--sigma2-phi", sigma2_phi, "item effect variance");
  simulate->add_option("--sigma2-eps", sigma2_eps, "noise variance");
  simulate->add_option("--n", sim_n, "items")->required();
  simulate->add_option("--k", sim_k, "ratings per item")->required();
  simulate->add_option("--seed", sim_seed, "RNG seed (overrides KRR_SEED)");
  simulate->add_option("--clip-min", clip_min, "clip lower bound");
  simulate->add_option("--clip-max", clip_max, "clip upper bound");
  simulate->add_option("--round-step", round_step, "round to multiples of this step");
  simulate->add_option("--out", sim_out, "wide CSV output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return 2;
  }

  try {
    int rc = 0;
    if (validate->parsed()) {
      rc = run_validate(in);
    } else {
      std::vector<std::string> argv_tail(argv + 1, argv + argc);
      if (irr->parsed()) {
        record.open("irr", argv_tail, in);
        rc = run_irr(in, irr_coefficient, irr_metric, record);
      } else if (krr_cmd->parsed()) {
        record.open("krr", argv_tail, in);
        rc = run_krr(in, flags, record);
      } else if (kcurve->parsed()) {
        record.open("kcurve", argv_tail, in);
        rc = run_kcurve(in, flags, k_max, out_path, format, record);
      } else if (simulate->parsed()) {
        rc = run_simulate(mu, sigma2_phi, sigma2_eps, sim_n, sim_k, sim_seed, clip_min,
                          clip_max, round_step, sim_out);
      }
      record.close();
    }
    return rc;
  } catch (const krr::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
