// Drives the installed binary end to end. The harness passes the binary's
// location in KRR_CLI.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "krr/report_json.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string cli_path() {
  const char* env = std::getenv("KRR_CLI");
  REQUIRE_MESSAGE(env != nullptr, "KRR_CLI must point at the krr binary");
  return env;
}

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_raw(const std::string& command) {
  static int counter = 0;
  const fs::path out = fs::temp_directory_path() / ("krr_cli_out_" + std::to_string(++counter));
  const fs::path err = fs::temp_directory_path() / ("krr_cli_err_" + std::to_string(counter));
  const std::string cmd = command + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  fs::remove(out);
  fs::remove(err);
  return r;
}

RunResult run(const std::string& args) { return run_raw(cli_path() + " " + args); }

int count_newlines(const std::string& s) {
  return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("krr_cli_fixtures_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string first_line(const std::string& s) {
  return s.substr(0, s.find('\n'));
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("simulate then validate then analyze") {
    TempDir dir;
    const auto data = (dir.path / "sim.csv").string();
    const auto sim = run("simulate --n 80 --k 13 --sigma2-phi 1 --sigma2-eps 1 --seed 7 --out " +
                         data);
    REQUIRE(sim.code == 0);
    CHECK(fs::exists(data));
    CHECK(fs::exists(data + ".truth.json"));
    const json truth = json::parse(slurp(data + ".truth.json"));
    CHECK(truth["true_icc"][0]["value"] == 0.5);

    const auto val = run("validate " + data);
    CHECK(val.code == 0);
    CHECK(first_line(val.out) == "80 items, 13 slots, 0 missing");

    const auto irr = run("irr " + data + " --coefficient icc");
    CHECK(irr.code == 0);
    const json report = json::parse(first_line(irr.out));
    CHECK(report["method"] == "icc");
    CHECK(report["k"] == 1);
    CHECK(report["n_items"] == 80);

    // The library reader consumes the tool's own output.
    const auto parsed = krr::report_from_json(report);
    CHECK(krr::report_to_json(parsed).dump() == report.dump());
  }

  TEST_CASE("stochastic commands are byte-deterministic given a seed") {
    TempDir dir;
    const auto data = (dir.path / "sim.csv").string();
    REQUIRE(run("simulate --n 60 --k 8 --seed 3 --out " + data).code == 0);

    const auto a = run("krr " + data + " --method bootstrap --B 40 --seed 9");
    const auto b = run("krr " + data + " --method bootstrap --B 40 --seed 9");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());

    const auto c = run("krr " + data + " --method bootstrap --B 40 --seed 10");
    CHECK(c.out != a.out);

    // simulate twice: byte-identical files.
    const auto f1 = (dir.path / "a.csv").string();
    const auto f2 = (dir.path / "b.csv").string();
    REQUIRE(run("simulate --n 40 --k 5 --seed 21 --out " + f1).code == 0);
    REQUIRE(run("simulate --n 40 --k 5 --seed 21 --out " + f2).code == 0);
    CHECK(slurp(f1) == slurp(f2));
  }

  TEST_CASE("seed resolution: flag beats environment beats default") {
    TempDir dir;
    const auto data = (dir.path / "sim.csv").string();
    REQUIRE(run("simulate --n 50 --k 6 --seed 2 --out " + data).code == 0);

    const auto flagged = run("krr " + data + " --method bootstrap --B 20 --seed 5");
    const auto env_run =
        run_raw("KRR_SEED=5 " + cli_path() + " krr " + data + " --method bootstrap --B 20");
    CHECK(env_run.out == flagged.out);

    const auto env_beaten = run_raw("KRR_SEED=6 " + cli_path() + " krr " + data +
                                    " --method bootstrap --B 20 --seed 5");
    CHECK(env_beaten.out == flagged.out);

    const json report = json::parse(first_line(flagged.out));
    CHECK(report["seed"] == 5);
  }

  TEST_CASE("empirical needs two replications, bootstrap exactly one") {
    TempDir dir;
    const auto wide = (dir.path / "wide.csv").string();
    REQUIRE(run("simulate --n 30 --k 4 --seed 1 --out " + wide).code == 0);
    CHECK(run("krr " + wide + " --method empirical --k 2").code == 2);

    // A long file with two replications drives the empirical path.
    const auto lg = (dir.path / "pair.csv").string();
    {
      std::ofstream f(lg);
      f << "item_id,replication_id,slot,value\n";
      for (int i = 0; i < 25; ++i)
        for (int j = 0; j < 4; ++j) {
          f << "w" << i << ",repA,," << (i % 7) + 0.1 * j << "\n";
          f << "w" << i << ",repB,," << (i % 7) + 0.1 * (3 - j) << "\n";
        }
    }
    const auto emp = run("krr " + lg + " --method empirical --k 2 --draws 10 --seed 4");
    CHECK(emp.code == 0);
    const json report = json::parse(first_line(emp.out));
    CHECK(report["method"] == "krr_empirical");
    CHECK(report["k"] == 2);
    CHECK(report["draws"] == 10);
    CHECK(report.contains("dispersion"));

    CHECK(run("krr " + lg + " --method bootstrap").code == 2);  // two reps, needs one
  }

  TEST_CASE("kcurve emits plot-ready csv") {
    TempDir dir;
    const auto data = (dir.path / "sim.csv").string();
    REQUIRE(run("simulate --n 50 --k 5 --seed 11 --out " + data).code == 0);
    const auto curve = run("kcurve " + data + " --k-max 5 --seed 2 --draws 5");
    CHECK(curve.code == 0);
    CHECK(first_line(curve.out) == "k,method,value,dispersion");
    // icc appears for k=2..5 and sb for k=1..5 in subsample mode.
    CHECK(count_newlines(curve.out) == 10);  // header + 9 rows
    CHECK(curve.err.find("ICC(1) unavailable") != std::string::npos);

    const auto jsonl = run("kcurve " + data + " --k-max 3 --seed 2 --draws 5 --format jsonl");
    CHECK(jsonl.code == 0);
    CHECK(json::parse(first_line(jsonl.out)).contains("method"));

    const auto full = run("kcurve " + data + " --k-max 5 --seed 2 --draws 5 --icc-mode full");
    CHECK(full.out.find("1,icc,") != std::string::npos);
  }

  TEST_CASE("exit codes follow the contract") {
    TempDir dir;
    CHECK(run("validate /no/such/file.csv").code == 2);

    // One bad value: validation finding, exit 1.
    const auto bad = (dir.path / "bad.csv").string();
    {
      std::ofstream f(bad);
      f << "item_id,r1,r2\nw1,1,2\nw2,oops,3\n";
    }
    const auto val = run("validate " + bad);
    CHECK(val.code == 1);
    CHECK(val.out.find("line 3") != std::string::npos);

    // Degenerate data: analysis finding, exit 1.
    const auto constant = (dir.path / "const.csv").string();
    {
      std::ofstream f(constant);
      f << "item_id,r1,r2\nw1,3,3\nw2,3,3\n";
    }
    const auto alpha = run("irr " + constant + " --coefficient alpha");
    CHECK(alpha.code == 1);
    CHECK(alpha.err.find("DegenerateData") != std::string::npos);

    // Usage problems: exit 2.
    CHECK(run("irr " + constant + " --coefficient nonsense").code == 2);
    CHECK(run("krr " + constant + " --method icc --k 99").code == 2);
    CHECK(run("frobnicate").code != 0);
  }

  TEST_CASE("run records reproduce their reports") {
    TempDir dir;
    const auto data = (dir.path / "sim.csv").string();
    REQUIRE(run("simulate --n 40 --k 6 --seed 13 --out " + data).code == 0);

    const auto record_path = (dir.path / "record.json").string();
    const auto first =
        run("krr " + data + " --method bootstrap --B 30 --seed 8 --record " + record_path);
    REQUIRE(first.code == 0);
    const json record = json::parse(slurp(record_path));
    CHECK(record["version"].get<std::string>() == "0.1.0");
    CHECK(record["command"] == "krr");
    REQUIRE(record["reports"].size() == 1);

    // Re-running the recorded argv reproduces the report exactly.
    std::string argv;
    for (const auto& piece : record["argv"]) {
      const auto s = piece.get<std::string>();
      if (s.rfind("--record", 0) == 0 || s == record_path) continue;
      argv += s + " ";
    }
    const auto again = run(argv);
    CHECK(json::parse(first_line(again.out)) == record["reports"][0]);

    // Input digests pin the file contents.
    CHECK(record["inputs"][0]["digest"].get<std::string>().size() == 16);
  }

  TEST_CASE("nominal data drives alpha and kappa") {
    TempDir dir;
    const auto labels = (dir.path / "labels.csv").string();
    {
      std::ofstream f(labels);
      f << "item_id,r1,r2\n";
      f << "w1,pos,pos\nw2,pos,pos\nw3,neg,neg\nw4,neg,pos\nw5,neg,neg\n";
    }
    const auto alpha = run("irr " + labels + " --scale nominal");
    CHECK(alpha.code == 0);
    const json a = json::parse(first_line(alpha.out));
    CHECK(a["method"] == "alpha");

    const auto kappa = run("irr " + labels + " --scale nominal --coefficient kappa");
    CHECK(kappa.code == 0);
    const json kj = json::parse(first_line(kappa.out));
    CHECK(kj["method"] == "kappa");

    // Majority-vote kRR over a long two-replication nominal file.
    const auto lg = (dir.path / "votes.csv").string();
    {
      std::ofstream f(lg);
      f << "item_id,replication_id,slot,value\n";
      for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 3; ++j) {
          f << "w" << i << ",repA,," << (i % 2 ? "pos" : "neg") << "\n";
          f << "w" << i << ",repB,," << ((i + (j == 2)) % 2 ? "pos" : "neg") << "\n";
        }
    }
    const auto vote = run("krr " + lg + " --scale nominal --method empirical --k 3 " +
                          "--agg majority --coefficient kappa --seed 2");
    CHECK(vote.code == 0);
    const json vj = json::parse(first_line(vote.out));
    CHECK(vj["method"] == "krr_empirical");
  }

  TEST_CASE("empirical accepts two wide files") {
    TempDir dir;
    const auto a = (dir.path / "a.csv").string();
    const auto b = (dir.path / "b.csv").string();
    REQUIRE(run("simulate --n 40 --k 5 --seed 31 --out " + a).code == 0);
    REQUIRE(run("simulate --n 40 --k 5 --seed 32 --out " + b).code == 0);
    const auto emp = run("krr " + a + " " + b + " --method empirical --k 5");
    CHECK(emp.code == 0);
    const json report = json::parse(first_line(emp.out));
    CHECK(report["method"] == "krr_empirical");
    CHECK(report["draws"] == 1);  // full redundancy: deterministic path

    // Row order may differ between the files; items align by id.
    const auto reversed = (dir.path / "rev.csv").string();
    {
      std::ifstream in(a);
      std::string header, line;
      std::getline(in, header);
      std::vector<std::string> rows;
      while (std::getline(in, line)) rows.push_back(line);
      std::ofstream out(reversed);
      out << header << "\n";
      for (auto it = rows.rbegin(); it != rows.rend(); ++it) out << *it << "\n";
    }
    const auto self = run("krr " + a + " " + reversed + " --method empirical --k 5");
    CHECK(self.code == 0);
    CHECK(json::parse(first_line(self.out))["value"] == 1.0);
  }

  TEST_CASE("manifest declarations drive validation") {
    TempDir dir;
    const auto manifest = (dir.path / "manifest.txt").string();
    {
      std::ofstream f(manifest);
      f << "scale=interval\nmin=1\nmax=10\nk=3\n";
    }
    const auto data = (dir.path / "d.csv").string();
    {
      std::ofstream f(data);
      f << "item_id,r1,r2,r3\nw1,1,5,10\nw2,2,11,3\n";  // 11 breaks the range
    }
    const auto val = run("validate " + data + " --manifest " + manifest);
    CHECK(val.code == 1);
    CHECK(val.out.find("above declared maximum") != std::string::npos);

    const auto strict = run("irr " + data + " --manifest " + manifest + " --coefficient icc");
    CHECK(strict.code == 2);  // strict parse rejects the out-of-range value
  }

  TEST_CASE("--replication picks one table out of a long file") {
    TempDir dir;
    const auto lg = (dir.path / "two.csv").string();
    {
      std::ofstream f(lg);
      f << "item_id,replication_id,slot,value\n";
      for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 3; ++j) {
          f << "w" << i << ",repA,," << i + 0.1 * j << "\n";
          f << "w" << i << ",repB,," << 2 * i + 0.1 * j << "\n";
        }
    }
    CHECK(run("irr " + lg + " --coefficient icc").code == 2);  // ambiguous
    const auto picked = run("irr " + lg + " --replication repB --coefficient icc");
    CHECK(picked.code == 0);
    CHECK(json::parse(first_line(picked.out))["n_items"] == 10);
  }

  TEST_CASE("kcurve writes to a file") {
    TempDir dir;
    const auto data = (dir.path / "d.csv").string();
    REQUIRE(run("simulate --n 30 --k 4 --seed 3 --out " + data).code == 0);
    const auto out = (dir.path / "curve.csv").string();
    CHECK(run("kcurve " + data + " --k-max 4 --seed 1 --draws 4 --out " + out).code == 0);
    CHECK(first_line(slurp(out)) == "k,method,value,dispersion");
  }

  TEST_CASE("version flag") {
    const auto v = run("--version");
    CHECK(v.code == 0);
    CHECK(first_line(v.out) == "0.1.0");
  }
}
