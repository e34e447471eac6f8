#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "generators.hpp"
#include "krr/ingestion.hpp"

using krr::DatasetManifest;
using krr::RatingTable;
using krr::Scale;

namespace {

namespace fs = std::filesystem;

struct TempFile {
  fs::path path;
  explicit TempFile(const std::string& contents, const std::string& name = "data.csv") {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("krr_ingest_" + std::to_string(++counter) + "_" + name);
    std::ofstream out(path);
    out << contents;
  }
  ~TempFile() { fs::remove(path); }
};

DatasetManifest interval_manifest() {
  DatasetManifest m;
  m.scale = Scale::Interval;
  return m;
}

}  // namespace

TEST_SUITE("parse_long_csv") {
  TEST_CASE("direct parse of a well-formed row") {
    const TempFile f("item_id,replication_id,slot,value\nw1,repA,0,7.5\n");
    const auto dataset = krr::parse_long_csv(f.path, interval_manifest());
    REQUIRE(dataset.records.size() == 1);
    const auto& r = dataset.records[0];
    CHECK(r.item_id == "w1");
    CHECK(r.replication_id == "repA");
    CHECK(r.slot == 0);
    CHECK(r.value == 7.5);
    CHECK(r.line == 2);
    CHECK(dataset.manifest.replications == std::vector<std::string>{"repA"});
  }

  TEST_CASE("scale violation names the line") {
    const TempFile f("item_id,replication_id,slot,value\nw1,repA,0,high\n");
    CHECK_THROWS_WITH_AS(krr::parse_long_csv(f.path, interval_manifest()),
                         doctest::Contains("line 2"), krr::Error);
    try {
      krr::parse_long_csv(f.path, interval_manifest());
    } catch (const krr::Error& e) {
      CHECK(e.kind() == krr::ErrorKind::ValueError);
    }
  }

  TEST_CASE("header-only file parses to an empty list") {
    const TempFile f("item_id,replication_id,slot,value\n");
    CHECK(krr::parse_long_csv(f.path, interval_manifest()).records.empty());
  }

  TEST_CASE("structural problems are parse errors") {
    const TempFile wrong_header("item,rep,slot,value\nw1,repA,0,1\n");
    CHECK_THROWS_AS(krr::parse_long_csv(wrong_header.path, interval_manifest()), krr::Error);

    const TempFile short_row("item_id,replication_id,slot,value\nw1,repA,0\n");
    CHECK_THROWS_WITH_AS(krr::parse_long_csv(short_row.path, interval_manifest()),
                         doctest::Contains("ParseError"), krr::Error);

    const TempFile bad_slot("item_id,replication_id,slot,value\nw1,repA,-1,3\n");
    CHECK_THROWS_AS(krr::parse_long_csv(bad_slot.path, interval_manifest()), krr::Error);

    CHECK_THROWS_WITH_AS(krr::parse_long_csv("/nonexistent/file.csv", interval_manifest()),
                         doctest::Contains("ParseError"), krr::Error);
  }

  TEST_CASE("duplicate explicit cells are rejected") {
    const TempFile f(
        "item_id,replication_id,slot,value\nw1,repA,0,1\nw1,repA,0,2\n");
    CHECK_THROWS_WITH_AS(krr::parse_long_csv(f.path, interval_manifest()),
                         doctest::Contains("DuplicateCell"), krr::Error);
  }

  TEST_CASE("nominal labels against a declared alphabet") {
    DatasetManifest m;
    m.scale = Scale::Nominal;
    m.labels = {"neg", "pos"};
    const TempFile f("item_id,replication_id,slot,value\nw1,repA,,pos\nw2,repA,,neg\n");
    const auto dataset = krr::parse_long_csv(f.path, m);
    CHECK(dataset.records[0].value == 1.0);
    CHECK(dataset.records[1].value == 0.0);

    const TempFile bad("item_id,replication_id,slot,value\nw1,repA,,maybe\n");
    CHECK_THROWS_WITH_AS(krr::parse_long_csv(bad.path, m), doctest::Contains("ValueError"),
                         krr::Error);
  }

  TEST_CASE("nominal alphabet inferred sorted when undeclared") {
    DatasetManifest m;
    m.scale = Scale::Nominal;
    const TempFile f(
        "item_id,replication_id,slot,value\nw1,repA,,zebra\nw2,repA,,apple\nw3,repA,,zebra\n");
    const auto dataset = krr::parse_long_csv(f.path, m);
    CHECK(dataset.manifest.labels == std::vector<std::string>{"apple", "zebra"});
    CHECK(dataset.records[0].value == 1.0);
    CHECK(dataset.records[1].value == 0.0);
  }

  TEST_CASE("declared range is enforced") {
    DatasetManifest m = interval_manifest();
    m.min_value = 1;
    m.max_value = 10;
    const TempFile f("item_id,replication_id,slot,value\nw1,repA,,11\n");
    CHECK_THROWS_WITH_AS(krr::parse_long_csv(f.path, m), doctest::Contains("ValueError"),
                         krr::Error);
  }
}

TEST_SUITE("to_table") {
  TEST_CASE("complete rectangular data") {
    std::ostringstream src;
    src << "item_id,replication_id,slot,value\n";
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 3; ++j)
        src << "w" << i << ",repA,," << (i + 1) * 10 + j << "\n";
    const TempFile f(src.str());
    const auto dataset = krr::parse_long_csv(f.path, interval_manifest());
    const auto t = krr::to_table(dataset, "repA");
    CHECK(t.n() == 5);
    CHECK(t.k() == 3);
    CHECK(t.complete());
    CHECK(t.cell(2, 1) == 31.0);
    // Non-missing cells equal the record count.
    CHECK(t.n() * t.k() - t.missing_count() == 15);
  }

  TEST_CASE("ragged items get missing cells") {
    const TempFile f(
        "item_id,replication_id,slot,value\n"
        "w1,repA,,1\nw1,repA,,2\nw1,repA,,3\n"
        "w2,repA,,4\nw2,repA,,5\n");
    const auto dataset = krr::parse_long_csv(f.path, interval_manifest());
    const auto t = krr::to_table(dataset, "repA");
    CHECK(t.n() == 2);
    CHECK(t.k() == 3);
    CHECK(t.missing_count() == 1);
    CHECK(t.missing(1, 2));
  }

  TEST_CASE("explicit slots place cells") {
    const TempFile f(
        "item_id,replication_id,slot,value\n"
        "w1,repA,2,9\nw1,repA,0,7\n");
    const auto dataset = krr::parse_long_csv(f.path, interval_manifest());
    const auto t = krr::to_table(dataset, "repA");
    CHECK(t.k() == 3);
    CHECK(t.cell(0, 0) == 7.0);
    CHECK(t.missing(0, 1));
    CHECK(t.cell(0, 2) == 9.0);
  }

  TEST_CASE("deterministic and conserving") {
    gen::Rng rng(101);
    std::ostringstream src;
    src << "item_id,replication_id,slot,value\n";
    int records = 0;
    for (int i = 0; i < 12; ++i) {
      const int m = gen::uniform_int(rng, 1, 6);
      for (int j = 0; j < m; ++j, ++records)
        src << "w" << i << ",repA,," << gen::uniform_int(rng, 1, 9) << "\n";
    }
    const TempFile f(src.str());
    const auto dataset = krr::parse_long_csv(f.path, interval_manifest());
    const auto t1 = krr::to_table(dataset, "repA");
    const auto t2 = krr::to_table(dataset, "repA");
    CHECK(t1.item_ids() == t2.item_ids());
    CHECK(((t1.cells().array() == t2.cells().array()) ||
           (t1.cells().array().isNaN() && t2.cells().array().isNaN()))
              .all());
    CHECK(t1.n() * t1.k() - t1.missing_count() == records);
  }

  TEST_CASE("unknown replication is empty") {
    const TempFile f("item_id,replication_id,slot,value\nw1,repA,,1\n");
    const auto dataset = krr::parse_long_csv(f.path, interval_manifest());
    CHECK_THROWS_WITH_AS(krr::to_table(dataset, "repB"),
                         doctest::Contains("EmptyReplication"), krr::Error);
  }
}

TEST_SUITE("complete_case_filter") {
  TEST_CASE("already complete tables pass through") {
    gen::Rng rng(102);
    const auto t = gen::numeric_table(rng, 8, 4);
    const auto kept = krr::complete_case_filter(t, 4);
    CHECK(kept.item_ids() == t.item_ids());
    CHECK(kept.cells() == t.cells());
  }

  TEST_CASE("items below the threshold are dropped") {
    Eigen::MatrixXd cells(4, 3);
    cells << 1, 2, 3, 4, 5, RatingTable::missing_value(), 6, 7, 8, 9,
        RatingTable::missing_value(), RatingTable::missing_value();
    const RatingTable t({"a", "b", "c", "d"}, cells, Scale::Interval);

    const auto k3 = krr::complete_case_filter(t, 3);
    CHECK(k3.item_ids() == std::vector<std::string>{"a", "c"});
    CHECK(k3.complete());

    const auto k1 = krr::complete_case_filter(t, 1);
    CHECK(k1.n() == 4);
    CHECK(k1.k() == 1);
    CHECK(k1.complete());
    CHECK(k1.cell(3, 0) == 9.0);

    // Truncation keeps the first ratings in slot order.
    const auto k2 = krr::complete_case_filter(t, 2);
    CHECK(k2.n() == 3);
    CHECK(k2.cell(1, 0) == 4.0);
    CHECK(k2.cell(1, 1) == 5.0);
  }

  TEST_CASE("nothing survives") {
    Eigen::MatrixXd cells(1, 2);
    cells << 1, RatingTable::missing_value();
    const RatingTable t({"a"}, cells, Scale::Interval);
    CHECK_THROWS_WITH_AS(krr::complete_case_filter(t, 2),
                         doctest::Contains("EmptyReplication"), krr::Error);
    CHECK_THROWS_WITH_AS(krr::complete_case_filter(t, 3),
                         doctest::Contains("BadRedundancy"), krr::Error);
  }
}

TEST_SUITE("pair_replications") {
  TEST_CASE("two replications align by item order of the first") {
    const TempFile f(
        "item_id,replication_id,slot,value\n"
        "w1,repA,,1\nw2,repA,,2\n"
        "w2,repB,,20\nw1,repB,,10\n");
    const auto dataset = krr::parse_long_csv(f.path, interval_manifest());
    const auto [a, b] = krr::pair_replications(dataset);
    CHECK(a.item_ids() == b.item_ids());
    CHECK(a.item_ids() == std::vector<std::string>{"w1", "w2"});
    CHECK(b.cell(0, 0) == 10.0);
    CHECK(b.cell(1, 0) == 20.0);
  }

  TEST_CASE("item-set mismatch reports the symmetric difference") {
    const TempFile f(
        "item_id,replication_id,slot,value\n"
        "w1,repA,,1\nw2,repA,,2\n"
        "w1,repB,,10\nw3,repB,,30\n");
    const auto dataset = krr::parse_long_csv(f.path, interval_manifest());
    try {
      krr::pair_replications(dataset);
      FAIL("expected ReplicationMismatch");
    } catch (const krr::Error& e) {
      CHECK(e.kind() == krr::ErrorKind::ReplicationMismatch);
      const std::string msg = e.what();
      CHECK(msg.find("w2") != std::string::npos);
      CHECK(msg.find("w3") != std::string::npos);
    }
  }

  TEST_CASE("align_items reorders and rejects set differences") {
    gen::Rng rng(104);
    const auto a = gen::numeric_table(rng, 6, 3);
    std::vector<std::string> rev_ids(a.item_ids().rbegin(), a.item_ids().rend());
    Eigen::MatrixXd rev_cells = a.cells().colwise().reverse();
    const RatingTable reversed(rev_ids, rev_cells, a.scale());

    const auto aligned = krr::align_items(a, reversed);
    CHECK(aligned.item_ids() == a.item_ids());
    CHECK(aligned.cells() == a.cells());

    auto other_ids = a.item_ids();
    other_ids[2] = "stranger";
    const RatingTable other(other_ids, a.cells(), a.scale());
    CHECK_THROWS_WITH_AS(krr::align_items(a, other),
                         doctest::Contains("ReplicationMismatch"), krr::Error);
  }

  TEST_CASE("replication count must be exactly two") {
    const TempFile one("item_id,replication_id,slot,value\nw1,repA,,1\n");
    CHECK_THROWS_WITH_AS(
        krr::pair_replications(krr::parse_long_csv(one.path, interval_manifest())),
        doctest::Contains("BadReplicationCount"), krr::Error);

    const TempFile three(
        "item_id,replication_id,slot,value\nw1,repA,,1\nw1,repB,,2\nw1,repC,,3\n");
    CHECK_THROWS_WITH_AS(
        krr::pair_replications(krr::parse_long_csv(three.path, interval_manifest())),
        doctest::Contains("BadReplicationCount"), krr::Error);
  }
}

TEST_SUITE("round_trip") {
  TEST_CASE("parse, serialize, parse is the identity on records") {
    gen::Rng rng(103);
    for (int rep = 0; rep < 30; ++rep) {
      std::ostringstream src;
      src << "item_id,replication_id,slot,value\n";
      for (int i = 0; i < gen::uniform_int(rng, 1, 10); ++i) {
        const int m = gen::uniform_int(rng, 1, 5);
        for (int j = 0; j < m; ++j) {
          src << "w" << i << ",rep" << gen::uniform_int(rng, 0, 1) << ",";
          if (rng() % 2) src << j;
          src << "," << gen::uniform_real(rng, 0.0, 10.0) << "\n";
        }
      }
      const TempFile f(src.str());
      const auto first = krr::parse_long_csv(f.path, interval_manifest());

      std::ostringstream serialized;
      krr::write_long_csv(first, serialized);
      const TempFile g(serialized.str());
      const auto second = krr::parse_long_csv(g.path, interval_manifest());

      REQUIRE(second.records.size() == first.records.size());
      for (std::size_t i = 0; i < first.records.size(); ++i) {
        CHECK(second.records[i].item_id == first.records[i].item_id);
        CHECK(second.records[i].replication_id == first.records[i].replication_id);
        CHECK(second.records[i].slot == first.records[i].slot);
        CHECK(second.records[i].value == first.records[i].value);
      }
      CHECK(second.manifest.replications == first.manifest.replications);
    }
  }

  TEST_CASE("quoted fields survive") {
    krr::ParsedDataset dataset;
    dataset.manifest = interval_manifest();
    dataset.records.push_back({"pair, with comma", "rep \"A\"", std::nullopt, 3.5, "3.5", 2});
    std::ostringstream out;
    krr::write_long_csv(dataset, out);
    const TempFile f(out.str());
    const auto back = krr::parse_long_csv(f.path, interval_manifest());
    REQUIRE(back.records.size() == 1);
    CHECK(back.records[0].item_id == "pair, with comma");
    CHECK(back.records[0].replication_id == "rep \"A\"");
    CHECK(back.records[0].value == 3.5);
  }
}

TEST_SUITE("wide_csv") {
  TEST_CASE("parses shape and missing cells") {
    const TempFile f("item_id,r1,r2,r3\nw1,1,2,3\nw2,4,,6\n");
    const auto t = krr::parse_wide_csv(f.path, interval_manifest());
    CHECK(t.n() == 2);
    CHECK(t.k() == 3);
    CHECK(t.missing(1, 1));
    CHECK(t.cell(1, 2) == 6.0);
  }

  TEST_CASE("header must match the declared shape") {
    const TempFile f("item_id,x1,x2\nw1,1,2\n");
    CHECK_THROWS_AS(krr::parse_wide_csv(f.path, interval_manifest()), krr::Error);
  }

  TEST_CASE("load_table detects the shape") {
    const TempFile wide("item_id,r1,r2\nw1,1,2\n");
    CHECK(krr::load_table(wide.path, interval_manifest()).k() == 2);

    const TempFile lg("item_id,replication_id,slot,value\nw1,repA,,1\nw1,repB,,2\n");
    CHECK_THROWS_WITH_AS(krr::load_table(lg.path, interval_manifest()),
                         doctest::Contains("BadReplicationCount"), krr::Error);
    CHECK(krr::load_table(lg.path, interval_manifest(), "repB").cell(0, 0) == 2.0);
  }
}

TEST_SUITE("manifest") {
  TEST_CASE("key-value parse") {
    const TempFile f("# demo\nscale=interval\nmin=1\nmax=10\nk=13\n", "manifest.txt");
    const auto m = krr::parse_manifest(f.path);
    CHECK(m.scale == Scale::Interval);
    CHECK(m.min_value == 1.0);
    CHECK(m.max_value == 10.0);
    CHECK(m.k == 13);
  }

  TEST_CASE("rejects malformed declarations") {
    const TempFile no_scale("min=1\n", "manifest.txt");
    CHECK_THROWS_AS(krr::parse_manifest(no_scale.path), krr::Error);

    const TempFile bad_key("scale=interval\ncolor=blue\n", "manifest.txt");
    CHECK_THROWS_AS(krr::parse_manifest(bad_key.path), krr::Error);

    const TempFile inverted("scale=interval\nmin=5\nmax=1\n", "manifest.txt");
    CHECK_THROWS_AS(krr::parse_manifest(inverted.path), krr::Error);

    const TempFile labels_on_numeric("scale=ratio\nlabels=a,b\n", "manifest.txt");
    CHECK_THROWS_AS(krr::parse_manifest(labels_on_numeric.path), krr::Error);
  }
}

TEST_SUITE("validate_file") {
  TEST_CASE("clean rectangular file") {
    std::ostringstream src;
    src << "item_id,replication_id,slot,value\n";
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 4; ++j) src << "w" << i << ",repA,," << j + 1 << "\n";
    const TempFile f(src.str());
    const auto s = krr::validate_file(f.path, nullptr);
    CHECK(s.clean());
    CHECK(s.n_items == 7);
    CHECK(s.k == 4);
    CHECK(s.missing_cells == 0);
    CHECK(s.replications == std::vector<std::string>{"repA"});
  }

  TEST_CASE("bad value becomes a finding with its line") {
    const TempFile f("item_id,replication_id,slot,value\nw1,repA,,1\nw2,repA,,oops\n");
    const auto s = krr::validate_file(f.path, nullptr);
    CHECK_FALSE(s.clean());
    REQUIRE(s.findings.size() == 1);
    CHECK(s.findings[0].line == 3);
  }

  TEST_CASE("manifest mismatches are findings") {
    krr::DatasetManifest m = interval_manifest();
    m.k = 3;
    const TempFile f("item_id,replication_id,slot,value\nw1,repA,,1\nw1,repA,,2\n");
    const auto s = krr::validate_file(f.path, &m);
    CHECK_FALSE(s.clean());
    CHECK(s.missing_cells == 1);
  }

  TEST_CASE("declared replications must be present") {
    krr::DatasetManifest m = interval_manifest();
    m.replications = {"repA", "repB"};
    const TempFile f("item_id,replication_id,slot,value\nw1,repA,,1\n");
    const auto s = krr::validate_file(f.path, &m);
    CHECK_FALSE(s.clean());
    REQUIRE(s.findings.size() == 1);
    CHECK(s.findings[0].message.find("repB") != std::string::npos);
  }

  TEST_CASE("wide files validate too") {
    const TempFile f("item_id,r1,r2\nw1,1,\nw2,3,4\n");
    const auto s = krr::validate_file(f.path, nullptr);
    CHECK(s.clean());
    CHECK(s.shape == krr::CsvShape::Wide);
    CHECK(s.n_items == 2);
    CHECK(s.missing_cells == 1);
    CHECK(s.items_with_missing == 1);
  }

  TEST_CASE("structural damage still throws") {
    const TempFile f("item_id,replication_id,slot,value\nw1,repA,1\n");
    CHECK_THROWS_AS(krr::validate_file(f.path, nullptr), krr::Error);
  }
}
