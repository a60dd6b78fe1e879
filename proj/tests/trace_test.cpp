#include <doctest.h>

#include "missreg/trace.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace missreg;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

TraceDoc sample_doc() {
  TraceDoc doc;
  doc.header = {"scenario: custom", "seed: 9"};
  doc.rows = {
      {"avsgd", 1, 0.5, 0.75, 100},
      {"avsgd", 2, 0.25, 0.5, 230},
      {"sgd_decay", 1, 0.6, 0.6, 90},
  };
  return doc;
}

}  // namespace

TEST_CASE("trace round trip preserves rows and header") {
  const std::string path = temp_path("trace_rt.csv");
  const TraceDoc doc = sample_doc();
  write_trace(path, doc);
  const TraceDoc r = read_trace(path);

  REQUIRE(r.header.size() == 2);
  CHECK(r.header[0] == "scenario: custom");
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[0].algorithm == "avsgd");
  CHECK(r.rows[0].k == 1);
  CHECK(r.rows[0].excess_at_avg == 0.5);
  CHECK(r.rows[0].excess_at_last == 0.75);
  CHECK(r.rows[0].wall_ns == 100);
  CHECK(r.rows[2].algorithm == "sgd_decay");

  // doubles survive exactly thanks to %.17g
  TraceDoc precise;
  precise.rows = {{"a", 1, 0.1, 1.0 / 3.0, 0}};
  write_trace(path, precise);
  const TraceDoc rp = read_trace(path);
  CHECK(rp.rows[0].excess_at_avg == 0.1);
  CHECK(rp.rows[0].excess_at_last == 1.0 / 3.0);
  std::remove(path.c_str());
}

TEST_CASE("trace validation") {
  TraceDoc doc = sample_doc();
  CHECK_NOTHROW(doc.validate());

  doc.rows[1].k = 1;  // duplicate k within one algorithm
  CHECK_THROWS_AS(doc.validate(), InvalidDataError);

  doc = sample_doc();
  doc.rows[0].k = 0;
  CHECK_THROWS_AS(doc.validate(), InvalidDataError);

  doc = sample_doc();
  doc.rows[0].algorithm.clear();
  CHECK_THROWS_AS(doc.validate(), InvalidDataError);

  doc = sample_doc();
  doc.rows[0].excess_at_avg = std::nan("");
  CHECK_THROWS_AS(doc.validate(), InvalidDataError);

  // interleaved algorithms are fine as long as each label increases
  doc = sample_doc();
  doc.rows.push_back({"sgd_decay", 2, 0.3, 0.3, 95});
  CHECK_NOTHROW(doc.validate());
}

TEST_CASE("trace reader rejects malformed files") {
  const std::string path = temp_path("trace_bad.csv");

  {
    std::ofstream out(path);
    out << "algorithm,k,excess\none,1,2\n";
  }
  CHECK_THROWS_AS(read_trace(path), InvalidDataError);

  {
    std::ofstream out(path);
    out << "algorithm,k,excess_at_avg,excess_at_last,wall_ns\navsgd,1,0.5\n";
  }
  CHECK_THROWS_AS(read_trace(path), InvalidDataError);

  {
    std::ofstream out(path);
    out << "algorithm,k,excess_at_avg,excess_at_last,wall_ns\navsgd,1,zebra,0.5,0\n";
  }
  CHECK_THROWS_AS(read_trace(path), InvalidDataError);

  {
    std::ofstream out(path);
    out << "# only a comment\n";
  }
  CHECK_THROWS_AS(read_trace(path), InvalidDataError);

  CHECK_THROWS_AS(read_trace(temp_path("trace_missing.csv")), InvalidDataError);
  std::remove(path.c_str());
}

TEST_CASE("log-log slope on exact power laws") {
  const std::vector<double> k = {1.0, 10.0, 100.0, 1000.0};
  std::vector<double> v(k.size());

  for (std::size_t i = 0; i < k.size(); ++i) v[i] = 7.0 / k[i];
  CHECK(loglog_slope(k, v) == doctest::Approx(-1.0).epsilon(1e-12));

  for (std::size_t i = 0; i < k.size(); ++i) v[i] = 2.0 / std::sqrt(k[i]);
  CHECK(loglog_slope(k, v) == doctest::Approx(-0.5).epsilon(1e-12));

  // nonpositive excess values are dropped, not fatal
  std::vector<double> with_floor = {7.0, 0.7, 0.0, 0.007};
  CHECK(loglog_slope(k, with_floor) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("log-log slope input validation") {
  const std::vector<double> k2 = {1.0, 10.0};
  const std::vector<double> zeros = {0.0, 0.0};
  CHECK_THROWS_AS(loglog_slope(k2, zeros), InvalidDataError);

  const std::vector<double> one_k = {1.0};
  const std::vector<double> one_v = {1.0};
  CHECK_THROWS_AS(loglog_slope(one_k, one_v), InvalidDataError);

  const std::vector<double> neg_k = {-1.0, 2.0};
  const std::vector<double> v2 = {1.0, 1.0};
  CHECK_THROWS_AS(loglog_slope(neg_k, v2), InvalidDataError);

  const std::vector<double> same_k = {5.0, 5.0};
  CHECK_THROWS_AS(loglog_slope(same_k, v2), InvalidDataError);

  const std::vector<double> v3 = {1.0, 1.0, 1.0};
  CHECK_THROWS_AS(loglog_slope(k2, v3), InvalidDataError);
}

TEST_CASE("summaries pool replications by algorithm and step") {
  TraceDoc a, b, c, d;
  a.rows = {{"avsgd", 1, 1.0, 2.0, 0}, {"avsgd", 2, 0.5, 1.0, 0}};
  b.rows = {{"avsgd", 1, 2.0, 3.0, 0}, {"avsgd", 2, 0.7, 1.4, 0}};
  c.rows = {{"avsgd", 1, 3.0, 4.0, 0}};
  d.rows = {{"avsgd", 1, 4.0, 5.0, 0}, {"sgd_decay", 1, 9.0, 9.0, 0}};
  const std::vector<TraceDoc> docs = {a, b, c, d};

  const std::vector<SummaryRow> rows = summarize_traces(docs);
  REQUIRE(rows.size() == 3);

  // first-appearance order: (avsgd,1), (avsgd,2), (sgd_decay,1)
  CHECK(rows[0].algorithm == "avsgd");
  CHECK(rows[0].k == 1);
  CHECK(rows[0].count == 4);
  // pooled values {1,2,3,4}: linear-interpolation quantiles
  CHECK(rows[0].at_avg.mean == 2.5);
  CHECK(rows[0].at_avg.q25 == 1.75);
  CHECK(rows[0].at_avg.median == 2.5);
  CHECK(rows[0].at_avg.q75 == 3.25);
  CHECK(rows[0].at_last.mean == 3.5);

  CHECK(rows[1].k == 2);
  CHECK(rows[1].count == 2);
  CHECK(rows[1].at_avg.mean == doctest::Approx(0.6).epsilon(1e-15));

  CHECK(rows[2].algorithm == "sgd_decay");
  CHECK(rows[2].count == 1);
  CHECK(rows[2].at_avg.median == 9.0);
}

TEST_CASE("summary files are NDJSON with one row per line") {
  TraceDoc a;
  a.rows = {{"avsgd", 1, 1.0, 2.0, 0}, {"avsgd", 2, 0.5, 1.0, 0}};
  const std::vector<TraceDoc> docs = {a};
  const std::vector<SummaryRow> rows = summarize_traces(docs);

  const std::string path = temp_path("trace_summary.ndjson");
  write_summary(path, rows);

  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    const nlohmann::json j = nlohmann::json::parse(line);
    CHECK(j["algorithm"] == "avsgd");
    CHECK(j["count"] == 1);
    CHECK(j["excess_at_avg"].contains("median"));
    CHECK(j["excess_at_last"].contains("q75"));
    ++n;
  }
  CHECK(n == 2);
  std::remove(path.c_str());
}
