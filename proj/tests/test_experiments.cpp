#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "chernoff/experiments.hpp"

using namespace chernoff;
namespace labx = chernoff::experiments;

namespace {

// Data rows with the wall-time column dropped (timing is the one
// nondeterministic field).
std::vector<std::string> data_rows_without_timing(const std::string& csv) {
  std::vector<std::string> rows;
  std::istringstream in(csv);
  std::string line;
  bool past_header = false;
  while (std::getline(in, line)) {
    if (line.rfind("#", 0) == 0) continue;
    if (!past_header) {
      past_header = true;  // header line
      continue;
    }
    auto cut = line.rfind(',');
    rows.push_back(line.substr(0, cut));
  }
  return rows;
}

}  // namespace

TEST_CASE("minimal config gets documented defaults") {
  auto c = labx::parse_config_json(R"({"scenario": "example2-blocks"})");
  CHECK(c.scenario == labx::Scenario::Example2Blocks);
  CHECK(c.dim == 2);
  CHECK(c.seed == 42);
  CHECK(c.t == 1.0);
  CHECK(c.n_values == std::vector<long>{16, 64, 256, 1024, 4096});
}

TEST_CASE("non-increasing n_values are rejected") {
  CHECK_THROWS_AS(
      labx::parse_config_json(R"({"scenario": "example2-blocks", "n_values": [64, 16]})"),
      Error);
}

TEST_CASE("unknown scenario names list the valid ones") {
  try {
    labx::parse_config_json(R"({"scenario": "no-such-thing"})");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find("example2-blocks") != std::string::npos);
  }
}

TEST_CASE("malformed JSON raises ParseError") {
  try {
    labx::parse_config_json("{not json");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
  }
}

TEST_CASE("oversized dimension is rejected") {
  CHECK_THROWS_AS(labx::parse_config_json(R"({"dim": 128})"), Error);
}

TEST_CASE("example2-blocks errors decrease and report is well formed") {
  labx::ExperimentConfig c;
  c.scenario = labx::Scenario::Example2Blocks;
  c.n_values = {16, 64, 256};
  auto report = labx::run_scenario(c, 2);
  REQUIRE(report.rows.size() == 3);
  CHECK_FALSE(report.any_row_failed);
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& row : report.rows) {
    CHECK(row.norm_error >= 0.0);
    CHECK(std::isfinite(row.norm_error));
    CHECK(row.per_vector_max_error <= row.norm_error + 1e-12);
    CHECK(row.norm_error < prev);
    prev = row.norm_error;
  }
}

TEST_CASE("example1-dft: the 4-term mean is an exact projector") {
  labx::ExperimentConfig c;
  c.scenario = labx::Scenario::Example1Dft;
  c.dim = 8;
  c.n_values = {16, 256};
  auto report = labx::run_scenario(c, 1);
  CHECK_FALSE(report.any_row_failed);
  CHECK(report.rows[1].norm_error < report.rows[0].norm_error);
}

TEST_CASE("bounds suite reports zero violations") {
  labx::ExperimentConfig c;
  c.scenario = labx::Scenario::BoundsSuite;
  c.trials = 25;
  auto report = labx::run_scenario(c, 4);
  CHECK(report.rows.size() == 25);
  CHECK_FALSE(report.any_bound_violation);
  CHECK_FALSE(report.any_row_failed);
}

TEST_CASE("csv: empty rows emit comments and header only") {
  labx::ConvergenceReport report;
  report.scenario = labx::Scenario::Example2Blocks;
  std::string csv = labx::render_csv(report);
  CHECK(csv.find("n,t_n,norm_error,per_vector_max_error,bound_value,"
                 "wall_time_s\n") != std::string::npos);
  CHECK(data_rows_without_timing(csv).empty());
}

TEST_CASE("csv rows round-trip through parsing") {
  labx::ConvergenceReport report;
  report.scenario = labx::Scenario::Custom;
  for (long n : {4L, 8L, 16L}) {
    labx::ReportRow row;
    row.n = n;
    row.t_n = 1.0 / n;
    row.norm_error = 0.125 / n;
    row.per_vector_max_error = 0.0625 / n;
    report.rows.push_back(row);
  }
  std::string csv = labx::render_csv(report);
  auto rows = data_rows_without_timing(csv);
  REQUIRE(rows.size() == 3);
  long n = 0;
  double tn = 0, err = 0, pv = 0;
  REQUIRE(std::sscanf(rows[1].c_str(), "%ld,%lf,%lf,%lf", &n, &tn, &err, &pv) ==
          4);
  CHECK(n == 8);
  CHECK(tn == doctest::Approx(0.125));
  CHECK(err == doctest::Approx(0.125 / 8));
}

TEST_CASE("absent bound value renders as an empty field, not zero") {
  labx::ConvergenceReport report;
  labx::ReportRow row;
  row.n = 2;
  report.rows.push_back(row);
  std::string csv = labx::render_csv(report);
  auto rows = data_rows_without_timing(csv);
  REQUIRE(rows.size() == 1);
  // last field before timing is bound_value; empty means trailing comma
  CHECK(rows[0].back() == ',');
}

TEST_CASE("determinism: identical configs give identical data rows") {
  labx::ExperimentConfig c;
  c.scenario = labx::Scenario::Example2Blocks;
  c.n_values = {16, 64};
  auto a = labx::run_scenario(c, 2);
  auto b = labx::run_scenario(c, 2);
  CHECK(data_rows_without_timing(labx::render_csv(a)) ==
        data_rows_without_timing(labx::render_csv(b)));
}

TEST_CASE("parallel equals serial") {
  labx::ExperimentConfig c;
  c.scenario = labx::Scenario::Decoupling;
  c.n_values = {16, 64, 256};
  auto serial = labx::run_scenario(c, 1);
  auto parallel = labx::run_scenario(c, 8);
  CHECK(data_rows_without_timing(labx::render_csv(serial)) ==
        data_rows_without_timing(labx::render_csv(parallel)));
}

TEST_CASE("emit_csv writes the rendered report") {
  labx::ExperimentConfig c;
  c.scenario = labx::Scenario::Example2Blocks;
  c.n_values = {4};
  auto report = labx::run_scenario(c, 1);
  std::string path = "test_report_tmp.csv";
  labx::emit_csv(report, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream buffer;
  buffer << in.rdbuf();
  CHECK(buffer.str() == labx::render_csv(report));
  std::remove(path.c_str());
}

TEST_CASE("worker count resolution prefers the explicit request") {
  CHECK(labx::resolve_worker_count(3) == 3);
  CHECK(labx::resolve_worker_count(0) >= 1);
}
