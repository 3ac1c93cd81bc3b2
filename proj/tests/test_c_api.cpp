#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include "chernoff_lab.h"

TEST_CASE("scenario listing is populated") {
  int count = chlab_scenario_count();
  CHECK(count == 8);
  bool found = false;
  for (int i = 0; i < count; ++i) {
    REQUIRE(chlab_scenario_name(i) != nullptr);
    REQUIRE(chlab_scenario_description(i) != nullptr);
    if (std::string(chlab_scenario_name(i)) == "example2-blocks") found = true;
  }
  CHECK(found);
  CHECK(chlab_scenario_name(count) == nullptr);
}

TEST_CASE("config parse and field access") {
  chlab_config* config = nullptr;
  REQUIRE(chlab_config_parse(R"({"scenario": "example2-blocks"})", &config) ==
          CHLAB_OK);
  CHECK(std::string(chlab_config_scenario(config)) == "example2-blocks");
  chlab_config_free(config);
}

TEST_CASE("invalid config reports a validation error with a message") {
  chlab_config* config = nullptr;
  CHECK(chlab_config_parse(R"({"scenario": "bogus"})", &config) ==
        CHLAB_ERR_VALIDATION);
  CHECK(std::strlen(chlab_last_error()) > 0);
}

TEST_CASE("run a small sweep through the C surface") {
  chlab_config* config = nullptr;
  REQUIRE(chlab_config_parse(
              R"({"scenario": "example2-blocks", "n_values": [16, 64]})",
              &config) == CHLAB_OK);
  chlab_report* report = nullptr;
  REQUIRE(chlab_run_scenario(config, 2, &report) == CHLAB_OK);
  REQUIRE(chlab_report_row_count(report) == 2);

  chlab_row row;
  REQUIRE(chlab_report_row(report, 0, &row) == CHLAB_OK);
  CHECK(row.n == 16);
  CHECK(row.norm_error > 0.0);
  CHECK(std::isnan(row.bound_value));  // no bound for this scenario
  CHECK(row.failed == 0);

  char* csv = nullptr;
  REQUIRE(chlab_report_render_csv(report, &csv) == CHLAB_OK);
  CHECK(std::string(csv).find("n,t_n,norm_error") != std::string::npos);
  chlab_string_free(csv);

  chlab_report_free(report);
  chlab_config_free(config);
}

TEST_CASE("bounds run through the C surface is violation free") {
  chlab_report* report = nullptr;
  REQUIRE(chlab_check_bounds(42, 10, 2, &report) == CHLAB_OK);
  CHECK(chlab_report_row_count(report) == 10);
  CHECK(chlab_report_any_bound_violation(report) == 0);
  chlab_report_free(report);
}

TEST_CASE("row access out of range is rejected") {
  chlab_report* report = nullptr;
  REQUIRE(chlab_check_bounds(1, 2, 1, &report) == CHLAB_OK);
  chlab_row row;
  CHECK(chlab_report_row(report, 99, &row) == CHLAB_ERR_VALIDATION);
  chlab_report_free(report);
}

TEST_CASE("version string is exposed") {
  CHECK(std::strlen(chlab_version()) > 0);
}
