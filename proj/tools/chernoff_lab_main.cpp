// chernoff-lab: batch experiment front end. Talks to the core exclusively
// through the C API in chernoff_lab.h.

#include <cstdio>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "chernoff_lab.h"

namespace {

int exit_code_for(chlab_status status) {
  switch (status) {
    case CHLAB_OK: return 0;
    case CHLAB_ERR_VALIDATION: return 1;
    case CHLAB_ERR_RUNTIME: return 2;
    case CHLAB_ERR_BOUND_VIOLATION: return 3;
  }
  return 2;
}

void print_rows(const chlab_report* report) {
  size_t count = chlab_report_row_count(report);
  for (size_t i = 0; i < count; ++i) {
    chlab_row row;
    if (chlab_report_row(report, i, &row) != CHLAB_OK) continue;
    if (row.failed) {
      std::printf("  n=%-6ld  FAILED\n", row.n);
    } else {
      std::printf("  n=%-6ld  norm_error=%.6e  per_vector=%.6e\n", row.n,
                  row.norm_error, row.per_vector_max_error);
    }
  }
}

int cmd_run(const std::string& config_path, const std::string& output_dir,
            int workers, bool verbose) {
  chlab_config* config = nullptr;
  chlab_status status = chlab_config_load(config_path.c_str(), &config);
  if (status != CHLAB_OK) {
    std::fprintf(stderr, "error: %s\n", chlab_last_error());
    return exit_code_for(status);
  }

  chlab_report* report = nullptr;
  status = chlab_run_scenario(config, workers, &report);
  if (status != CHLAB_OK && report == nullptr) {
    std::fprintf(stderr, "error: %s\n", chlab_last_error());
    chlab_config_free(config);
    return exit_code_for(status);
  }

  std::string out_path;
  const char* configured = chlab_config_output_path(config);
  if (!output_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(output_dir, ec);
    if (ec) {
      std::fprintf(stderr, "error: cannot create %s: %s\n", output_dir.c_str(),
                   ec.message().c_str());
      chlab_report_free(report);
      chlab_config_free(config);
      return 2;
    }
    out_path = output_dir + "/" + chlab_config_scenario(config) + ".csv";
  } else if (configured && configured[0] != '\0') {
    out_path = configured;
  }
  if (!out_path.empty()) {
    chlab_status write_status = chlab_report_write_csv(report, out_path.c_str());
    if (write_status != CHLAB_OK) {
      std::fprintf(stderr, "error: %s\n", chlab_last_error());
      chlab_report_free(report);
      chlab_config_free(config);
      return exit_code_for(write_status);
    }
    std::printf("wrote %s\n", out_path.c_str());
  } else {
    char* csv = nullptr;
    if (chlab_report_render_csv(report, &csv) == CHLAB_OK) {
      std::fputs(csv, stdout);
      chlab_string_free(csv);
    }
  }

  if (verbose) {
    std::printf("scenario %s, %zu rows\n", chlab_config_scenario(config),
                chlab_report_row_count(report));
    print_rows(report);
  }
  int rc = exit_code_for(status);
  if (rc == 0 && chlab_report_any_row_failed(report)) rc = 2;
  chlab_report_free(report);
  chlab_config_free(config);
  return rc;
}

int cmd_scenarios() {
  int count = chlab_scenario_count();
  for (int i = 0; i < count; ++i) {
    std::printf("%-24s %s\n", chlab_scenario_name(i),
                chlab_scenario_description(i));
  }
  return 0;
}

int cmd_check_bounds(uint64_t seed, int trials, int workers) {
  chlab_report* report = nullptr;
  chlab_status status = chlab_check_bounds(seed, trials, workers, &report);
  if (report == nullptr) {
    std::fprintf(stderr, "error: %s\n", chlab_last_error());
    return exit_code_for(status);
  }
  size_t count = chlab_report_row_count(report);
  int violations = 0;
  for (size_t i = 0; i < count; ++i) {
    chlab_row row;
    if (chlab_report_row(report, i, &row) == CHLAB_OK && !row.failed &&
        row.bound_value < 0) {
      ++violations;
    }
  }
  std::printf("%zu trials, %d violations\n", count, violations);
  chlab_report_free(report);
  return exit_code_for(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chernoff-lab: product-formula convergence experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  int workers = 0;
  bool verbose = false;
  auto* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "JSON config file")->required();
  run->add_option("--output", output_dir, "output directory for the CSV");
  run->add_option("--workers", workers, "worker thread count (0 = auto)");
  run->add_flag("--verbose", verbose, "print per-row results");

  auto* scenarios =
      app.add_subcommand("scenarios", "list built-in scenarios");

  uint64_t seed = 42;
  int trials = 100;
  int bound_workers = 0;
  auto* check = app.add_subcommand("check-bounds", "run the bound sweeps");
  check->add_option("--seed", seed, "base seed");
  check->add_option("--trials", trials, "number of seeded trials");
  check->add_option("--workers", bound_workers, "worker thread count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (run->parsed()) return cmd_run(config_path, output_dir, workers, verbose);
  if (scenarios->parsed()) return cmd_scenarios();
  if (check->parsed()) return cmd_check_bounds(seed, trials, bound_workers);
  return 1;
}
