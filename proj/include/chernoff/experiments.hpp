#ifndef CHERNOFF_EXPERIMENTS_HPP
#define CHERNOFF_EXPERIMENTS_HPP

#include <optional>
#include <string>
#include <vector>

#include "chernoff/products.hpp"

namespace chernoff::experiments {

inline constexpr const char* kLibraryVersion = "0.1.0";

enum class Scenario {
  Example1Dft,
  Example2Blocks,
  Example3TwoUnitaries,
  Decoupling,
  Cyclic,
  Zeno,
  BoundsSuite,
  Custom,
};

const char* scenario_name(Scenario s);
const char* scenario_description(Scenario s);
std::vector<Scenario> all_scenarios();
Scenario parse_scenario(const std::string& name);

struct Tolerances {
  double cesaro_tol = 1e-6;
  double truncation_tol = 1e-10;
  double cluster_tol = 1e-8;
};

struct ExperimentConfig {
  Scenario scenario = Scenario::Example2Blocks;
  int dim = 2;  // for example2-blocks this is d0, the per-block dimension
  std::uint64_t seed = 42;
  double t = 1.0;
  std::vector<long> n_values = {16, 64, 256, 1024, 4096};
  Tolerances tolerances;
  std::string output_path;
  int trials = 100;  // bounds-suite only
};

struct ReportRow {
  long n = 0;
  double t_n = 0.0;
  double norm_error = 0.0;
  double per_vector_max_error = 0.0;
  std::optional<double> bound_value;
  double wall_time_s = 0.0;
  bool failed = false;
  std::string failure_message;
};

struct ConvergenceReport {
  Scenario scenario = Scenario::Custom;
  int dim = 0;
  std::uint64_t seed = 0;
  double t = 0.0;
  std::string timestamp;
  std::string library_version = kLibraryVersion;
  std::vector<std::string> notes;
  std::vector<ReportRow> rows;

  bool any_bound_violation = false;
  bool any_row_failed = false;
};

/// Parses and validates a JSON config file; missing fields get documented
/// defaults.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_json(const std::string& json_text);

/// Runs a scenario's sweep; rows run in parallel across `workers` threads
/// (0 = hardware concurrency, overridable via CHERNOFF_LAB_WORKERS) with
/// deterministic output per seed regardless of worker count.
ConvergenceReport run_scenario(const ExperimentConfig& config, int workers = 0);

/// CSV with "#"-prefixed metadata comments, the pinned header line, and one
/// data row per entry in full double precision.
void emit_csv(const ConvergenceReport& report, const std::string& path);
std::string render_csv(const ConvergenceReport& report);

int resolve_worker_count(int requested);

}  // namespace chernoff::experiments

#endif
