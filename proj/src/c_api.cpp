#include "chernoff_lab.h"

#include <cmath>
#include <cstring>
#include <string>

#include "chernoff/experiments.hpp"

namespace labx = chernoff::experiments;

struct chlab_config {
  labx::ExperimentConfig config;
};

struct chlab_report {
  labx::ConvergenceReport report;
};

namespace {

thread_local std::string g_last_error;

chlab_status status_for(const chernoff::Error& e) {
  switch (e.code()) {
    case chernoff::ErrorCode::ParseError:
    case chernoff::ErrorCode::ValidationError:
    case chernoff::ErrorCode::InvalidSchedule:
      return CHLAB_ERR_VALIDATION;
    default:
      return CHLAB_ERR_RUNTIME;
  }
}

template <typename Fn>
chlab_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const chernoff::Error& e) {
    g_last_error = e.what();
    return status_for(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CHLAB_ERR_RUNTIME;
  }
}

}  // namespace

extern "C" {

const char* chlab_last_error(void) { return g_last_error.c_str(); }

const char* chlab_version(void) { return labx::kLibraryVersion; }

int chlab_scenario_count(void) {
  return static_cast<int>(labx::all_scenarios().size());
}

const char* chlab_scenario_name(int index) {
  auto scenarios = labx::all_scenarios();
  if (index < 0 || index >= static_cast<int>(scenarios.size())) return nullptr;
  return labx::scenario_name(scenarios[static_cast<size_t>(index)]);
}

const char* chlab_scenario_description(int index) {
  auto scenarios = labx::all_scenarios();
  if (index < 0 || index >= static_cast<int>(scenarios.size())) return nullptr;
  return labx::scenario_description(scenarios[static_cast<size_t>(index)]);
}

chlab_status chlab_config_load(const char* path, chlab_config** out) {
  if (!path || !out) {
    g_last_error = "null argument";
    return CHLAB_ERR_VALIDATION;
  }
  return guarded([&] {
    *out = new chlab_config{labx::load_config(path)};
    return CHLAB_OK;
  });
}

chlab_status chlab_config_parse(const char* json_text, chlab_config** out) {
  if (!json_text || !out) {
    g_last_error = "null argument";
    return CHLAB_ERR_VALIDATION;
  }
  return guarded([&] {
    *out = new chlab_config{labx::parse_config_json(json_text)};
    return CHLAB_OK;
  });
}

void chlab_config_free(chlab_config* config) { delete config; }

const char* chlab_config_scenario(const chlab_config* config) {
  if (!config) return nullptr;
  return labx::scenario_name(config->config.scenario);
}

const char* chlab_config_output_path(const chlab_config* config) {
  if (!config) return nullptr;
  return config->config.output_path.c_str();
}

chlab_status chlab_run_scenario(const chlab_config* config, int workers,
                                chlab_report** out) {
  if (!config || !out) {
    g_last_error = "null argument";
    return CHLAB_ERR_VALIDATION;
  }
  return guarded([&] {
    auto report = labx::run_scenario(config->config, workers);
    bool violated = report.any_bound_violation;
    *out = new chlab_report{std::move(report)};
    return violated ? CHLAB_ERR_BOUND_VIOLATION : CHLAB_OK;
  });
}

chlab_status chlab_check_bounds(uint64_t seed, int trials, int workers,
                                chlab_report** out) {
  if (!out) {
    g_last_error = "null argument";
    return CHLAB_ERR_VALIDATION;
  }
  return guarded([&] {
    labx::ExperimentConfig config;
    config.scenario = labx::Scenario::BoundsSuite;
    config.seed = seed;
    config.trials = trials;
    auto report = labx::run_scenario(config, workers);
    bool violated = report.any_bound_violation;
    *out = new chlab_report{std::move(report)};
    if (violated) {
      g_last_error = "bound violation detected";
      return CHLAB_ERR_BOUND_VIOLATION;
    }
    return CHLAB_OK;
  });
}

void chlab_report_free(chlab_report* report) { delete report; }

size_t chlab_report_row_count(const chlab_report* report) {
  return report ? report->report.rows.size() : 0;
}

int chlab_report_any_bound_violation(const chlab_report* report) {
  return report && report->report.any_bound_violation ? 1 : 0;
}

int chlab_report_any_row_failed(const chlab_report* report) {
  return report && report->report.any_row_failed ? 1 : 0;
}

chlab_status chlab_report_row(const chlab_report* report, size_t index,
                              chlab_row* out) {
  if (!report || !out || index >= report->report.rows.size()) {
    g_last_error = "bad report row access";
    return CHLAB_ERR_VALIDATION;
  }
  const auto& row = report->report.rows[index];
  out->n = row.n;
  out->t_n = row.t_n;
  out->norm_error = row.norm_error;
  out->per_vector_max_error = row.per_vector_max_error;
  out->bound_value = row.bound_value ? *row.bound_value : std::nan("");
  out->wall_time_s = row.wall_time_s;
  out->failed = row.failed ? 1 : 0;
  return CHLAB_OK;
}

chlab_status chlab_report_write_csv(const chlab_report* report,
                                    const char* path) {
  if (!report || !path) {
    g_last_error = "null argument";
    return CHLAB_ERR_VALIDATION;
  }
  return guarded([&] {
    labx::emit_csv(report->report, path);
    return CHLAB_OK;
  });
}

chlab_status chlab_report_render_csv(const chlab_report* report, char** out) {
  if (!report || !out) {
    g_last_error = "null argument";
    return CHLAB_ERR_VALIDATION;
  }
  return guarded([&] {
    std::string csv = labx::render_csv(report->report);
    char* buffer = new char[csv.size() + 1];
    std::memcpy(buffer, csv.c_str(), csv.size() + 1);
    *out = buffer;
    return CHLAB_OK;
  });
}

void chlab_string_free(char* s) { delete[] s; }

}  // extern "C"
