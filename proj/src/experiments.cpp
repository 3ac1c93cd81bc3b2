#include "chernoff/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <limits>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <future>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace chernoff::experiments {

using linalg::Complex;
using linalg::Matrix;
using linalg::Vector;
using linalg::expm;
using linalg::spectral_norm;
using semigroup::OneParameterFamily;
using superop::ContractionMap;
using superop::ErgodicProjector;

const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::Example1Dft: return "example1-dft";
    case Scenario::Example2Blocks: return "example2-blocks";
    case Scenario::Example3TwoUnitaries: return "example3-two-unitaries";
    case Scenario::Decoupling: return "decoupling";
    case Scenario::Cyclic: return "cyclic";
    case Scenario::Zeno: return "zeno";
    case Scenario::BoundsSuite: return "bounds-suite";
    case Scenario::Custom: return "custom";
  }
  return "unknown";
}

const char* scenario_description(Scenario s) {
  switch (s) {
    case Scenario::Example1Dft:
      return "conjugation by the discrete Fourier matrix (F^4 = 1); the "
             "4-term mean is an exact ergodic projector";
    case Scenario::Example2Blocks:
      return "block-mixing semigroup on B + B with the block sign-flip map; "
             "limit generator blockdiag((x1+x2)/2, (x1+x2)/2)";
    case Scenario::Example3TwoUnitaries:
      return "two-unitary pulse product; corrected variant converges to "
             "exp(t/2 P(u1 x u1* + u x u*))";
    case Scenario::Decoupling:
      return "dynamical decoupling product (u e^{(t/n)x})^n (u*)^n vs the "
             "pinched generator";
    case Scenario::Cyclic:
      return "cyclic pulse product (u1 e^{(t/n)x} ... uk e^{(t/n)x})^{n/k} "
             "with u1...uk = 1";
    case Scenario::Zeno:
      return "repeated-projection product (p e^{(t/n)x})^n vs exp(t p x p) p; "
             "the map p.p is not unital, outside the convergence theorem";
    case Scenario::BoundsSuite:
      return "seeded sweeps of the sqrt(n) contraction bound, the O(1/n) "
             "product bound, and the telescoping difference bound";
    case Scenario::Custom:
      return "generic pair: random unitary conjugation with a random "
             "contraction-semigroup flow";
  }
  return "";
}

std::vector<Scenario> all_scenarios() {
  return {Scenario::Example1Dft,  Scenario::Example2Blocks,
          Scenario::Example3TwoUnitaries, Scenario::Decoupling,
          Scenario::Cyclic,       Scenario::Zeno,
          Scenario::BoundsSuite,  Scenario::Custom};
}

Scenario parse_scenario(const std::string& name) {
  for (Scenario s : all_scenarios()) {
    if (name == scenario_name(s)) return s;
  }
  std::string valid;
  for (Scenario s : all_scenarios()) {
    if (!valid.empty()) valid += ", ";
    valid += scenario_name(s);
  }
  throw Error(ErrorCode::ParseError,
              "unknown scenario '" + name + "' (valid: " + valid + ")");
}

namespace {

int default_dim(Scenario s) {
  switch (s) {
    case Scenario::Example1Dft: return 8;
    case Scenario::Example3TwoUnitaries: return 3;
    case Scenario::Cyclic: return 4;
    case Scenario::Zeno: return 4;
    default: return 2;
  }
}

void validate_config(const ExperimentConfig& c) {
  if (c.dim < 1 || c.dim > 64) {
    throw Error(ErrorCode::ValidationError, "dim must be in [1, 64]");
  }
  if (c.scenario != Scenario::BoundsSuite) {
    if (c.n_values.empty()) {
      throw Error(ErrorCode::ValidationError, "n_values must be nonempty");
    }
    for (size_t i = 1; i < c.n_values.size(); ++i) {
      if (c.n_values[i] <= c.n_values[i - 1]) {
        throw Error(ErrorCode::ValidationError,
                    "n_values must be strictly increasing");
      }
    }
    if (c.n_values.front() < 1) {
      throw Error(ErrorCode::ValidationError, "n_values must be >= 1");
    }
  }
  if (!(c.t > 0) || !std::isfinite(c.t)) {
    throw Error(ErrorCode::ValidationError, "t must be positive and finite");
  }
  if (c.tolerances.cesaro_tol <= 0 || c.tolerances.truncation_tol <= 0 ||
      c.tolerances.cluster_tol <= 0) {
    throw Error(ErrorCode::ValidationError, "tolerances must be positive");
  }
  if (c.trials < 1) {
    throw Error(ErrorCode::ValidationError, "trials must be >= 1");
  }
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  ExperimentConfig c;
  try {
    if (j.contains("scenario")) {
      c.scenario = parse_scenario(j.at("scenario").get<std::string>());
    }
    c.dim = j.value("dim", default_dim(c.scenario));
    c.seed = j.value("seed", std::uint64_t{42});
    c.t = j.value("t", 1.0);
    if (j.contains("n_values")) {
      c.n_values = j.at("n_values").get<std::vector<long>>();
    }
    if (j.contains("tolerances")) {
      const auto& tol = j.at("tolerances");
      c.tolerances.cesaro_tol = tol.value("cesaro_tol", c.tolerances.cesaro_tol);
      c.tolerances.truncation_tol =
          tol.value("truncation_tol", c.tolerances.truncation_tol);
      c.tolerances.cluster_tol =
          tol.value("cluster_tol", c.tolerances.cluster_tol);
    }
    c.output_path = j.value("output_path", std::string{});
    c.trials = j.value("trials", 100);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  validate_config(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_json(buffer.str());
}

int resolve_worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CHERNOFF_LAB_WORKERS")) {
    int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

Matrix dft_matrix(int d) {
  Matrix f(d, d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) {
      double angle = -2.0 * M_PI * j * k / static_cast<double>(d);
      f(j, k) = scale * Complex(std::cos(angle), std::sin(angle));
    }
  }
  return f;
}

// A convergence scenario: how to evaluate the product at each n, and the
// limit it is compared against.
struct SweepSetup {
  std::function<Matrix(long)> product;
  Matrix limit;
  int full_dim = 0;
  std::vector<std::string> notes;
};

SweepSetup build_sweep(const ExperimentConfig& c) {
  SweepSetup s;
  switch (c.scenario) {
    case Scenario::Example1Dft: {
      int d = c.dim;
      Matrix f = dft_matrix(d);
      auto pi = ContractionMap::unitary_conjugation(f);
      Matrix x = linalg::random_contraction_generator(d, c.seed);
      auto v = OneParameterFamily::exp_family(x);
      // F^4 = 1, so the 4-term mean is the exact ergodic projector.
      Matrix a = Matrix::Zero(d, d);
      for (int k = 1; k <= 4; ++k) a += pi.iterate(x, k);
      a /= 4.0;
      s.limit = expm(a, c.t);
      s.full_dim = d;
      s.product = [pi, v, t = c.t](long n) {
        return products::iterated_product(pi, v, t, n);
      };
      s.notes.push_back(
          "discrete Fourier analog; the continuous L^2(R) statement "
          "P(V_t) = 1 does not hold here and is not asserted");
      break;
    }
    case Scenario::Example2Blocks: {
      int d0 = c.dim;
      Matrix x1 = linalg::random_contraction_generator(d0, c.seed);
      Matrix x2 = linalg::random_contraction_generator(d0, c.seed + 1);
      auto v = OneParameterFamily::block_mix(x1, x2);
      auto pi = ContractionMap::block_sign_flip(d0);
      Matrix mean = 0.5 * (x1 + x2);
      Matrix a = Matrix::Zero(2 * d0, 2 * d0);
      a.topLeftCorner(d0, d0) = mean;
      a.bottomRightCorner(d0, d0) = mean;
      s.limit = expm(a, c.t);
      s.full_dim = 2 * d0;
      s.product = [pi, v, t = c.t](long n) {
        return products::iterated_product(pi, v, t, n);
      };
      break;
    }
    case Scenario::Example3TwoUnitaries: {
      int d = c.dim;
      Matrix u1 = linalg::random_unitary(d, c.seed);
      Matrix u2 = linalg::random_unitary(d, c.seed + 1);
      Matrix x = linalg::random_contraction_generator(d, c.seed + 2);
      Matrix u = u1 * u2;
      auto p = superop::exact_pinching_projector(u, c.tolerances.cluster_tol);
      Matrix a =
          0.5 * p.apply(u1 * x * u1.adjoint() + u * x * u.adjoint());
      s.limit = expm(a, c.t);
      s.full_dim = d;
      s.product = [u1, u2, x, t = c.t](long n) {
        return products::two_unitary_product(u1, u2, x, t, n).corrected;
      };
      break;
    }
    case Scenario::Decoupling: {
      int d = c.dim;
      Matrix u = linalg::random_unitary(d, c.seed);
      Matrix x = linalg::random_contraction_generator(d, c.seed + 1);
      auto p = superop::exact_pinching_projector(u, c.tolerances.cluster_tol);
      s.limit = expm(p.apply(x), c.t);
      s.full_dim = d;
      s.product = [u, x, t = c.t](long n) {
        return products::decoupling_product(u, x, t, n);
      };
      break;
    }
    case Scenario::Cyclic: {
      int d = c.dim;
      Matrix f = dft_matrix(d);
      std::vector<Matrix> us(4, f);  // F^4 = 1, so the cycle closes
      Matrix x = linalg::random_contraction_generator(d, c.seed);
      auto pi = ContractionMap::unitary_conjugation(f);
      Matrix a = Matrix::Zero(d, d);
      for (int k = 1; k <= 4; ++k) a += pi.iterate(x, k);
      a /= 4.0;
      s.limit = expm(a, c.t);
      s.full_dim = d;
      s.product = [us, x, t = c.t](long n) {
        return products::cyclic_product(us, x, t, n);
      };
      break;
    }
    case Scenario::Zeno: {
      int d = c.dim;
      int rank = std::max(1, d / 2);
      Matrix q = linalg::random_unitary(d, c.seed);
      Matrix p = Matrix::Zero(d, d);
      for (int j = 0; j < rank; ++j) p += q.col(j) * q.col(j).adjoint();
      Matrix x = linalg::random_contraction_generator(d, c.seed + 1);
      s.limit = expm(p * x * p, c.t) * p;
      s.full_dim = d;
      s.product = [p, x, t = c.t](long n) {
        return products::zeno_product(p, x, t, n);
      };
      s.notes.push_back(
          "the compression map x -> p x p is not unital; this scenario sits "
          "outside the convergence theorem's hypothesis and is demonstrative");
      break;
    }
    case Scenario::Custom: {
      int d = c.dim;
      Matrix u = linalg::random_unitary(d, c.seed);
      auto pi = ContractionMap::unitary_conjugation(u);
      Matrix x = linalg::random_contraction_generator(d, c.seed + 1);
      auto v = OneParameterFamily::exp_family(x);
      auto p = superop::exact_pinching_projector(u, c.tolerances.cluster_tol);
      s.limit = expm(p.apply(x), c.t);
      s.full_dim = d;
      s.product = [pi, v, t = c.t](long n) {
        return products::iterated_product(pi, v, t, n);
      };
      break;
    }
    case Scenario::BoundsSuite:
      throw Error(ErrorCode::ValidationError,
                  "bounds-suite has no convergence sweep");
  }
  return s;
}

double per_vector_error(const Matrix& diff, std::uint64_t seed) {
  double worst = 0.0;
  for (int j = 0; j < 10; ++j) {
    Vector v = linalg::random_unit_vector(static_cast<int>(diff.rows()),
                                          seed + 1000 + j);
    worst = std::max(worst, (diff * v).norm());
  }
  return worst;
}

ConvergenceReport run_bounds_suite(const ExperimentConfig& c, int workers) {
  ConvergenceReport report;
  report.scenario = c.scenario;
  report.dim = c.dim;
  report.seed = c.seed;
  report.t = c.t;
  report.timestamp = utc_timestamp();
  report.notes.push_back(
      "per trial: norm_error is the largest lhs across the three bound "
      "checks, bound_value the smallest remaining margin (rhs+slack-lhs)");

  auto run_trial = [&](long trial) {
    ReportRow row;
    row.n = trial;
    row.t_n = c.t;
    auto begin = std::chrono::steady_clock::now();
    try {
      std::uint64_t s = c.seed + 7919 * static_cast<std::uint64_t>(trial);
      double max_lhs = 0.0;
      double min_margin = std::numeric_limits<double>::infinity();

      // sqrt(n) contraction bound
      {
        int d = 2 + static_cast<int>(s % 7);  // 2..8
        Matrix contraction = linalg::random_contraction(d, s);
        Vector v = linalg::random_unit_vector(d, s + 1);
        long n = 1 + static_cast<long>((s >> 8) % 64);
        auto pair = products::chernoff_bound_check(contraction, v, n);
        max_lhs = std::max(max_lhs, pair.lhs);
        min_margin = std::min(min_margin, pair.rhs + 1e-9 - pair.lhs);
      }
      // O(1/n) product bound
      {
        bool flip = (trial % 2 == 0);
        ContractionMap pi =
            flip ? ContractionMap::block_sign_flip(2)
                 : ContractionMap::unitary_conjugation(
                       linalg::random_unitary(3, s + 2));
        int d = pi.dim();
        Matrix w = linalg::random_contraction(d, s + 3);
        Matrix x = w - Matrix::Identity(d, d);
        long n = (trial % 3 == 0) ? 4 : (trial % 3 == 1 ? 16 : 64);
        auto res = products::product_bound_check(pi, x, c.t, n,
                                                c.tolerances.truncation_tol);
        double slack = 10.0 * res.decomposition_residual;
        max_lhs = std::max(max_lhs, res.lhs);
        min_margin = std::min(min_margin, res.bound + slack - res.lhs);
      }
      // telescoping bound
      {
        ContractionMap pi = ContractionMap::unitary_conjugation(
            linalg::random_unitary(3, s + 4));
        Matrix w1 = linalg::random_contraction(3, s + 5);
        Matrix w2 = linalg::random_contraction(3, s + 6);
        Matrix x1 = w1 - Matrix::Identity(3, 3);
        Matrix x2 = 0.5 * (w1 + w2) - Matrix::Identity(3, 3);
        auto pair = products::telescoping_diff_check(pi, x1, x2, c.t, 16);
        max_lhs = std::max(max_lhs, pair.lhs);
        min_margin = std::min(min_margin, pair.rhs + 1e-9 - pair.lhs);
      }

      row.norm_error = max_lhs;
      row.bound_value = min_margin;
    } catch (const std::exception& e) {
      row.failed = true;
      row.failure_message = e.what();
    }
    row.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - begin)
            .count();
    return row;
  };

  std::vector<ReportRow> rows(static_cast<size_t>(c.trials));
  int nworkers = resolve_worker_count(workers);
  std::atomic<long> next{0};
  auto worker = [&]() {
    long i;
    while ((i = next.fetch_add(1)) < c.trials) {
      rows[static_cast<size_t>(i)] = run_trial(i + 1);
    }
  };
  std::vector<std::thread> threads;
  for (int w = 0; w < nworkers; ++w) threads.emplace_back(worker);
  for (auto& th : threads) th.join();

  for (auto& row : rows) {
    if (row.failed) report.any_row_failed = true;
    if (row.bound_value && *row.bound_value < 0) {
      report.any_bound_violation = true;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace

ConvergenceReport run_scenario(const ExperimentConfig& config, int workers) {
  validate_config(config);
  if (config.scenario == Scenario::BoundsSuite) {
    return run_bounds_suite(config, workers);
  }
  SweepSetup setup = build_sweep(config);

  ConvergenceReport report;
  report.scenario = config.scenario;
  report.dim = config.dim;
  report.seed = config.seed;
  report.t = config.t;
  report.timestamp = utc_timestamp();
  report.notes = setup.notes;

  std::vector<ReportRow> rows(config.n_values.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    size_t i;
    while ((i = next.fetch_add(1)) < config.n_values.size()) {
      long n = config.n_values[i];
      ReportRow row;
      row.n = n;
      row.t_n = config.t / static_cast<double>(n);
      auto begin = std::chrono::steady_clock::now();
      try {
        Matrix product = setup.product(n);
        Matrix diff = product - setup.limit;
        row.norm_error = spectral_norm(diff);
        row.per_vector_max_error = per_vector_error(diff, config.seed);
      } catch (const std::exception& e) {
        row.failed = true;
        row.failure_message = e.what();
      }
      row.wall_time_s = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - begin)
                            .count();
      rows[i] = std::move(row);
    }
  };
  int nworkers = resolve_worker_count(workers);
  std::vector<std::thread> threads;
  for (int w = 0; w < nworkers; ++w) threads.emplace_back(worker);
  for (auto& th : threads) th.join();

  for (auto& row : rows) {
    if (row.failed) report.any_row_failed = true;
    report.rows.push_back(std::move(row));
  }
  std::sort(report.rows.begin(), report.rows.end(),
            [](const ReportRow& a, const ReportRow& b) { return a.n < b.n; });
  return report;
}

std::string render_csv(const ConvergenceReport& report) {
  std::string out;
  char buf[512];
  auto comment = [&](const std::string& line) {
    out += "# " + line + "\n";
  };
  comment(std::string("scenario: ") + scenario_name(report.scenario));
  std::snprintf(buf, sizeof(buf), "dim: %d", report.dim);
  comment(buf);
  std::snprintf(buf, sizeof(buf), "seed: %llu",
                static_cast<unsigned long long>(report.seed));
  comment(buf);
  std::snprintf(buf, sizeof(buf), "t: %.17g", report.t);
  comment(buf);
  comment("timestamp: " + report.timestamp);
  comment("library_version: " + report.library_version);
  for (const auto& note : report.notes) comment("note: " + note);
  out += "n,t_n,norm_error,per_vector_max_error,bound_value,wall_time_s\n";
  for (const auto& row : report.rows) {
    if (row.failed) {
      std::snprintf(buf, sizeof(buf), "# row n=%ld failed: %s\n", row.n,
                    row.failure_message.c_str());
      out += buf;
      continue;
    }
    std::string bound;
    if (row.bound_value) {
      std::snprintf(buf, sizeof(buf), "%.17e", *row.bound_value);
      bound = buf;
    }
    std::snprintf(buf, sizeof(buf), "%ld,%.17e,%.17e,%.17e,%s,%.6e\n", row.n,
                  row.t_n, row.norm_error, row.per_vector_max_error,
                  bound.c_str(), row.wall_time_s);
    out += buf;
  }
  return out;
}

void emit_csv(const ConvergenceReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path);
  out << render_csv(report);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace chernoff::experiments
