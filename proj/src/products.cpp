#include "chernoff/products.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace chernoff::products {

using linalg::expm;
using linalg::matrix_power;
using linalg::spectral_norm;

namespace {

void require_unitary(const Matrix& u, const char* what) {
  Matrix gram = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
  if (spectral_norm(gram) > 1e-10) {
    throw Error(ErrorCode::NotUnitary, std::string(what) + " is not unitary");
  }
}

void require_admissible(const Matrix& x, double t, long n, const char* what) {
  Matrix shifted =
      Matrix::Identity(x.rows(), x.cols()) + (t / static_cast<double>(n)) * x;
  if (spectral_norm(shifted) > 1.0 + 1e-10) {
    throw Error(ErrorCode::HypothesisViolated,
                std::string(what) + ": ||1 + (t/n) x|| exceeds 1");
  }
}

// prod_{k=1..n} (1 + (t/n) Pi^k x), k ascending left to right, iterates
// computed incrementally.
Matrix shifted_iterate_product(const ContractionMap& pi, const Matrix& x,
                               double t, long n) {
  const double step = t / static_cast<double>(n);
  const Matrix id = Matrix::Identity(x.rows(), x.cols());
  Matrix iterate = pi.apply(x);
  Matrix product = id + step * iterate;
  for (long k = 2; k <= n; ++k) {
    iterate = pi.apply(iterate);
    product = product * (id + step * iterate);
  }
  return product;
}

}  // namespace

Schedule Schedule::uniform(long n, double target_t) {
  if (n < 1) throw Error(ErrorCode::InvalidSchedule, "uniform schedule needs n >= 1");
  return Schedule{Uniform{n}, target_t};
}

Schedule Schedule::sequenced(std::vector<std::pair<long, double>> pairs,
                             double target_t) {
  long prev_k = 0;
  double prev_t = std::numeric_limits<double>::infinity();
  for (const auto& [k, tn] : pairs) {
    if (k <= prev_k) {
      throw Error(ErrorCode::InvalidSchedule, "k_n must be strictly increasing");
    }
    if (tn <= 0 || tn > prev_t) {
      throw Error(ErrorCode::InvalidSchedule,
                  "t_n must be positive and non-increasing");
    }
    prev_k = k;
    prev_t = tn;
  }
  if (!pairs.empty()) {
    double final_product = pairs.back().first * pairs.back().second;
    if (std::abs(final_product - target_t) > 0.1 * std::abs(target_t)) {
      throw Error(ErrorCode::InvalidSchedule,
                  "k_n * t_n must approach target_t (last entry off by >10%)");
    }
  }
  return Schedule{Sequenced{std::move(pairs)}, target_t};
}

Matrix iterated_product(const ContractionMap& pi, const OneParameterFamily& v,
                        double t, long n) {
  if (t < 0) throw Error(ErrorCode::NegativeTime, "product needs t >= 0");
  if (n < 1) throw Error(ErrorCode::ValidationError, "product needs n >= 1");
  if (pi.dim() != v.dim()) {
    throw Error(ErrorCode::DimMismatch, "map and family dims differ");
  }
  Matrix step = v.evaluate(t / static_cast<double>(n));
  Matrix factor = pi.apply(step);
  Matrix product = factor;
  for (long k = 2; k <= n; ++k) {
    factor = pi.apply(factor);
    product = product * factor;
  }
  return product;
}

std::vector<ScheduleRow> schedule_product(const ContractionMap& pi,
                                          const OneParameterFamily& v,
                                          const Schedule& schedule) {
  std::vector<ScheduleRow> rows;
  if (std::holds_alternative<Schedule::Uniform>(schedule.kind)) {
    long n = std::get<Schedule::Uniform>(schedule.kind).n;
    double tn = schedule.target_t / static_cast<double>(n);
    rows.push_back({n, tn, iterated_product(pi, v, schedule.target_t, n)});
    return rows;
  }
  for (const auto& [k, tn] : std::get<Schedule::Sequenced>(schedule.kind).pairs) {
    Matrix step = v.evaluate(tn);
    Matrix factor = pi.apply(step);
    Matrix product = factor;
    for (long i = 2; i <= k; ++i) {
      factor = pi.apply(factor);
      product = product * factor;
    }
    rows.push_back({k, tn, std::move(product)});
  }
  return rows;
}

Matrix decoupling_product(const Matrix& u, const Matrix& x, double t, long n) {
  return decoupling_product(u, x, Complex(t, 0.0), n);
}

Matrix decoupling_product(const Matrix& u, const Matrix& x, Complex t, long n) {
  require_unitary(u, "decoupling pulse");
  if (n < 1) throw Error(ErrorCode::ValidationError, "needs n >= 1");
  if (u.rows() != x.rows() || x.rows() != x.cols()) {
    throw Error(ErrorCode::DimMismatch, "pulse and generator dims differ");
  }
  Matrix step = expm(x, t / static_cast<double>(n));
  Matrix pulse_step = u * step;
  return matrix_power(pulse_step, n) * matrix_power(u.adjoint(), n);
}

Matrix cyclic_product(const std::vector<Matrix>& us, const Matrix& x, double t,
                      long n) {
  if (us.empty()) throw Error(ErrorCode::ValidationError, "needs k >= 1 pulses");
  long k = static_cast<long>(us.size());
  if (n < 1 || n % k != 0) {
    throw Error(ErrorCode::NotDivisible, "n must be a positive multiple of k");
  }
  for (const auto& u : us) {
    require_unitary(u, "cyclic pulse");
    if (u.rows() != x.rows()) {
      throw Error(ErrorCode::DimMismatch, "pulse and generator dims differ");
    }
  }
  Matrix step = expm(x, t / static_cast<double>(n));
  Matrix cycle = Matrix::Identity(x.rows(), x.cols());
  for (const auto& u : us) cycle = cycle * u * step;
  return matrix_power(cycle, n / k);
}

TwoUnitaryProduct two_unitary_product(const Matrix& u1, const Matrix& u2,
                                      const Matrix& x, double t, long n) {
  if (n < 2 || n % 2 != 0) {
    throw Error(ErrorCode::OddN, "needs a positive even n");
  }
  require_unitary(u1, "u1");
  require_unitary(u2, "u2");
  if (u1.rows() != x.rows() || u2.rows() != x.rows() || x.rows() != x.cols()) {
    throw Error(ErrorCode::DimMismatch, "dims differ");
  }
  Matrix step = expm(x, t / static_cast<double>(n));
  Matrix pair = u1 * step * u2 * step;
  Matrix raw = matrix_power(pair, n / 2);
  Matrix u = u1 * u2;
  Matrix corrected = raw * matrix_power(u.adjoint(), n / 2);
  return TwoUnitaryProduct{std::move(raw), std::move(corrected)};
}

Matrix zeno_product(const Matrix& p, const Matrix& x, double t, long n) {
  if (n < 1) throw Error(ErrorCode::ValidationError, "needs n >= 1");
  if (p.rows() != x.rows() || x.rows() != x.cols() || p.rows() != p.cols()) {
    throw Error(ErrorCode::DimMismatch, "dims differ");
  }
  double herm = spectral_norm(Matrix(p - p.adjoint()));
  double idem = spectral_norm(Matrix(p * p - p));
  if (herm > 1e-10 || idem > 1e-10) {
    throw Error(ErrorCode::NotProjector, "p must satisfy p^2 = p = p^dag");
  }
  Matrix step = expm(x, t / static_cast<double>(n));
  return matrix_power(p * step, n);
}

BoundPair chernoff_bound_check(const Matrix& s, const Vector& v, long n) {
  if (n < 0) throw Error(ErrorCode::ValidationError, "needs n >= 0");
  if (s.rows() != s.cols() || v.size() != s.rows()) {
    throw Error(ErrorCode::DimMismatch, "dims differ");
  }
  if (spectral_norm(s) > 1.0 + 1e-10) {
    throw Error(ErrorCode::NotContraction, "S must be a contraction");
  }
  Matrix shifted = s - Matrix::Identity(s.rows(), s.cols());
  Vector lhs_vec = expm(shifted, static_cast<double>(n)) * v -
                   matrix_power(s, n) * v;
  double lhs = lhs_vec.norm();
  double rhs = std::sqrt(static_cast<double>(n)) * (s * v - v).norm();
  return BoundPair{lhs, rhs};
}

ProductBoundResult product_bound_check(const ContractionMap& pi, const Matrix& x,
                                double t, long n, double truncation_tol) {
  if (!pi.unital()) {
    throw Error(ErrorCode::HypothesisViolated, "the bound requires Pi 1 = 1");
  }
  if (t <= 0 || n < 1) {
    throw Error(ErrorCode::ValidationError, "needs t > 0 and n >= 1");
  }
  require_admissible(x, t, n, "product bound operand");

  auto decomp = superop::ergodic_decompose(pi, x, truncation_tol);
  const double step = t / static_cast<double>(n);
  const Matrix id = Matrix::Identity(x.rows(), x.cols());
  Matrix projected_power = matrix_power(id + step * decomp.px, n);
  Matrix iterated = shifted_iterate_product(pi, x, t, n);
  double lhs = spectral_norm(Matrix(projected_power - iterated));
  double x_norm = spectral_norm(x);
  double y_norm = spectral_norm(decomp.y);
  double bound = 2.0 * t * y_norm / static_cast<double>(n) +
                 4.0 * t * t * (x_norm * y_norm + y_norm * y_norm) /
                     static_cast<double>(n);
  return ProductBoundResult{lhs, bound, y_norm, decomp.residual};
}

BoundPair telescoping_diff_check(const ContractionMap& pi, const Matrix& x1,
                                 const Matrix& x2, double t, long n) {
  if (t <= 0 || n < 1) {
    throw Error(ErrorCode::ValidationError, "needs t > 0 and n >= 1");
  }
  require_admissible(x1, t, n, "x1");
  require_admissible(x2, t, n, "x2");
  Matrix prod1 = shifted_iterate_product(pi, x1, t, n);
  Matrix prod2 = shifted_iterate_product(pi, x2, t, n);
  double lhs = spectral_norm(Matrix(prod1 - prod2));
  double rhs = t * spectral_norm(Matrix(x1 - x2));
  return BoundPair{lhs, rhs};
}

}  // namespace chernoff::products
