#include "chernoff/semigroup.hpp"

#include <cmath>

namespace chernoff::semigroup {

using linalg::expm;
using linalg::spectral_norm;

OneParameterFamily OneParameterFamily::exp_family(Matrix x) {
  linalg::require_finite(x, "generator");
  if (x.rows() != x.cols()) {
    throw Error(ErrorCode::DimMismatch, "generator must be square");
  }
  int d = static_cast<int>(x.rows());
  return OneParameterFamily(d, ExpFamily{std::move(x)});
}

OneParameterFamily OneParameterFamily::block_mix(Matrix x1, Matrix x2) {
  linalg::require_finite(x1, "x1");
  linalg::require_finite(x2, "x2");
  if (x1.rows() != x1.cols() || x1.rows() != x2.rows() ||
      x1.cols() != x2.cols()) {
    throw Error(ErrorCode::DimMismatch, "block generators must match in shape");
  }
  int d0 = static_cast<int>(x1.rows());
  return OneParameterFamily(2 * d0, BlockMixFamily{std::move(x1), std::move(x2)});
}

OneParameterFamily OneParameterFamily::two_unitary(Matrix u1, Matrix u2,
                                                   Matrix x) {
  linalg::require_finite(x, "generator");
  if (u1.rows() != x.rows() || u2.rows() != x.rows() || x.rows() != x.cols()) {
    throw Error(ErrorCode::DimMismatch, "two-unitary family dims must match");
  }
  Matrix gram1 = u1.adjoint() * u1 - Matrix::Identity(u1.rows(), u1.cols());
  Matrix gram2 = u2.adjoint() * u2 - Matrix::Identity(u2.rows(), u2.cols());
  if (spectral_norm(gram1) > 1e-10 || spectral_norm(gram2) > 1e-10) {
    throw Error(ErrorCode::NotUnitary, "u1, u2 must be unitary");
  }
  int d = static_cast<int>(x.rows());
  Matrix u = u1 * u2;
  return OneParameterFamily(
      d, TwoUnitaryFamily{std::move(u1), std::move(u2), std::move(x),
                          std::move(u)});
}

Matrix OneParameterFamily::evaluate(double t) const {
  if (t < 0) throw Error(ErrorCode::NegativeTime, "family defined for t >= 0");
  return evaluate_unchecked(t);
}

Matrix OneParameterFamily::evaluate_unchecked(double t) const {
  return std::visit(
      [&](const auto& k) -> Matrix {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, ExpFamily>) {
          return expm(k.x, t);
        } else if constexpr (std::is_same_v<K, BlockMixFamily>) {
          int d0 = static_cast<int>(k.x1.rows());
          Matrix t1 = expm(k.x1, t);
          Matrix t2 = expm(k.x2, t);
          Matrix v(2 * d0, 2 * d0);
          Matrix plus = 0.5 * (t1 + t2);
          Matrix minus = 0.5 * (t1 - t2);
          v.topLeftCorner(d0, d0) = plus;
          v.bottomRightCorner(d0, d0) = plus;
          v.topRightCorner(d0, d0) = minus;
          v.bottomLeftCorner(d0, d0) = minus;
          return v;
        } else {
          Matrix half = expm(k.x, t / 2.0);
          return k.u1 * half * k.u1.adjoint() * k.u * half * k.u.adjoint();
        }
      },
      kind_);
}

namespace {

// Central difference of t -> P(V_t) at 0 with Richardson extrapolation on
// the O(h^2) error series.
GeneratorEstimate finite_difference_generator(const OneParameterFamily& v,
                                              const ErgodicProjector& p,
                                              const FiniteDifference& fd) {
  if (fd.step <= 0 || fd.richardson_levels < 0) {
    throw Error(ErrorCode::ValidationError, "bad finite-difference parameters");
  }
  int levels = fd.richardson_levels;
  std::vector<Matrix> row(levels + 1);
  double h = fd.step;
  for (int i = 0; i <= levels; ++i) {
    double hi = h / std::pow(2.0, i);
    Matrix plus = p.apply(v.evaluate_unchecked(hi));
    Matrix minus = p.apply(v.evaluate_unchecked(-hi));
    row[i] = (plus - minus) / (2.0 * hi);
  }
  // Richardson tableau in place, power-of-4 weights.
  double err = 0.0;
  for (int level = 1; level <= levels; ++level) {
    double w = std::pow(4.0, level);
    for (int i = levels; i >= level; --i) {
      Matrix refined = (w * row[i] - row[i - 1]) / (w - 1.0);
      if (i == levels) err = spectral_norm(Matrix(refined - row[i]));
      row[i] = std::move(refined);
    }
  }
  return GeneratorEstimate{row[levels], false, err};
}

}  // namespace

GeneratorEstimate projected_generator(const OneParameterFamily& v,
                                      const ErgodicProjector& p,
                                      const GeneratorMethod& method) {
  if (p.dim() != v.dim()) {
    throw Error(ErrorCode::DimMismatch, "projector does not match family dim");
  }
  if (std::holds_alternative<FiniteDifference>(method)) {
    return finite_difference_generator(v, p,
                                       std::get<FiniteDifference>(method));
  }
  return std::visit(
      [&](const auto& k) -> GeneratorEstimate {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, ExpFamily>) {
          // P is linear, so d/dt P(e^{tx}) at 0 is P(x).
          return GeneratorEstimate{p.apply(k.x), true, p.last_residual()};
        } else if constexpr (std::is_same_v<K, BlockMixFamily>) {
          int d0 = static_cast<int>(k.x1.rows());
          Matrix mean = 0.5 * (k.x1 + k.x2);
          Matrix a = Matrix::Zero(2 * d0, 2 * d0);
          a.topLeftCorner(d0, d0) = mean;
          a.bottomRightCorner(d0, d0) = mean;
          return GeneratorEstimate{std::move(a), true, 0.0};
        } else {
          throw Error(ErrorCode::MethodUnavailable,
                      "no closed-form generator for this family kind");
        }
      },
      v.kind());
}

ContractionReport check_contraction_family(
    const OneParameterFamily& v, const std::vector<double>& t_samples) {
  ContractionReport report;
  report.all_pass = true;
  for (double t : t_samples) {
    if (t < 0) throw Error(ErrorCode::NegativeTime, "negative sample time");
    double norm = spectral_norm(v.evaluate(t));
    bool pass = norm <= 1.0 + 1e-10;
    report.samples.push_back({t, norm, pass});
    if (!pass) report.all_pass = false;
  }
  return report;
}

StabilityReport check_stability(const OneParameterFamily& v,
                                const ErgodicProjector& p, double big_m,
                                double omega,
                                const std::vector<double>& t_samples,
                                const std::vector<long>& n_values) {
  if (big_m < 1.0) {
    throw Error(ErrorCode::ValidationError, "stability constant M must be >= 1");
  }
  StabilityReport report;
  report.all_pass = true;
  for (double t : t_samples) {
    if (t < 0) throw Error(ErrorCode::NegativeTime, "negative sample time");
    for (long n : n_values) {
      if (n < 1) throw Error(ErrorCode::ValidationError, "n must be >= 1");
      double step = t / static_cast<double>(n);
      Matrix a_n;
      if (step == 0.0) {
        a_n = Matrix::Zero(v.dim(), v.dim());
      } else {
        a_n = (v.evaluate(step) - Matrix::Identity(v.dim(), v.dim())) / step;
      }
      Matrix pa = p.apply(a_n);
      double norm = spectral_norm(expm(pa, t));
      double bound = big_m * std::exp(omega * t);
      report.samples.push_back({t, n, norm, bound});
      double ratio = (bound > 0) ? norm / bound : 0.0;
      report.max_ratio = std::max(report.max_ratio, ratio);
      if (norm > bound * (1.0 + 1e-10) + 1e-12) report.all_pass = false;
    }
  }
  return report;
}

}  // namespace chernoff::semigroup
