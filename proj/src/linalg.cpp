#include "chernoff/linalg.hpp"

#include <cmath>
#include <random>

#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace chernoff::linalg {

bool is_finite(const Matrix& x) { return x.allFinite(); }
bool is_finite(const Vector& v) { return v.allFinite(); }

void require_finite(const Matrix& x, const char* what) {
  if (!x.allFinite()) {
    throw Error(ErrorCode::NonFinite, std::string(what) + " has NaN/Inf entries");
  }
}

Matrix expm(const Matrix& x, double t) {
  return expm(x, Complex(t, 0.0));
}

Matrix expm(const Matrix& x, Complex t) {
  require_finite(x, "expm input");
  if (!std::isfinite(t.real()) || !std::isfinite(t.imag())) {
    throw Error(ErrorCode::NonFinite, "expm scale is not finite");
  }
  Matrix scaled = t * x;
  // Pade-13 scaling and squaring, as implemented by Eigen.
  Matrix result = scaled.exp();
  if (!result.allFinite()) {
    throw Error(ErrorCode::Overflow, "expm overflowed double range");
  }
  return result;
}

double spectral_norm(const Matrix& x) {
  require_finite(x, "spectral_norm input");
  if (x.rows() == 0 || x.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(x);
  return svd.singularValues()(0);
}

Matrix matrix_power(const Matrix& x, long k) {
  if (k < 0) throw Error(ErrorCode::ValidationError, "matrix_power needs k >= 0");
  const auto d = x.rows();
  Matrix result = Matrix::Identity(d, d);
  Matrix base = x;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

namespace {

Matrix gaussian_matrix(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double re = normal(rng);
      double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

}  // namespace

Matrix random_gaussian(int d, std::uint64_t seed) {
  if (d < 1) throw Error(ErrorCode::ValidationError, "dimension must be >= 1");
  std::mt19937_64 rng(seed);
  return gaussian_matrix(d, rng);
}

Matrix random_contraction_generator(int d, std::uint64_t seed) {
  if (d < 1) throw Error(ErrorCode::ValidationError, "dimension must be >= 1");
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  Matrix g = gaussian_matrix(d, rng);
  Matrix h = 0.5 * (g + g.adjoint());
  Matrix b = gaussian_matrix(d, rng);
  Matrix x = Complex(0.0, 1.0) * h - b.adjoint() * b;
  // Normalized to O(1) norm; dissipativity is scale invariant.
  double norm = spectral_norm(x);
  if (norm > 1.0) x /= norm;
  return x;
}

Matrix random_unitary(int d, std::uint64_t seed) {
  if (d < 1) throw Error(ErrorCode::ValidationError, "dimension must be >= 1");
  std::mt19937_64 rng(seed ^ 0xda942042e4dd58b5ull);
  Matrix g = gaussian_matrix(d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phases so the factorization is unique (R diagonal positive).
  for (int j = 0; j < d; ++j) {
    Complex rjj = r(j, j);
    double mag = std::abs(rjj);
    Complex phase = (mag > 0) ? rjj / mag : Complex(1.0, 0.0);
    q.col(j) *= phase;
  }
  return q;
}

Matrix random_contraction(int d, std::uint64_t seed) {
  Matrix g = random_gaussian(d, seed ^ 0xc2b2ae3d27d4eb4full);
  double norm = spectral_norm(g);
  if (norm > 0) g /= norm;
  return g;
}

Vector random_unit_vector(int d, std::uint64_t seed) {
  if (d < 1) throw Error(ErrorCode::ValidationError, "dimension must be >= 1");
  std::mt19937_64 rng(seed ^ 0x165667b19e3779f9ull);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(d);
  for (int i = 0; i < d; ++i) v(i) = Complex(normal(rng), normal(rng));
  double norm = v.norm();
  if (norm > 0) v /= norm;
  return v;
}

Vector least_squares_solve(const Matrix& m, const Vector& rhs,
                           double truncation_tol) {
  require_finite(m, "least_squares_solve matrix");
  if (!rhs.allFinite()) {
    throw Error(ErrorCode::NonFinite, "least_squares_solve rhs has NaN/Inf");
  }
  if (rhs.size() != m.rows()) {
    throw Error(ErrorCode::DimMismatch, "rhs length does not match row count");
  }
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  if (sigma.size() == 0 || sigma(0) <= 0.0) {
    throw Error(ErrorCode::DegenerateInput, "matrix has no nonzero singular values");
  }
  double cutoff = truncation_tol * sigma(0);
  Vector coeffs = svd.matrixU().adjoint() * rhs;
  Vector scaled = Vector::Zero(sigma.size());
  int kept = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff) {
      scaled(i) = coeffs(i) / sigma(i);
      ++kept;
    }
  }
  if (kept == 0) {
    throw Error(ErrorCode::DegenerateInput,
                "all singular values below truncation threshold");
  }
  return svd.matrixV() * scaled;
}

}  // namespace chernoff::linalg
