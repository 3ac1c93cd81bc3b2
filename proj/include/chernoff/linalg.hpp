#ifndef CHERNOFF_LINALG_HPP
#define CHERNOFF_LINALG_HPP

#include <complex>
#include <Eigen/Dense>

#include "chernoff/error.hpp"

namespace chernoff::linalg {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Relative accuracy target of expm for ||t*x|| <= 100.
inline constexpr double kExpmTolerance = 1e-12;

bool is_finite(const Matrix& x);
bool is_finite(const Vector& v);
void require_finite(const Matrix& x, const char* what);

/// e^{t*x} by scaling and squaring with a degree-13 rational approximant.
Matrix expm(const Matrix& x, double t = 1.0);
Matrix expm(const Matrix& x, Complex t);

/// Largest singular value.
double spectral_norm(const Matrix& x);

/// Matrix power by repeated squaring, k >= 0.
Matrix matrix_power(const Matrix& x, long k);

/// Generator of a contraction semigroup: x = iH - B^dag B with H Hermitian,
/// so the Hermitian part of x is negative semidefinite and ||e^{tx}|| <= 1
/// for all t >= 0. Deterministic per (d, seed).
Matrix random_contraction_generator(int d, std::uint64_t seed);

/// Haar-like random unitary via QR of a complex Gaussian matrix with the
/// R-diagonal phase fix. Deterministic per (d, seed).
Matrix random_unitary(int d, std::uint64_t seed);

/// Random matrix with ||.|| <= 1 (Gaussian, rescaled). Deterministic.
Matrix random_contraction(int d, std::uint64_t seed);

/// Random complex Gaussian matrix, entries N(0,1) + i N(0,1).
Matrix random_gaussian(int d, std::uint64_t seed);

/// Random unit vector, deterministic per (d, seed).
Vector random_unit_vector(int d, std::uint64_t seed);

/// Minimum-norm least-squares solution of M z = rhs via SVD, discarding
/// singular values below truncation_tol * sigma_max.
Vector least_squares_solve(const Matrix& m, const Vector& rhs,
                           double truncation_tol);

}  // namespace chernoff::linalg

#endif
