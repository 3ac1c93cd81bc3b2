#ifndef CHERNOFF_PRODUCTS_HPP
#define CHERNOFF_PRODUCTS_HPP

#include <utility>
#include <vector>

#include "chernoff/semigroup.hpp"

namespace chernoff::products {

using linalg::Complex;
using linalg::Matrix;
using linalg::Vector;
using semigroup::OneParameterFamily;
using superop::ContractionMap;

/// Either a uniform n-fold splitting of target_t or an explicit list of
/// (k_n, t_n) pairs with k_n strictly increasing, t_n decreasing to 0, and
/// k_n * t_n approaching target_t.
struct Schedule {
  struct Uniform {
    long n = 1;
  };
  struct Sequenced {
    std::vector<std::pair<long, double>> pairs;
  };

  static Schedule uniform(long n, double target_t);
  static Schedule sequenced(std::vector<std::pair<long, double>> pairs,
                            double target_t);

  std::variant<Uniform, Sequenced> kind;
  double target_t = 0.0;
};

/// The ordered product Pi(V_{t/n}) Pi^2(V_{t/n}) ... Pi^n(V_{t/n}), leftmost
/// factor first. Iterates are computed incrementally, n-1 superoperator
/// applications in total. Non-unital maps are accepted (Zeno exploration)
/// but are outside the convergence theorem's hypothesis.
Matrix iterated_product(const ContractionMap& pi, const OneParameterFamily& v,
                        double t, long n);

struct ScheduleRow {
  long k = 0;
  double t_n = 0.0;
  Matrix product;
};

/// Pi(V_{t_n}) ... Pi^{k_n}(V_{t_n}) for each schedule entry.
std::vector<ScheduleRow> schedule_product(const ContractionMap& pi,
                                          const OneParameterFamily& v,
                                          const Schedule& schedule);

/// (u e^{(t/n)x})^n (u^dag)^n; converges to e^{t P(x)} with P the pinching
/// projector of u.
Matrix decoupling_product(const Matrix& u, const Matrix& x, double t, long n);
Matrix decoupling_product(const Matrix& u, const Matrix& x, Complex t, long n);

/// (u1 e^{(t/n)x} u2 e^{(t/n)x} ... uk e^{(t/n)x})^{n/k}; n must be a
/// multiple of k.
Matrix cyclic_product(const std::vector<Matrix>& us, const Matrix& x, double t,
                      long n);

struct TwoUnitaryProduct {
  Matrix raw;        // (u1 e^{(t/n)x} u2 e^{(t/n)x})^{n/2}
  Matrix corrected;  // raw * (u^dag)^{n/2}, u = u1 u2
};

/// Two-unitary product; the corrected variant converges to expm(A, t) with
/// A = (1/2) P(u1 x u1^dag + u x u^dag), P the pinching projector of u.
TwoUnitaryProduct two_unitary_product(const Matrix& u1, const Matrix& u2,
                                      const Matrix& x, double t, long n);

/// (p e^{(t/n)x})^n with p an orthogonal projector.
Matrix zeno_product(const Matrix& p, const Matrix& x, double t, long n);

struct BoundPair {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// ||e^{n(S-1)} v - S^n v|| vs sqrt(n) ||S v - v|| for a contraction S.
BoundPair chernoff_bound_check(const Matrix& s, const Vector& v, long n);

struct ProductBoundResult {
  double lhs = 0.0;
  double bound = 0.0;  // 2 t ||y|| / n + 4 t^2 (||x|| ||y|| + ||y||^2) / n
  double y_norm = 0.0;
  double decomposition_residual = 0.0;
};

/// ||(1 + (t/n) Px)^n - prod_k (1 + (t/n) Pi^k x)|| against the explicit
/// O(1/n) bound, with (Px, y) from the ergodic decomposition. Requires the
/// hypothesis ||1 + (t/n) x|| <= 1.
ProductBoundResult product_bound_check(const ContractionMap& pi, const Matrix& x,
                                double t, long n,
                                double truncation_tol = 1e-10);

/// ||prod_k (1 + (t/n) Pi^k x1) - prod_k (1 + (t/n) Pi^k x2)|| vs
/// t ||x1 - x2||, both factors admissible.
BoundPair telescoping_diff_check(const ContractionMap& pi, const Matrix& x1,
                                 const Matrix& x2, double t, long n);

}  // namespace chernoff::products

#endif
