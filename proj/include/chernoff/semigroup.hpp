#ifndef CHERNOFF_SEMIGROUP_HPP
#define CHERNOFF_SEMIGROUP_HPP

#include <variant>
#include <vector>

#include "chernoff/superop.hpp"

namespace chernoff::semigroup {

using linalg::Matrix;
using superop::ErgodicProjector;

/// V_t = e^{tx}.
struct ExpFamily {
  Matrix x;
};

/// On C^{2 d0}: V_t = ((T1+T2)/2, (T1-T2)/2; (T1-T2)/2, (T1+T2)/2) with
/// T_i = e^{t x_i}.
struct BlockMixFamily {
  Matrix x1;
  Matrix x2;
};

/// V_t = u1 e^{(t/2)x} u1^dag u e^{(t/2)x} u^dag with u = u1 u2.
struct TwoUnitaryFamily {
  Matrix u1;
  Matrix u2;
  Matrix x;
  Matrix u;  // cached u1 u2
};

/// A contraction-valued one-parameter family t -> V_t with V_0 = 1.
class OneParameterFamily {
 public:
  static OneParameterFamily exp_family(Matrix x);
  static OneParameterFamily block_mix(Matrix x1, Matrix x2);
  static OneParameterFamily two_unitary(Matrix u1, Matrix u2, Matrix x);

  int dim() const { return dim_; }

  /// V_t; throws NegativeTime for t < 0.
  Matrix evaluate(double t) const;

  /// Formula evaluation without the t >= 0 guard (finite differences).
  Matrix evaluate_unchecked(double t) const;

  const std::variant<ExpFamily, BlockMixFamily, TwoUnitaryFamily>& kind() const {
    return kind_;
  }

 private:
  OneParameterFamily(int dim,
                     std::variant<ExpFamily, BlockMixFamily, TwoUnitaryFamily> k)
      : dim_(dim), kind_(std::move(k)) {}

  int dim_;
  std::variant<ExpFamily, BlockMixFamily, TwoUnitaryFamily> kind_;
};

struct FiniteDifference {
  double step = 1e-3;
  int richardson_levels = 2;
};
struct ExactMethod {};
using GeneratorMethod = std::variant<ExactMethod, FiniteDifference>;

/// A = d/dt P(V_t) at t = 0 and its closure; in finite dimension every
/// operator is bounded, so the closure equals A and e^{t A-bar} is just
/// expm(A, t).
struct GeneratorEstimate {
  Matrix a;
  bool exact = false;
  double error_estimate = 0.0;
};

/// The projected generator of the family. Exact method: P(x) for ExpFamily;
/// blockdiag((x1+x2)/2, (x1+x2)/2) for BlockMixFamily under the block
/// sign-flip projector. Finite differences: Richardson-extrapolated central
/// difference of t -> P(V_t) at 0.
GeneratorEstimate projected_generator(const OneParameterFamily& v,
                                      const ErgodicProjector& p,
                                      const GeneratorMethod& method);

struct ContractionSample {
  double t = 0.0;
  double norm = 0.0;
  bool pass = false;
};
struct ContractionReport {
  std::vector<ContractionSample> samples;
  bool all_pass = false;
};

/// ||V_t|| <= 1 + 1e-10 at each sample.
ContractionReport check_contraction_family(const OneParameterFamily& v,
                                           const std::vector<double>& t_samples);

struct StabilitySample {
  double t = 0.0;
  long n = 0;
  double norm = 0.0;   // ||e^{t P(A_n)}||
  double bound = 0.0;  // M e^{omega t}
};
struct StabilityReport {
  std::vector<StabilitySample> samples;
  double max_ratio = 0.0;
  bool all_pass = false;
};

/// Stability of the approximating semigroups: with A_n = (V_{t/n} - 1)/(t/n),
/// checks ||e^{t P(A_n)}|| <= M e^{omega t} over the (t, n) grid.
StabilityReport check_stability(const OneParameterFamily& v,
                                const ErgodicProjector& p, double big_m,
                                double omega,
                                const std::vector<double>& t_samples,
                                const std::vector<long>& n_values);

}  // namespace chernoff::semigroup

#endif
