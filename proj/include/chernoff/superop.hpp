#ifndef CHERNOFF_SUPEROP_HPP
#define CHERNOFF_SUPEROP_HPP

#include <variant>
#include <vector>

#include "chernoff/linalg.hpp"

namespace chernoff::superop {

using linalg::Complex;
using linalg::Matrix;

// Kinds of contraction maps Pi acting on d x d matrices.

/// Pi x = u x u^dag.
struct UnitaryConjugation {
  Matrix u;
};

/// Pi x = sum_j Q_j x Q_j with orthogonal projectors Q_j summing to identity.
struct Pinching {
  std::vector<Matrix> blocks;
};

/// On 2d0 x 2d0 matrices in 2x2 block form (a b; c d) -> (a -b; -c d).
struct BlockSignFlip {
  int half_dim = 0;
};

/// Pi x = p x p with p an orthogonal projector. Not unital unless p = 1.
struct ProjectionCompression {
  Matrix p;
};

/// Pi acts via a d^2 x d^2 matrix on vec(x) (column stacking). The
/// contraction property is certified by sampling at construction, not by an
/// exact induced-norm computation.
struct GeneralSuper {
  Matrix m;
};

/// A contraction map on d x d matrices with a certified contraction property
/// and a unital marker (Pi 1 = 1). Immutable after construction.
class ContractionMap {
 public:
  static ContractionMap unitary_conjugation(Matrix u);
  static ContractionMap pinching(std::vector<Matrix> blocks);
  static ContractionMap block_sign_flip(int half_dim);
  static ContractionMap projection_compression(Matrix p);
  static ContractionMap general_super(Matrix m, int dim);
  static ContractionMap identity(int dim);

  int dim() const { return dim_; }
  bool unital() const { return unital_; }

  Matrix apply(const Matrix& x) const;
  Matrix iterate(const Matrix& x, long k) const;

  /// Matricization: m with m * vec(x) = vec(apply(x)), column stacking.
  Matrix superop_matrix() const;

  const std::variant<UnitaryConjugation, Pinching, BlockSignFlip,
                     ProjectionCompression, GeneralSuper>&
  kind() const {
    return kind_;
  }

 private:
  ContractionMap(int dim, bool unital,
                 std::variant<UnitaryConjugation, Pinching, BlockSignFlip,
                              ProjectionCompression, GeneralSuper>
                     kind)
      : dim_(dim), unital_(unital), kind_(std::move(kind)) {}

  int dim_;
  bool unital_;
  std::variant<UnitaryConjugation, Pinching, BlockSignFlip,
               ProjectionCompression, GeneralSuper>
      kind_;
};

struct CesaroDiagnostics {
  long terms_used = 0;
  double residual = 0.0;  // ||Pi M_n - M_n||
};

/// Running Cesaro mean M_n = (1/n) sum_{k=1..n} Pi^k x, accepted at the
/// first n where ||M_n - M_{2n}|| <= tol (doubling check). Throws
/// NoConvergence when max_terms is exhausted with residual > tol.
Matrix cesaro_projector(const ContractionMap& pi, const Matrix& x, double tol,
                        long max_terms, CesaroDiagnostics* diag = nullptr);

/// Mean ergodic projector P: either a numerical Cesaro estimate bound to a
/// map, or an exact pinching over spectral blocks.
class ErgodicProjector {
 public:
  struct CesaroEstimate {
    ContractionMap pi;
    double tol;
    long max_terms;
  };

  static ErgodicProjector cesaro(ContractionMap pi, double tol = 1e-10,
                                 long max_terms = 100000);
  static ErgodicProjector exact_pinching(std::vector<Matrix> blocks);
  static ErgodicProjector identity(int dim);

  int dim() const { return dim_; }
  bool exact() const { return std::holds_alternative<Pinching>(kind_); }

  Matrix apply(const Matrix& x) const;

  /// Residual reported by the last Cesaro application (0 for exact kinds).
  double last_residual() const { return last_residual_; }

 private:
  ErgodicProjector(int dim, std::variant<CesaroEstimate, Pinching> kind)
      : dim_(dim), kind_(std::move(kind)) {}

  int dim_;
  std::variant<CesaroEstimate, Pinching> kind_;
  mutable double last_residual_ = 0.0;
};

/// Eigendecomposes a unitary u, clusters eigenvalues closer than cluster_tol
/// (transitive closure), and returns the exact pinching projector onto the
/// commutant {x : [u, x] = 0} of the map x -> u x u^dag.
ErgodicProjector exact_pinching_projector(const Matrix& u,
                                          double cluster_tol = 1e-8);

struct ErgodicDecomposition {
  Matrix px;        // component in Ker(I - Pi)
  Matrix y;         // x - px = y - Pi y, least-squares
  double residual;  // ||x - px - (y - Pi y)||
};

/// x = Px + (I - Pi) y with Px from the mean ergodic projector and y a
/// minimum-norm least-squares solution via matricization of Pi.
ErgodicDecomposition ergodic_decompose(const ContractionMap& pi,
                                       const Matrix& x,
                                       double truncation_tol = 1e-10);

/// Exact mean ergodic projector of the map when a closed form exists
/// (UnitaryConjugation via pinching, Pinching itself, BlockSignFlip).
/// Falls back to a Cesaro estimate otherwise.
ErgodicProjector mean_ergodic_projector(const ContractionMap& pi,
                                        double cluster_tol = 1e-8);

}  // namespace chernoff::superop

#endif
