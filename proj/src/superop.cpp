#include "chernoff/superop.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace chernoff::superop {

using linalg::Vector;

namespace {

Vector vec(const Matrix& x) {
  return Eigen::Map<const Vector>(x.data(), x.size());
}

Matrix unvec(const Vector& v, int d) {
  return Eigen::Map<const Matrix>(v.data(), d, d);
}

void require_square(const Matrix& x, const char* what) {
  if (x.rows() != x.cols()) {
    throw Error(ErrorCode::DimMismatch, std::string(what) + " is not square");
  }
}

void require_unitary(const Matrix& u, double tol, const char* what) {
  require_square(u, what);
  linalg::require_finite(u, what);
  Matrix gram = u.adjoint() * u;
  gram -= Matrix::Identity(u.rows(), u.cols());
  if (linalg::spectral_norm(gram) > tol) {
    throw Error(ErrorCode::NotUnitary, std::string(what) + " is not unitary");
  }
}

void require_projector(const Matrix& p, double tol, const char* what) {
  require_square(p, what);
  linalg::require_finite(p, what);
  double herm = linalg::spectral_norm(Matrix(p - p.adjoint()));
  double idem = linalg::spectral_norm(Matrix(p * p - p));
  if (herm > tol || idem > tol) {
    throw Error(ErrorCode::NotProjector,
                std::string(what) + " is not an orthogonal projector");
  }
}

}  // namespace

ContractionMap ContractionMap::unitary_conjugation(Matrix u) {
  require_unitary(u, 1e-10, "conjugating matrix");
  int d = static_cast<int>(u.rows());
  return ContractionMap(d, true, UnitaryConjugation{std::move(u)});
}

ContractionMap ContractionMap::pinching(std::vector<Matrix> blocks) {
  if (blocks.empty()) {
    throw Error(ErrorCode::ValidationError, "pinching needs at least one block");
  }
  int d = static_cast<int>(blocks.front().rows());
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& q : blocks) {
    if (q.rows() != d || q.cols() != d) {
      throw Error(ErrorCode::DimMismatch, "pinching blocks differ in dimension");
    }
    require_projector(q, 1e-8, "pinching block");
    sum += q;
  }
  sum -= Matrix::Identity(d, d);
  if (linalg::spectral_norm(sum) > 1e-8) {
    throw Error(ErrorCode::ValidationError,
                "pinching blocks do not sum to the identity");
  }
  return ContractionMap(d, true, Pinching{std::move(blocks)});
}

ContractionMap ContractionMap::block_sign_flip(int half_dim) {
  if (half_dim < 1) {
    throw Error(ErrorCode::ValidationError, "block size must be >= 1");
  }
  return ContractionMap(2 * half_dim, true, BlockSignFlip{half_dim});
}

ContractionMap ContractionMap::projection_compression(Matrix p) {
  require_projector(p, 1e-10, "compression projector");
  int d = static_cast<int>(p.rows());
  bool unital =
      linalg::spectral_norm(Matrix(p - Matrix::Identity(d, d))) <= 1e-12;
  return ContractionMap(d, unital, ProjectionCompression{std::move(p)});
}

ContractionMap ContractionMap::general_super(Matrix m, int dim) {
  if (dim < 1) throw Error(ErrorCode::ValidationError, "dimension must be >= 1");
  if (m.rows() != dim * dim || m.cols() != dim * dim) {
    throw Error(ErrorCode::DimMismatch, "superoperator matrix must be d^2 x d^2");
  }
  linalg::require_finite(m, "superoperator matrix");
  // Contraction certification by sampling, not by the exact induced norm.
  for (int trial = 0; trial < 200; ++trial) {
    Matrix x = linalg::random_gaussian(dim, 0xabcdef12u + trial);
    double nx = linalg::spectral_norm(x);
    if (nx == 0) continue;
    x /= nx;
    Matrix image = unvec(m * vec(x), dim);
    if (linalg::spectral_norm(image) > 1.0 + 1e-10) {
      throw Error(ErrorCode::NotContraction,
                  "sampled ||Pi x|| exceeds ||x||, map rejected");
    }
  }
  Matrix id = Matrix::Identity(dim, dim);
  Matrix image_of_id = unvec(m * vec(id), dim);
  bool unital = linalg::spectral_norm(Matrix(image_of_id - id)) <= 1e-10;
  return ContractionMap(dim, unital, GeneralSuper{std::move(m)});
}

ContractionMap ContractionMap::identity(int dim) {
  return unitary_conjugation(Matrix::Identity(dim, dim));
}

Matrix ContractionMap::apply(const Matrix& x) const {
  if (x.rows() != dim_ || x.cols() != dim_) {
    throw Error(ErrorCode::DimMismatch, "operand does not match map dimension");
  }
  return std::visit(
      [&](const auto& k) -> Matrix {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, UnitaryConjugation>) {
          return k.u * x * k.u.adjoint();
        } else if constexpr (std::is_same_v<K, Pinching>) {
          Matrix out = Matrix::Zero(dim_, dim_);
          for (const auto& q : k.blocks) out += q * x * q;
          return out;
        } else if constexpr (std::is_same_v<K, BlockSignFlip>) {
          int h = k.half_dim;
          Matrix out = x;
          out.block(0, h, h, h) *= -1.0;
          out.block(h, 0, h, h) *= -1.0;
          return out;
        } else if constexpr (std::is_same_v<K, ProjectionCompression>) {
          return k.p * x * k.p;
        } else {
          return unvec(k.m * vec(x), dim_);
        }
      },
      kind_);
}

Matrix ContractionMap::iterate(const Matrix& x, long k) const {
  if (k < 0) throw Error(ErrorCode::ValidationError, "iterate needs k >= 0");
  if (k == 0) return x;
  return std::visit(
      [&](const auto& kd) -> Matrix {
        using K = std::decay_t<decltype(kd)>;
        if constexpr (std::is_same_v<K, UnitaryConjugation>) {
          Matrix uk = linalg::matrix_power(kd.u, k);
          return uk * x * uk.adjoint();
        } else if constexpr (std::is_same_v<K, BlockSignFlip>) {
          return (k % 2 == 0) ? x : apply(x);
        } else if constexpr (std::is_same_v<K, Pinching> ||
                             std::is_same_v<K, ProjectionCompression>) {
          return apply(x);  // idempotent
        } else {
          Matrix mk = linalg::matrix_power(kd.m, k);
          return unvec(mk * vec(x), dim_);
        }
      },
      kind_);
}

Matrix ContractionMap::superop_matrix() const {
  long d2 = static_cast<long>(dim_) * dim_;
  if (d2 > 4096) {
    throw Error(ErrorCode::TooLarge, "matricization guarded at d^2 <= 4096");
  }
  Matrix m(d2, d2);
  Matrix basis = Matrix::Zero(dim_, dim_);
  for (int j = 0; j < dim_; ++j) {
    for (int i = 0; i < dim_; ++i) {
      basis(i, j) = 1.0;
      m.col(static_cast<long>(j) * dim_ + i) = vec(apply(basis));
      basis(i, j) = 0.0;
    }
  }
  return m;
}

Matrix cesaro_projector(const ContractionMap& pi, const Matrix& x, double tol,
                        long max_terms, CesaroDiagnostics* diag) {
  if (tol <= 0) throw Error(ErrorCode::ValidationError, "tol must be positive");
  if (max_terms < 1) {
    throw Error(ErrorCode::ValidationError, "max_terms must be >= 1");
  }
  Matrix iterate = x;
  Matrix sum = Matrix::Zero(x.rows(), x.cols());
  long checkpoint = 1;
  Matrix mean_at_checkpoint;
  for (long k = 1; k <= max_terms; ++k) {
    iterate = pi.apply(iterate);
    sum += iterate;
    if (k == checkpoint) {
      mean_at_checkpoint = sum / static_cast<double>(k);
    } else if (k == 2 * checkpoint) {
      Matrix mean = sum / static_cast<double>(k);
      double drift =
          linalg::spectral_norm(Matrix(mean_at_checkpoint - mean));
      if (drift <= tol) {
        if (diag) {
          diag->terms_used = checkpoint;
          diag->residual = linalg::spectral_norm(
              Matrix(pi.apply(mean_at_checkpoint) - mean_at_checkpoint));
        }
        return mean_at_checkpoint;
      }
      mean_at_checkpoint = std::move(mean);
      checkpoint = k;
    }
  }
  double residual = linalg::spectral_norm(
      Matrix(pi.apply(mean_at_checkpoint) - mean_at_checkpoint));
  if (diag) {
    diag->terms_used = checkpoint;
    diag->residual = residual;
  }
  throw Error(ErrorCode::NoConvergence,
              "Cesaro mean did not settle within max_terms (residual " +
                  std::to_string(residual) + ")");
}

ErgodicProjector ErgodicProjector::cesaro(ContractionMap pi, double tol,
                                          long max_terms) {
  int d = pi.dim();
  return ErgodicProjector(d, CesaroEstimate{std::move(pi), tol, max_terms});
}

ErgodicProjector ErgodicProjector::exact_pinching(std::vector<Matrix> blocks) {
  if (blocks.empty()) {
    throw Error(ErrorCode::ValidationError, "pinching needs at least one block");
  }
  int d = static_cast<int>(blocks.front().rows());
  return ErgodicProjector(d, Pinching{std::move(blocks)});
}

ErgodicProjector ErgodicProjector::identity(int dim) {
  std::vector<Matrix> blocks{Matrix::Identity(dim, dim)};
  return exact_pinching(std::move(blocks));
}

Matrix ErgodicProjector::apply(const Matrix& x) const {
  if (x.rows() != dim_ || x.cols() != dim_) {
    throw Error(ErrorCode::DimMismatch, "operand does not match projector dim");
  }
  return std::visit(
      [&](const auto& k) -> Matrix {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Pinching>) {
          Matrix out = Matrix::Zero(dim_, dim_);
          for (const auto& q : k.blocks) out += q * x * q;
          last_residual_ = 0.0;
          return out;
        } else {
          CesaroDiagnostics diag;
          Matrix out = cesaro_projector(k.pi, x, k.tol, k.max_terms, &diag);
          last_residual_ = diag.residual;
          return out;
        }
      },
      kind_);
}

ErgodicProjector exact_pinching_projector(const Matrix& u, double cluster_tol) {
  require_unitary(u, 1e-10, "pinching source");
  int d = static_cast<int>(u.rows());
  // u is normal, so its Schur form is diagonal and the Schur vectors are an
  // orthonormal eigenbasis.
  Eigen::ComplexSchur<Matrix> schur(u);
  Vector eigs = schur.matrixT().diagonal();
  Matrix q = schur.matrixU();

  // Cluster eigenvalues by the transitive closure of pairwise closeness.
  std::vector<int> parent(d);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      if (std::abs(eigs(i) - eigs(j)) <= cluster_tol) {
        parent[find(i)] = find(j);
      }
    }
  }
  std::vector<Matrix> blocks;
  std::vector<int> roots;
  for (int i = 0; i < d; ++i) {
    int r = find(i);
    int slot = -1;
    for (size_t s = 0; s < roots.size(); ++s) {
      if (roots[s] == r) slot = static_cast<int>(s);
    }
    if (slot < 0) {
      roots.push_back(r);
      blocks.emplace_back(Matrix::Zero(d, d));
      slot = static_cast<int>(roots.size()) - 1;
    }
    blocks[slot] += q.col(i) * q.col(i).adjoint();
  }
  return ErgodicProjector::exact_pinching(std::move(blocks));
}

ErgodicProjector mean_ergodic_projector(const ContractionMap& pi,
                                        double cluster_tol) {
  return std::visit(
      [&](const auto& k) -> ErgodicProjector {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, UnitaryConjugation>) {
          return exact_pinching_projector(k.u, cluster_tol);
        } else if constexpr (std::is_same_v<K, Pinching>) {
          // Pi is already a projector, so P = Pi.
          return ErgodicProjector::exact_pinching(k.blocks);
        } else if constexpr (std::is_same_v<K, BlockSignFlip>) {
          int h = k.half_dim;
          Matrix q1 = Matrix::Zero(2 * h, 2 * h);
          Matrix q2 = Matrix::Zero(2 * h, 2 * h);
          q1.topLeftCorner(h, h) = Matrix::Identity(h, h);
          q2.bottomRightCorner(h, h) = Matrix::Identity(h, h);
          return ErgodicProjector::exact_pinching({q1, q2});
        } else {
          return ErgodicProjector::cesaro(pi);
        }
      },
      pi.kind());
}

ErgodicDecomposition ergodic_decompose(const ContractionMap& pi,
                                       const Matrix& x, double truncation_tol) {
  ErgodicProjector proj = mean_ergodic_projector(pi);
  Matrix px = proj.apply(x);
  int d = pi.dim();
  Matrix range_part = x - px;
  double range_norm = linalg::spectral_norm(range_part);
  if (range_norm <= 1e-13 * std::max(1.0, linalg::spectral_norm(x))) {
    return ErgodicDecomposition{std::move(px), Matrix::Zero(d, d), range_norm};
  }
  Matrix m = pi.superop_matrix();
  Matrix system = Matrix::Identity(m.rows(), m.cols()) - m;
  Vector y_vec = linalg::least_squares_solve(system, vec(range_part),
                                             truncation_tol);
  Matrix y = unvec(y_vec, d);
  double residual =
      linalg::spectral_norm(Matrix(range_part - (y - pi.apply(y))));
  return ErgodicDecomposition{std::move(px), std::move(y), residual};
}

}  // namespace chernoff::superop
