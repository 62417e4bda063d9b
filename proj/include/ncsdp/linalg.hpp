#pragma once

#include <Eigen/Dense>

namespace ncsdp {

using Index = Eigen::Index;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Dense real symmetric matrix. Every write path symmetrizes, so entry(i,j)
/// and entry(j,i) are bit-identical.
class SymMat {
 public:
  SymMat() = default;
  explicit SymMat(Index dim) : data_(Mat::Zero(dim, dim)) {}
  /// Stores (A + Aᵀ)/2; for an already symmetric input this is exact.
  explicit SymMat(const Mat& a);

  static SymMat zero(Index dim) { return SymMat(dim); }
  static SymMat identity(Index dim);
  static SymMat diagonal(const Vec& diag);

  Index dim() const { return data_.rows(); }
  double operator()(Index i, Index j) const { return data_(i, j); }
  void set(Index i, Index j, double value) {
    data_(i, j) = value;
    data_(j, i) = value;
  }
  const Mat& matrix() const { return data_; }

  double frobenius_norm() const { return data_.norm(); }
  double trace() const { return data_.trace(); }
  bool all_finite() const { return data_.allFinite(); }

  SymMat& operator+=(const SymMat& other);
  SymMat& operator-=(const SymMat& other);
  SymMat& operator*=(double s);

  friend SymMat operator+(SymMat a, const SymMat& b) { return a += b; }
  friend SymMat operator-(SymMat a, const SymMat& b) { return a -= b; }
  friend SymMat operator*(double s, SymMat a) { return a *= s; }
  friend SymMat operator*(SymMat a, double s) { return a *= s; }

 private:
  Mat data_;
};

/// ⟨A, B⟩ = tr(AB) for symmetric arguments.
double inner(const SymMat& a, const SymMat& b);

/// Eigenpairs of a symmetric matrix, eigenvalues sorted descending and
/// eigenvectors stored as orthonormal columns in the same order.
struct Spectrum {
  Vec eigenvalues;
  Mat eigenvectors;

  Index dim() const { return eigenvalues.size(); }
  double max() const { return eigenvalues(0); }
  double min() const { return eigenvalues(eigenvalues.size() - 1); }
  /// Column of the smallest eigenvalue.
  Vec min_vector() const { return eigenvectors.col(eigenvectors.cols() - 1); }

  SymMat reconstruct() const;
  /// U D⁻¹ Uᵀ. Caller guarantees all eigenvalues are nonzero.
  SymMat inverse() const;
  /// U D† Uᵀ with eigenvalues ≤ rel_tol·max(λ_max, 0) treated as zero.
  SymMat pseudo_inverse(double rel_tol) const;
  /// Σ log λ_i. Caller guarantees positivity.
  double logdet() const;
  /// Number of eigenvalues ≤ rel_tol·max(λ_max, 0).
  Index kernel_dim(double rel_tol) const;
};

/// Symmetric eigendecomposition; throws NumericalFailure on non-finite input
/// or when the iterative solver does not converge.
Spectrum spectral_decompose(const SymMat& a);

/// Spectral norm of a symmetric matrix (max |λ_i|).
double spectral_norm(const SymMat& a);

}  // namespace ncsdp
