#pragma once

#include <optional>

#include "ncsdp/linalg.hpp"
#include "ncsdp/problem.hpp"

namespace ncsdp {

/// Relative floor below which an eigenvalue counts as nonpositive:
/// λ_min ≤ kInteriorityFloor·(1 + ‖A‖_F).
inline constexpr double kInteriorityFloor = 1e-14;

/// True iff λ_min(A) clears the interiority floor.
bool strictly_positive(const Spectrum& spec, const SymMat& a);

/// Primal-dual pair (x, Z) with X(x), both spectra and both inverses cached.
/// Construction enforces strict interiority; instances are immutable.
class Iterate {
 public:
  /// Throws DomainViolation if X(x) or Z is not strictly positive definite.
  static Iterate create(const NsdpProblem& prob, Vec x, SymMat z);
  /// Same as create but returns nullopt instead of throwing on a boundary point.
  static std::optional<Iterate> try_create(const NsdpProblem& prob, Vec x, SymMat z);

  /// New iterate with the same x (reusing X caches) and a different Z.
  std::optional<Iterate> with_Z(SymMat z) const;
  /// New iterate with the same Z and a different x.
  std::optional<Iterate> with_x(const NsdpProblem& prob, Vec x) const;

  const Vec& x() const { return x_; }
  const SymMat& Z() const { return z_; }
  const SymMat& X() const { return x_mat_; }
  const Spectrum& X_spectrum() const { return x_spec_; }
  const Spectrum& Z_spectrum() const { return z_spec_; }
  const SymMat& X_inv() const { return x_inv_; }
  const SymMat& Z_inv() const { return z_inv_; }

  double lambda_min_X() const { return x_spec_.min(); }
  double lambda_min_Z() const { return z_spec_.min(); }

 private:
  Iterate() = default;

  Vec x_;
  SymMat z_;
  SymMat x_mat_;
  Spectrum x_spec_;
  Spectrum z_spec_;
  SymMat x_inv_;
  SymMat z_inv_;
};

}  // namespace ncsdp
