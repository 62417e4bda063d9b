#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ncsdp/linalg.hpp"

namespace ncsdp {

/// Bounds on the constraint and objective derivatives:
///   L0 ≥ Σ_i ‖A_i(x)‖_F,
///   L1 ≥ Lipschitz constant of ∇f and of x ↦ Σ_i ‖A_i(x)‖ (and bound on Σ‖∂²X‖_F),
///   L2 ≥ Lipschitz constant of ∇²f and of ∂²X.
/// Any of them may be unknown; fixed-step solvers then refuse to run.
struct LipschitzConstants {
  std::optional<double> L0;
  std::optional<double> L1;
  std::optional<double> L2;

  bool all_known() const { return L0 && L1 && L2; }
};

/// min f(x) s.t. X(x) ⪰ 0, with analytic derivatives. Implementations must be
/// reentrant: evaluation may not mutate shared state.
class NsdpProblem {
 public:
  virtual ~NsdpProblem() = default;

  /// Primal dimension n.
  virtual Index num_vars() const = 0;
  /// Order m of the matrix constraint.
  virtual Index matrix_order() const = 0;

  virtual double eval_f(const Vec& x) const = 0;
  virtual Vec eval_grad_f(const Vec& x) const = 0;
  virtual SymMat eval_hess_f(const Vec& x) const = 0;
  virtual SymMat eval_X(const Vec& x) const = 0;
  /// A_i(x) = ∂X/∂x_i, zero-based i.
  virtual SymMat eval_Ai(const Vec& x, Index i) const = 0;
  /// ∂²X/∂x_i∂x_j.
  virtual SymMat eval_d2X(const Vec& x, Index i, Index j) const = 0;

  /// All A_i(x) at once; problems with constant derivatives override this.
  virtual std::vector<SymMat> eval_all_Ai(const Vec& x) const;
  /// True when ∂²X ≡ 0, letting callers skip the second-derivative terms.
  virtual bool affine_constraint() const { return false; }
  virtual LipschitzConstants lipschitz() const { return {}; }
  virtual std::string name() const { return "nsdp"; }
};

/// A*(x)W = (⟨A_1(x), W⟩, …, ⟨A_n(x), W⟩).
Vec adjoint_map(const NsdpProblem& prob, const Vec& x, const SymMat& w);
Vec adjoint_map(const std::vector<SymMat>& a, const SymMat& w);

/// ΔX(x; d) = Σ_i A_i(x) d_i.
SymMat delta_X(const NsdpProblem& prob, const Vec& x, const Vec& d);
SymMat delta_X(const std::vector<SymMat>& a, const Vec& d);

/// Throws InvalidInput unless x has num_vars() entries.
void check_primal_dim(const NsdpProblem& prob, const Vec& x);

}  // namespace ncsdp
