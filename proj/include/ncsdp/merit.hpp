#pragma once

#include <optional>
#include <vector>

#include "ncsdp/iterate.hpp"
#include "ncsdp/linalg.hpp"
#include "ncsdp/problem.hpp"

namespace ncsdp {

/// Barrier parameter mu > 0 and coupling weight nu ≥ 0 of the primal-dual
/// merit function
///   ψ(x, Z) = f(x) − μ logdet X(x) + ν (⟨X(x), Z⟩ − μ logdet X(x) − μ logdet Z).
/// nu = 0 gives the pure primal barrier.
struct MeritParams {
  double mu = 1.0;
  double nu = 0.0;

  void validate() const;
};

struct MeritEval {
  double value = 0.0;
  Vec grad_x;
  SymMat grad_Z;
  std::optional<SymMat> hess_xx;
  /// Multiplier surrogate (1+ν)μX⁻¹ − νZ.
  SymMat lambda;
};

double merit_value(const NsdpProblem& prob, const Iterate& it, const MeritParams& p);
Vec merit_grad_x(const NsdpProblem& prob, const Iterate& it, const MeritParams& p);
SymMat merit_grad_Z(const NsdpProblem& prob, const Iterate& it, const MeritParams& p);
SymMat merit_hess_xx(const NsdpProblem& prob, const Iterate& it, const MeritParams& p);
SymMat lambda_surrogate(const Iterate& it, const MeritParams& p);

/// Value, both gradients and Λ in one pass; the Hessian only on request.
MeritEval evaluate_merit(const NsdpProblem& prob, const Iterate& it, const MeritParams& p,
                         bool with_hessian);

/// Hessian from precomputed pieces, shared by evaluate_merit and the solvers.
SymMat merit_hess_xx(const NsdpProblem& prob, const Iterate& it, const MeritParams& p,
                     const std::vector<SymMat>& a, const SymMat& lambda);

/// [tr(A_i W A_j W)]_{ij}.
SymMat sandwich_trace_matrix(const std::vector<SymMat>& a, const SymMat& w);

/// [tr(W ∂²X/∂x_i∂x_j)]_{ij}; zero for affine constraints.
SymMat second_derivative_contraction(const NsdpProblem& prob, const Vec& x, const SymMat& w);

// Local Lipschitz constants of the merit derivatives around the anchor `it`.

/// l_Z = 2μν‖Z⁻¹‖_F².
double local_lipschitz_Z(const Iterate& it, const MeritParams& p);
/// l_x = L1 + νL1‖Z‖_F + 2(1+ν)μL0²‖X⁻¹‖_F² + (1+ν)μL1‖X⁻¹‖_F.
double local_lipschitz_x(const Iterate& it, const MeritParams& p, double L0, double L1);
double local_lipschitz_x(const Iterate& it, const MeritParams& p, const LipschitzConstants& c);
/// l_xx = L2 + νL2‖Z‖_F + (1+ν)μ(L2‖X⁻¹‖_F + 4L1L0‖X⁻¹‖_F² + 6L0³‖X⁻¹‖_F³).
double local_lipschitz_xx(const Iterate& it, const MeritParams& p, double L0, double L1,
                          double L2);
double local_lipschitz_xx(const Iterate& it, const MeritParams& p, const LipschitzConstants& c);

}  // namespace ncsdp
