#pragma once

#include "ncsdp/iterate.hpp"
#include "ncsdp/linalg.hpp"
#include "ncsdp/merit.hpp"
#include "ncsdp/problem.hpp"

namespace ncsdp {

/// Relative eigenvalue threshold used to detect the kernel of X(x).
inline constexpr double kDefaultRankTol = 1e-7;

/// Residuals of the KKT system of L(x, Λ) = f(x) − ⟨X(x), Λ⟩.
struct KktResiduals {
  double stationarity = 0.0;     ///< ‖∇f(x) − A*(x)Λ‖
  double primal_feas = 0.0;      ///< max(0, −λ_min(X(x)))
  double dual_feas = 0.0;        ///< max(0, −λ_min(Λ))
  double complementarity = 0.0;  ///< ‖X(x)Λ‖_F
};

KktResiduals kkt_residuals(const NsdpProblem& prob, const Vec& x, const SymMat& lambda);

/// Multipliers scaled by 1/(1 + μ‖X⁻¹‖_F + ‖Z‖_F), which stay bounded even
/// when Λ blows up.
struct FjScaled {
  double lambda_k = 1.0;
  SymMat omega_k;
  double scale = 1.0;
  /// ‖λ_k ∇f(x) − A*(x)Ω_k‖.
  double scaled_stationarity = 0.0;
};

FjScaled fj_scaled_multipliers(const NsdpProblem& prob, const Iterate& it, const MeritParams& p);

/// ∇²_xx L(x, Λ) = ∇²f(x) − [tr(Λ ∂²X/∂x_i∂x_j)].
SymMat lagrangian_hessian(const NsdpProblem& prob, const Vec& x, const SymMat& lambda);

/// Ĥ_ij = 2 tr(A_i X† A_j Λ) with X† zeroing eigenvalues ≤ rank_tol·λ_max.
SymMat sigma_term(const NsdpProblem& prob, const Vec& x, const SymMat& lambda,
                  double rank_tol = kDefaultRankTol);

struct WsospCheck {
  /// λ_min(Bᵀ(∇²L + Ĥ)B); +∞ when the subspace is {0}.
  double min_restricted_curvature = 0.0;
  Index subspace_dim = 0;
};

/// Curvature of ∇²L + Ĥ on the subspace {d : U_pᵀ ΔX(d) U_q = 0 for all p ≤ q},
/// U spanning the numerical kernel of X(x). The whole space when X(x) has
/// no kernel.
WsospCheck wsosp_curvature_check(const NsdpProblem& prob, const Vec& x, const SymMat& lambda,
                                 double rank_tol = kDefaultRankTol);

}  // namespace ncsdp
