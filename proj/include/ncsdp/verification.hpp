#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ncsdp/inner_solver.hpp"
#include "ncsdp/iterate.hpp"
#include "ncsdp/merit.hpp"
#include "ncsdp/problem.hpp"
#include "ncsdp/rng.hpp"

namespace ncsdp {

struct PropertyCheck {
  std::string name;
  long samples = 0;
  long violations = 0;
  /// Largest observed error ratio (≤ 1 means within tolerance) or raw error.
  double worst = 0.0;

  bool passed() const { return samples > 0 && violations == 0; }
};

struct VerificationReport {
  std::vector<PropertyCheck> checks;

  bool all_passed() const;
};

/// Random strictly interior iterates: x = center + U(−radius, radius)ⁿ,
/// Z = WWᵀ/m + 0.1·I with W uniform on [−1, 1). Non-interior draws are skipped.
std::vector<Iterate> sample_interior_iterates(const NsdpProblem& prob, const Vec& center,
                                              double radius, int count, SplitMix64& rng);

/// Central differences of f and ∇f against ∇f and ∇²f; error ratio
/// ‖fd − analytic‖ / (tol·(1 + ‖analytic‖)).
PropertyCheck check_problem_derivatives(const NsdpProblem& prob, const std::vector<Iterate>& points,
                                        double tol);

/// Central differences of ψ against ∇_xψ, ∇_Zψ, and of ∇_xψ against ∇²_xxψ.
std::vector<PropertyCheck> check_merit_derivatives(const NsdpProblem& prob,
                                                   const std::vector<Iterate>& points,
                                                   const MeritParams& p, double tol_grad,
                                                   double tol_hess);

/// ∇_xψ = ∇f − A*(Λ) and ∇²ψ = ∇²L + (1+ν)μ[tr(A_iX⁻¹A_jX⁻¹)], relative to tol.
PropertyCheck check_surrogate_identities(const NsdpProblem& prob, const std::vector<Iterate>& points,
                                         const MeritParams& p, double tol);

/// Samples probes inside the neighbourhoods ‖x − x_ℓ‖ ≤ λ_min(X_ℓ)/(2L0),
/// ‖Z − Z_ℓ‖_F ≤ λ_min(Z_ℓ)/2 and checks the X⁻¹, ∇_xψ, ∇_Zψ and ∇²_xxψ
/// Lipschitz bounds. Needs all constants.
std::vector<PropertyCheck> check_local_lipschitz(const NsdpProblem& prob,
                                                 const std::vector<Iterate>& anchors,
                                                 const MeritParams& p, int probes_per_anchor,
                                                 SplitMix64& rng);

/// Observer that audits every inner step: strict interiority, step caps,
/// eigenvalue sandwich after x-steps, merit monotonicity and, in fixed mode,
/// decrease ≥ guaranteed σ. Slack is rel_slack·max(1, |ψ|).
class StepAuditor {
 public:
  explicit StepAuditor(const NsdpProblem& prob, double rel_slack = 1e-12);

  void observe(const IpmParams& params, const Iterate& before, const Iterate& after,
               const StepRecord& record);
  StepObserver observer(const IpmParams& params);

  std::vector<PropertyCheck> checks() const;
  long steps() const { return interiority_.samples; }

 private:
  const NsdpProblem& prob_;
  double rel_slack_;
  PropertyCheck interiority_{"interiority", 0, 0, 0.0};
  PropertyCheck caps_{"step_caps", 0, 0, 0.0};
  PropertyCheck sandwich_{"eigenvalue_sandwich", 0, 0, 0.0};
  PropertyCheck monotone_{"merit_monotone", 0, 0, 0.0};
  PropertyCheck decrease_{"guaranteed_decrease", 0, 0, 0.0};
};

/// Wraps a problem and adds `offset` to every gradient entry (negative control).
std::unique_ptr<NsdpProblem> corrupt_gradient(const NsdpProblem& base, double offset);

}  // namespace ncsdp
