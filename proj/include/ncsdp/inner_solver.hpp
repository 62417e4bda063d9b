#pragma once

#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ncsdp/iterate.hpp"
#include "ncsdp/merit.hpp"
#include "ncsdp/problem.hpp"

namespace ncsdp {

enum class Procedure { kDualGrad, kPrimalGrad, kNegCurvature, kTerminated };

std::string_view to_string(Procedure p);

/// Step sizes from the local Lipschitz constants; needs L0, L1, L2.
struct FixedLipschitz {};

/// Backtracking from the interiority-preserving cap until the merit decrease
/// meets the per-procedure target. Unknown L0 is replaced by 1 in the cap.
struct Backtracking {
  double beta = 0.5;
  /// Search fails once α < alpha_floor_rel · α₀.
  double alpha_floor_rel = 1e-16;
};

using StepMode = std::variant<Backtracking, FixedLipschitz>;

struct IpmParams {
  double mu = 0.1;
  double nu = 1.0;
  double eps_g = 1e-3;
  double eps_mu = 1e-3;
  double eps_H = 1e-3;
  double h_min = 1.0;
  double h_max = 1.0;
  double kappa_min = 1.0;
  double kappa_max = 1.0;
  int max_inner_iters = 10000;
  StepMode step_mode = Backtracking{};
  /// Order in which the three triggers are tested; must be a permutation.
  std::array<Procedure, 3> order{Procedure::kDualGrad, Procedure::kPrimalGrad,
                                 Procedure::kNegCurvature};
  /// false disables Procedure 3 (first-order ablation).
  bool negative_curvature = true;

  MeritParams merit() const { return {mu, nu}; }
  bool fixed_mode() const { return std::holds_alternative<FixedLipschitz>(step_mode); }
  /// Throws InvalidInput on bad values, ConstantsRequired for fixed mode
  /// without all three constants.
  void validate(const LipschitzConstants& constants) const;
};

/// Scaling operators: H_x is SPD with spectrum in [h_min, h_max]; H_Z is a
/// symmetric operator on 𝕊^m with ⟨D, H_Z(D)⟩ ∈ [κ_min, κ_max] on the unit sphere.
struct ScalingOps {
  std::function<Vec(const Vec&)> H_x;
  std::function<SymMat(const SymMat&)> H_Z;

  static ScalingOps identity();
};

/// Left-hand sides of the ε-SOSP(μ,ν) inequalities divided by their scale
/// factors:
///   r_g  = ‖∇_xψ‖ / (1 + μ‖X⁻¹‖_F + ‖Z‖_F)          (compare with  ε_g)
///   r_mu = ‖∇_Zψ‖_F / (1 + μ‖Z⁻¹‖_F)                (compare with  ε_μ)
///   r_H  = λ_min(∇²_xxψ) / (1 + μ‖X⁻¹‖_F + ‖Z‖_F)²   (compare with −ε_H)
/// r_H is NaN when the Hessian was not evaluated.
struct EpsResiduals {
  double r_g = std::numeric_limits<double>::quiet_NaN();
  double r_mu = std::numeric_limits<double>::quiet_NaN();
  double r_H = std::numeric_limits<double>::quiet_NaN();
};

struct EpsCheck {
  bool stationarity = false;
  bool complementarity = false;
  /// Empty when the Hessian was skipped because a first-order test failed.
  std::optional<bool> second_order;
  EpsResiduals residuals;
  double scale_x = 1.0;
  double scale_Z = 1.0;

  bool satisfied() const { return stationarity && complementarity && second_order.value_or(false); }
};

/// Evaluates the three conditions lazily: the Hessian only if the first two hold.
EpsCheck check_eps_sosp(const NsdpProblem& prob, const Iterate& it, const IpmParams& params);

struct StepRecord {
  int iter = 0;
  Procedure procedure = Procedure::kTerminated;
  double alpha = 0.0;
  double merit_before = 0.0;
  double merit_after = 0.0;
  double f_after = 0.0;
  /// σ₁/σ₂/σ₃ lower bound on the decrease; NaN outside fixed mode.
  double guaranteed_sigma = std::numeric_limits<double>::quiet_NaN();
  /// Decrease target evaluated at the accepted α (Backtracking) or the
  /// intermediate descent bound (fixed mode).
  double target_decrease = 0.0;
  EpsResiduals residuals;
  /// ‖x⁺ − x‖ or ‖Z⁺ − Z‖_F.
  double step_norm = 0.0;
  /// λ_min(X_ℓ)/(2L0) or λ_min(Z_ℓ)/2.
  double step_cap = 0.0;
  double L0_used = std::numeric_limits<double>::quiet_NaN();
  int backtracks = 0;
};

struct StepResult {
  Iterate next;
  StepRecord record;
};

/// Procedure 1: scaled gradient step in Z. Requires the complementarity trigger.
StepResult update1_dual(const NsdpProblem& prob, const Iterate& it, const IpmParams& params,
                        const ScalingOps& scaling);
/// Procedure 2: scaled gradient step in x. Requires the stationarity trigger.
StepResult update2_primal(const NsdpProblem& prob, const Iterate& it, const IpmParams& params,
                          const ScalingOps& scaling);
/// Procedure 3: unit eigenvector of λ_min(∇²_xxψ), oriented downhill.
StepResult update3_negcurv(const NsdpProblem& prob, const Iterate& it, const IpmParams& params);

struct LineSearchResult {
  double alpha = 0.0;
  double trial_value = 0.0;
  double target = 0.0;
  int backtracks = 0;
};

/// Largest α in {α₀ βʲ} with current − trial(α) ≥ target(α) and a strictly
/// interior trial (trial returns nullopt otherwise). nullopt once α < alpha_floor.
std::optional<LineSearchResult> backtrack_step(
    double current_value, const std::function<std::optional<double>(double)>& trial_value,
    double alpha0, const std::function<double(double)>& target_decrease, double beta,
    double alpha_floor);

// Guaranteed per-step decreases in fixed mode. Terms with a zero denominator
// are +∞.
double sigma_primal(const IpmParams& params, double L0, double L1);
double sigma_dual(const IpmParams& params);
double sigma_negcurv(const IpmParams& params, double L0, double L1, double L2);

enum class InnerStatus {
  kConverged,
  /// Negative curvature disabled: first-order conditions hold.
  kConvergedFirstOrder,
  kIterLimit,
  kLineSearchStall,
};

std::string_view to_string(InnerStatus s);

struct InnerResult {
  Iterate final;
  std::vector<StepRecord> trace;
  InnerStatus status = InnerStatus::kIterLimit;
  EpsCheck final_check;
  std::string diagnostic;
};

using StepObserver =
    std::function<void(const Iterate& before, const Iterate& after, const StepRecord& record)>;

InnerResult run_inner(const NsdpProblem& prob, const Iterate& start, const IpmParams& params,
                      const ScalingOps& scaling, const StepObserver& observer = {});

namespace detail {

/// Shared loop for the primal-dual and primal methods. In primal mode ν must
/// be 0, Procedure 1 is skipped and Z is reset to μX⁻¹ after every x-update.
InnerResult run_inner_loop(const NsdpProblem& prob, const Iterate& start, const IpmParams& params,
                           const ScalingOps& scaling, const StepObserver& observer,
                           bool primal_mode);

}  // namespace detail

}  // namespace ncsdp
