#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "ncsdp/certificates.hpp"
#include "ncsdp/inner_solver.hpp"

namespace ncsdp {

/// Barrier schedule: μ and the functions of μ that set ν and the tolerances.
struct Schedule {
  double mu_init = 0.3;
  std::function<double(double)> mu_update;
  std::function<double(double)> nu_of_mu;
  std::function<double(double)> eps_g_of_mu;
  std::function<double(double)> eps_mu_of_mu;
  std::function<double(double)> eps_H_of_mu;
  double mu_min = 1e-8;
  int max_outer_iters = 60;

  /// Samples μ ∈ {0.3, 0.1, 0.01, 1e-4}: every sequence finite, positive and
  /// decreasing, and mu_update(μ) ∈ (0, μ). Throws InvalidInput otherwise.
  void validate() const;
};

/// μ₁ = 0.3, μ⁺ = min(0.8μ, 10μ^1.5), ν = μ^0.1, ε_g = ε_H = μ, ε_μ = μ^1.2,
/// mu_min = 1e-8, 60 outer iterations.
Schedule default_schedule();

enum class OuterStatus {
  kConverged,
  /// An inner solve hit its iteration cap or stalled; the trace is intact.
  kPartialProgress,
  /// The shared inner-step budget ran out.
  kBudgetExhausted,
};

std::string_view to_string(OuterStatus s);

struct OuterOptions {
  /// Pins ν for every outer iteration instead of reading ν(μ).
  std::optional<double> fixed_nu;
  /// Keeps Z = μX⁻¹ after every x-update and skips the dual procedure; needs ν = 0.
  bool z_resync = false;
  /// Cap on inner steps summed over all outer iterations.
  std::optional<long> total_inner_budget;
};

struct OuterRecord {
  int k = 0;
  double mu = 0.0;
  double nu = 0.0;
  double eps_g = 0.0;
  double eps_mu = 0.0;
  double eps_H = 0.0;
  int inner_iters = 0;
  int dual_steps = 0;
  int primal_steps = 0;
  int negcurv_steps = 0;
  InnerStatus inner_status = InnerStatus::kIterLimit;
  EpsCheck check;
  double merit = 0.0;
  double f = 0.0;
  KktResiduals kkt;
  FjScaled fj;
  double central_path_gap = 0.0;  ///< ‖μX⁻¹ − Z‖_F
  double lambda_z_gap = 0.0;      ///< ‖Λ − Z‖_F
  double eps_mu_ratio = 0.0;      ///< ε_μ/(νμ); +∞ when ν = 0
  Vec x;
  SymMat Z;
  std::vector<StepRecord> steps;
};

struct OuterResult {
  Iterate final;
  std::vector<OuterRecord> trace;
  OuterStatus status = OuterStatus::kConverged;
  std::string diagnostic;
};

using OuterStepObserver = std::function<void(int k, const IpmParams& params, const Iterate& before,
                                             const Iterate& after, const StepRecord& record)>;

/// Path-following loop: for k = 1, 2, … sets μ_{k+1} from the schedule, stops
/// if μ_{k+1} ≤ mu_min, otherwise runs the inner method at (μ_{k+1}, ν, ε)
/// warm-started from the previous output. ipm_base supplies the remaining
/// parameters (scalings bounds, step mode, order, iteration cap).
OuterResult run_outer(const NsdpProblem& prob, const Iterate& start, const Schedule& schedule,
                      const IpmParams& ipm_base, const ScalingOps& scaling,
                      const OuterOptions& options = {}, const OuterStepObserver& observer = {});

}  // namespace ncsdp
