#pragma once

#include <optional>

#include "ncsdp/inner_solver.hpp"
#include "ncsdp/outer_solver.hpp"

namespace ncsdp {

/// Iterate (x, μX(x)⁻¹). Throws DomainViolation unless X(x) ≻ 0.
Iterate central_iterate(const NsdpProblem& prob, const Vec& x, double mu);

/// Primal barrier method: ν = 0, only the primal-gradient and
/// negative-curvature procedures, Z reset to μX⁻¹ after every x-update.
/// params.nu must be 0.
InnerResult run_inner_primal(const NsdpProblem& prob, const Vec& start_x, const IpmParams& params,
                             const ScalingOps& scaling, const StepObserver& observer = {});

/// Outer loop of the primal method: run_outer with ν ≡ 0 and Z resynced.
OuterResult run_outer_primal(const NsdpProblem& prob, const Vec& start_x,
                             const Schedule& schedule, const IpmParams& ipm_base,
                             const ScalingOps& scaling,
                             std::optional<long> total_inner_budget = std::nullopt,
                             const OuterStepObserver& observer = {});

}  // namespace ncsdp
