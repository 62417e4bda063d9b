#include "ncsdp/primal.hpp"

#include <cmath>

#include "ncsdp/error.hpp"

namespace ncsdp {

Iterate central_iterate(const NsdpProblem& prob, const Vec& x, double mu) {
  require(std::isfinite(mu) && mu > 0.0, ErrorKind::kInvalidInput, "mu must be > 0");
  const Iterate base = Iterate::create(prob, x, SymMat::identity(prob.matrix_order()));
  auto it = base.with_Z(mu * base.X_inv());
  require(it.has_value(), ErrorKind::kNumericalFailure, "mu X^-1 is not positive definite");
  return *std::move(it);
}

InnerResult run_inner_primal(const NsdpProblem& prob, const Vec& start_x, const IpmParams& params,
                             const ScalingOps& scaling, const StepObserver& observer) {
  require(params.nu == 0.0, ErrorKind::kInvalidInput, "primal method requires nu = 0");
  return detail::run_inner_loop(prob, central_iterate(prob, start_x, params.mu), params, scaling,
                                observer, true);
}

OuterResult run_outer_primal(const NsdpProblem& prob, const Vec& start_x,
                             const Schedule& schedule, const IpmParams& ipm_base,
                             const ScalingOps& scaling, std::optional<long> total_inner_budget,
                             const OuterStepObserver& observer) {
  OuterOptions options;
  options.fixed_nu = 0.0;
  options.z_resync = true;
  options.total_inner_budget = total_inner_budget;
  return run_outer(prob, central_iterate(prob, start_x, schedule.mu_init), schedule, ipm_base,
                   scaling, options, observer);
}

}  // namespace ncsdp
