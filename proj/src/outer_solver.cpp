#include "ncsdp/outer_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ncsdp/error.hpp"

namespace ncsdp {

std::string_view to_string(OuterStatus s) {
  switch (s) {
    case OuterStatus::kConverged: return "Converged";
    case OuterStatus::kPartialProgress: return "PartialProgress";
    case OuterStatus::kBudgetExhausted: return "BudgetExhausted";
  }
  return "Unknown";
}

void Schedule::validate() const {
  require(std::isfinite(mu_init) && mu_init > 0.0, ErrorKind::kInvalidInput,
          "mu_init must be finite and > 0");
  require(mu_update && nu_of_mu && eps_g_of_mu && eps_mu_of_mu && eps_H_of_mu,
          ErrorKind::kInvalidInput, "schedule has an unset function");
  require(mu_min >= 0.0 && std::isfinite(mu_min), ErrorKind::kInvalidInput, "mu_min must be >= 0");
  require(max_outer_iters >= 1, ErrorKind::kInvalidInput, "max_outer_iters must be >= 1");
  const std::function<double(double)>* fns[] = {&nu_of_mu, &eps_g_of_mu, &eps_mu_of_mu,
                                                 &eps_H_of_mu};
  const char* names[] = {"nu", "eps_g", "eps_mu", "eps_H"};
  const double samples[] = {0.3, 0.1, 0.01, 1e-4};
  for (double mu : samples) {
    const double next = mu_update(mu);
    require(std::isfinite(next) && next > 0.0 && next < mu, ErrorKind::kInvalidInput,
            "mu_update must map mu into (0, mu)");
  }
  for (int f = 0; f < 4; ++f) {
    double prev = std::numeric_limits<double>::infinity();
    for (double mu : samples) {
      const double v = (*fns[f])(mu);
      require(std::isfinite(v) && v > 0.0, ErrorKind::kInvalidInput,
              std::string(names[f]) + "(mu) must be finite and > 0");
      require(v < prev, ErrorKind::kInvalidInput,
              std::string(names[f]) + "(mu) must decrease with mu");
      prev = v;
    }
  }
}

Schedule default_schedule() {
  Schedule s;
  s.mu_init = 0.3;
  s.mu_update = [](double mu) { return std::min(0.8 * mu, 10.0 * std::pow(mu, 1.5)); };
  s.nu_of_mu = [](double mu) { return std::pow(mu, 0.1); };
  s.eps_g_of_mu = [](double mu) { return mu; };
  s.eps_mu_of_mu = [](double mu) { return std::pow(mu, 1.2); };
  s.eps_H_of_mu = [](double mu) { return mu; };
  s.mu_min = 1e-8;
  s.max_outer_iters = 60;
  return s;
}

namespace {

OuterRecord make_record(const NsdpProblem& prob, int k, const IpmParams& params,
                        InnerResult& inner) {
  const Iterate& it = inner.final;
  const MeritParams mp = params.merit();
  OuterRecord rec;
  rec.k = k;
  rec.mu = params.mu;
  rec.nu = params.nu;
  rec.eps_g = params.eps_g;
  rec.eps_mu = params.eps_mu;
  rec.eps_H = params.eps_H;
  rec.inner_iters = static_cast<int>(inner.trace.size());
  for (const StepRecord& s : inner.trace) {
    switch (s.procedure) {
      case Procedure::kDualGrad: ++rec.dual_steps; break;
      case Procedure::kPrimalGrad: ++rec.primal_steps; break;
      case Procedure::kNegCurvature: ++rec.negcurv_steps; break;
      default: break;
    }
  }
  rec.inner_status = inner.status;
  rec.check = inner.final_check;
  rec.merit = merit_value(prob, it, mp);
  rec.f = prob.eval_f(it.x());
  const SymMat lambda = lambda_surrogate(it, mp);
  rec.kkt = kkt_residuals(prob, it.x(), lambda);
  rec.fj = fj_scaled_multipliers(prob, it, mp);
  rec.central_path_gap = (params.mu * it.X_inv() - it.Z()).frobenius_norm();
  rec.lambda_z_gap = (lambda - it.Z()).frobenius_norm();
  rec.eps_mu_ratio = params.nu > 0.0 ? params.eps_mu / (params.nu * params.mu)
                                     : std::numeric_limits<double>::infinity();
  rec.x = it.x();
  rec.Z = it.Z();
  rec.steps = std::move(inner.trace);
  return rec;
}

}  // namespace

OuterResult run_outer(const NsdpProblem& prob, const Iterate& start, const Schedule& schedule,
                      const IpmParams& ipm_base, const ScalingOps& scaling,
                      const OuterOptions& options, const OuterStepObserver& observer) {
  schedule.validate();
  if (options.fixed_nu) {
    require(std::isfinite(*options.fixed_nu) && *options.fixed_nu >= 0.0,
            ErrorKind::kInvalidInput, "fixed nu must be finite and >= 0");
  }
  if (options.z_resync) {
    require(options.fixed_nu && *options.fixed_nu == 0.0, ErrorKind::kInvalidInput,
            "Z resync requires nu fixed at 0");
  }
  if (options.total_inner_budget) {
    require(*options.total_inner_budget >= 0, ErrorKind::kInvalidInput,
            "inner budget must be >= 0");
  }

  OuterResult result{start, {}, OuterStatus::kConverged, {}};
  Iterate current = start;
  double mu = schedule.mu_init;
  long used = 0;

  for (int k = 1; k <= schedule.max_outer_iters; ++k) {
    const double mu_next = schedule.mu_update(mu);
    if (mu_next <= schedule.mu_min) break;

    IpmParams params = ipm_base;
    params.mu = mu_next;
    params.nu = options.fixed_nu ? *options.fixed_nu : schedule.nu_of_mu(mu_next);
    params.eps_g = schedule.eps_g_of_mu(mu_next);
    params.eps_mu = schedule.eps_mu_of_mu(mu_next);
    params.eps_H = schedule.eps_H_of_mu(mu_next);
    bool budget_bound = false;
    if (options.total_inner_budget) {
      const long remaining = *options.total_inner_budget - used;
      if (remaining <= 0) {
        result.status = OuterStatus::kBudgetExhausted;
        result.diagnostic = "total inner-step budget exhausted";
        break;
      }
      if (remaining < static_cast<long>(params.max_inner_iters)) {
        params.max_inner_iters = static_cast<int>(remaining);
        budget_bound = true;
      }
    }

    if (options.z_resync) {
      auto synced = current.with_Z(params.mu * current.X_inv());
      require(synced.has_value(), ErrorKind::kNumericalFailure, "mu X^-1 is not positive definite");
      current = *std::move(synced);
    }

    StepObserver inner_observer;
    if (observer) {
      inner_observer = [&observer, &params, k](const Iterate& b, const Iterate& a,
                                               const StepRecord& r) { observer(k, params, b, a, r); };
    }
    InnerResult inner =
        detail::run_inner_loop(prob, current, params, scaling, inner_observer, options.z_resync);
    used += static_cast<long>(inner.trace.size());
    current = inner.final;
    const InnerStatus status = inner.status;
    std::string diagnostic = inner.diagnostic;
    result.trace.push_back(make_record(prob, k, params, inner));
    mu = mu_next;

    if (status == InnerStatus::kIterLimit) {
      result.status = budget_bound ? OuterStatus::kBudgetExhausted : OuterStatus::kPartialProgress;
      result.diagnostic = budget_bound ? "total inner-step budget exhausted"
                                       : "inner solve reached its iteration cap";
      break;
    }
    if (status == InnerStatus::kLineSearchStall) {
      result.status = OuterStatus::kPartialProgress;
      result.diagnostic = diagnostic;
      break;
    }
  }
  result.final = std::move(current);
  return result;
}

}  // namespace ncsdp
