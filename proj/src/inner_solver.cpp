#include "ncsdp/inner_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ncsdp/error.hpp"

namespace ncsdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ratio_or_inf(double num, double den) { return den > 0.0 ? num / den : kInf; }

/// Merit data at one point, shared by the trigger tests and the updates.
struct PointEval {
  MeritEval merit;
  double scale_x = 1.0;
  double scale_Z = 1.0;
  double grad_x_norm = 0.0;
  double grad_Z_norm = 0.0;
  std::optional<Spectrum> hess_spectrum;
};

PointEval evaluate_point(const NsdpProblem& prob, const Iterate& it, const IpmParams& params) {
  PointEval pe;
  pe.merit = evaluate_merit(prob, it, params.merit(), false);
  pe.scale_x = 1.0 + params.mu * it.X_inv().frobenius_norm() + it.Z().frobenius_norm();
  pe.scale_Z = 1.0 + params.mu * it.Z_inv().frobenius_norm();
  pe.grad_x_norm = pe.merit.grad_x.norm();
  pe.grad_Z_norm = pe.merit.grad_Z.frobenius_norm();
  return pe;
}

void ensure_hessian(const NsdpProblem& prob, const Iterate& it, const IpmParams& params,
                    PointEval& pe) {
  if (pe.hess_spectrum) return;
  pe.merit.hess_xx = merit_hess_xx(prob, it, params.merit(), prob.eval_all_Ai(it.x()),
                                   pe.merit.lambda);
  pe.hess_spectrum = spectral_decompose(*pe.merit.hess_xx);
}

bool dual_trigger(const IpmParams& params, const PointEval& pe) {
  return pe.grad_Z_norm > params.eps_mu * pe.scale_Z;
}

bool primal_trigger(const IpmParams& params, const PointEval& pe) {
  return pe.grad_x_norm > params.eps_g * pe.scale_x;
}

bool negcurv_trigger(const IpmParams& params, const PointEval& pe) {
  return pe.hess_spectrum->min() < -params.eps_H * pe.scale_x * pe.scale_x;
}

EpsResiduals residuals_of(const PointEval& pe) {
  EpsResiduals r;
  r.r_g = pe.grad_x_norm / pe.scale_x;
  r.r_mu = pe.grad_Z_norm / pe.scale_Z;
  if (pe.hess_spectrum) r.r_H = pe.hess_spectrum->min() / (pe.scale_x * pe.scale_x);
  return r;
}

EpsCheck check_from(const IpmParams& params, const PointEval& pe) {
  EpsCheck c;
  c.complementarity = !dual_trigger(params, pe);
  c.stationarity = !primal_trigger(params, pe);
  if (pe.hess_spectrum) c.second_order = !negcurv_trigger(params, pe);
  c.residuals = residuals_of(pe);
  c.scale_x = pe.scale_x;
  c.scale_Z = pe.scale_Z;
  return c;
}

double cap_L0(const IpmParams& params, const LipschitzConstants& c) {
  if (params.fixed_mode()) {
    require(c.L0.has_value(), ErrorKind::kConstantsRequired, "fixed step mode needs L0");
    return *c.L0;
  }
  return c.L0.value_or(1.0);
}

// Backtracking on the achieved decrease directly, so callers can supply a
// cancellation-free formula instead of a difference of merit values.
std::optional<LineSearchResult> backtrack_decrease(
    const std::function<std::optional<double>(double)>& decrease, double alpha0,
    const std::function<double(double)>& target_decrease, double beta, double alpha_floor) {
  require(alpha0 > 0.0 && std::isfinite(alpha0), ErrorKind::kInvalidInput,
          "backtracking needs a finite alpha0 > 0");
  require(beta > 0.0 && beta < 1.0, ErrorKind::kInvalidInput, "beta must lie in (0,1)");
  double alpha = alpha0;
  for (int j = 0; alpha >= alpha_floor; ++j, alpha *= beta) {
    const std::optional<double> dec = decrease(alpha);
    if (!dec || !std::isfinite(*dec)) continue;
    const double target = target_decrease(alpha);
    if (*dec >= target) return LineSearchResult{alpha, *dec, target, j};
  }
  return std::nullopt;
}

// log1p(t) − t without cancellation for small |t|.
double log1p_minus_id(double t) {
  if (std::abs(t) < 1e-4) {
    const double t2 = t * t;
    return -t2 / 2.0 + t2 * t / 3.0 - t2 * t2 / 4.0;
  }
  return std::log1p(t) - t;
}

[[noreturn]] void stall(const char* what, double alpha0) {
  fail(ErrorKind::kLineSearchStall,
       std::string(what) + ": no acceptable step above the floor (alpha0 = " +
           std::to_string(alpha0) + ")");
}

StepResult dual_step(const NsdpProblem& prob, const Iterate& it, const IpmParams& params,
                     const ScalingOps& scaling, const PointEval& pe) {
  require(params.nu > 0.0, ErrorKind::kPreconditionViolated,
          "Procedure 1 cannot run with nu = 0 (grad_Z vanishes identically)");
  require(dual_trigger(params, pe), ErrorKind::kPreconditionViolated,
          "Procedure 1 trigger does not hold");
  const MeritParams mp = params.merit();
  const SymMat& g = pe.merit.grad_Z;
  const SymMat d = -(params.kappa_min / (params.kappa_max * params.kappa_max)) * scaling.H_Z(g);
  const double dn = d.frobenius_norm();
  require(dn > 0.0, ErrorKind::kNumericalFailure, "Procedure 1 produced a zero direction");
  const double cap = it.lambda_min_Z() / 2.0;
  const double gain = params.kappa_min * params.kappa_min /
                      (2.0 * params.kappa_max * params.kappa_max) * pe.grad_Z_norm *
                      pe.grad_Z_norm;
  auto target = [gain](double a) { return a * gain; };

  StepRecord rec;
  rec.procedure = Procedure::kDualGrad;
  rec.merit_before = pe.merit.value;
  rec.step_cap = cap;

  // ψ(x, Z + αD) − ψ(x, Z) = α⟨∇_Zψ, D⟩ − νμ Σ (log1p(αw_i) − αw_i) with
  // w = eig(Z^{-1/2} D Z^{-1/2}); the plain difference of merit values loses
  // all digits once the decrease drops below ulp(ψ).
  const Spectrum& zs = it.Z_spectrum();
  const Mat z_isqrt = zs.eigenvectors * zs.eigenvalues.cwiseInverse().cwiseSqrt().asDiagonal() *
                      zs.eigenvectors.transpose();
  const Vec w = spectral_decompose(SymMat(Mat(z_isqrt * d.matrix() * z_isqrt))).eigenvalues;
  const double slope = inner(g, d);
  auto decrease_at = [&](double a) {
    double curv = 0.0;
    for (Index i = 0; i < w.size(); ++i) curv += log1p_minus_id(a * w(i));
    return -a * slope + params.nu * params.mu * curv;
  };

  std::optional<Iterate> next;
  double decrease = 0.0;
  if (params.fixed_mode()) {
    const double lz = local_lipschitz_Z(it, mp);
    rec.alpha = std::min(ratio_or_inf(1.0, lz), cap / dn);
    next = it.with_Z(it.Z() + rec.alpha * d);
    require(next.has_value(), ErrorKind::kNumericalFailure, "Procedure 1 left the interior");
    decrease = decrease_at(rec.alpha);
    rec.guaranteed_sigma = sigma_dual(params);
    rec.target_decrease = target(rec.alpha);
  } else {
    const auto& bt = std::get<Backtracking>(params.step_mode);
    const double alpha0 = cap / dn;
    std::optional<Iterate> trial_it;
    auto trial = [&](double a) -> std::optional<double> {
      if (1.0 + a * w.minCoeff() <= 0.0) return std::nullopt;
      trial_it = it.with_Z(it.Z() + a * d);
      if (!trial_it) return std::nullopt;
      return decrease_at(a);
    };
    auto ls = backtrack_decrease(trial, alpha0, target, bt.beta, bt.alpha_floor_rel * alpha0);
    if (!ls) stall("Procedure 1", alpha0);
    rec.alpha = ls->alpha;
    decrease = ls->trial_value;
    rec.target_decrease = ls->target;
    rec.backtracks = ls->backtracks;
    next = std::move(trial_it);
  }
  rec.merit_after = pe.merit.value - decrease;
  rec.step_norm = rec.alpha * dn;
  rec.f_after = prob.eval_f(next->x());
  return {*std::move(next), rec};
}

StepResult primal_step(const NsdpProblem& prob, const Iterate& it, const IpmParams& params,
                       const ScalingOps& scaling, const PointEval& pe) {
  require(primal_trigger(params, pe), ErrorKind::kPreconditionViolated,
          "Procedure 2 trigger does not hold");
  const LipschitzConstants c = prob.lipschitz();
  const double L0 = cap_L0(params, c);
  const MeritParams mp = params.merit();
  const Vec& g = pe.merit.grad_x;
  const Vec d = -(params.h_min / (params.h_max * params.h_max)) * scaling.H_x(g);
  const double dn = d.norm();
  require(dn > 0.0, ErrorKind::kNumericalFailure, "Procedure 2 produced a zero direction");
  const double cap = it.lambda_min_X() / (2.0 * L0);
  const double gain = params.h_min * params.h_min / (2.0 * params.h_max * params.h_max) *
                      pe.grad_x_norm * pe.grad_x_norm;
  auto target = [gain](double a) { return a * gain; };

  StepRecord rec;
  rec.procedure = Procedure::kPrimalGrad;
  rec.merit_before = pe.merit.value;
  rec.step_cap = cap;
  rec.L0_used = L0;

  std::optional<Iterate> next;
  if (params.fixed_mode()) {
    require(c.L1.has_value(), ErrorKind::kConstantsRequired, "fixed step mode needs L1");
    const double lx = local_lipschitz_x(it, mp, L0, *c.L1);
    rec.alpha = std::min(cap / dn, ratio_or_inf(1.0, lx));
    next = it.with_x(prob, it.x() + rec.alpha * d);
    require(next.has_value(), ErrorKind::kNumericalFailure, "Procedure 2 left the interior");
    rec.merit_after = merit_value(prob, *next, mp);
    rec.guaranteed_sigma = sigma_primal(params, L0, *c.L1);
    rec.target_decrease = target(rec.alpha);
  } else {
    const auto& bt = std::get<Backtracking>(params.step_mode);
    const double alpha0 = cap / dn;
    std::optional<Iterate> trial_it;
    auto trial = [&](double a) -> std::optional<double> {
      trial_it = it.with_x(prob, it.x() + a * d);
      if (!trial_it) return std::nullopt;
      return merit_value(prob, *trial_it, mp);
    };
    auto ls = backtrack_step(pe.merit.value, trial, alpha0, target, bt.beta,
                             bt.alpha_floor_rel * alpha0);
    if (!ls) stall("Procedure 2", alpha0);
    rec.alpha = ls->alpha;
    rec.merit_after = ls->trial_value;
    rec.target_decrease = ls->target;
    rec.backtracks = ls->backtracks;
    next = std::move(trial_it);
  }
  rec.step_norm = rec.alpha * dn;
  rec.f_after = prob.eval_f(next->x());
  return {*std::move(next), rec};
}

StepResult negcurv_step(const NsdpProblem& prob, const Iterate& it, const IpmParams& params,
                        const PointEval& pe) {
  require(negcurv_trigger(params, pe), ErrorKind::kPreconditionViolated,
          "Procedure 3 trigger does not hold");
  const LipschitzConstants c = prob.lipschitz();
  const double L0 = cap_L0(params, c);
  const MeritParams mp = params.merit();
  const double lam = pe.hess_spectrum->min();
  Vec d = pe.hess_spectrum->min_vector();
  d.normalize();
  if (d.dot(pe.merit.grad_x) > 0.0) d = -d;
  const double cap = it.lambda_min_X() / (2.0 * L0);
  auto target = [lam](double a) { return -a * a * lam / 6.0; };

  StepRecord rec;
  rec.procedure = Procedure::kNegCurvature;
  rec.merit_before = pe.merit.value;
  rec.step_cap = cap;
  rec.L0_used = L0;

  std::optional<Iterate> next;
  if (params.fixed_mode()) {
    require(c.all_known(), ErrorKind::kConstantsRequired, "fixed step mode needs L0, L1, L2");
    const double lxx = local_lipschitz_xx(it, mp, L0, *c.L1, *c.L2);
    rec.alpha = std::min(ratio_or_inf(-2.0 * lam, lxx), cap);
    next = it.with_x(prob, it.x() + rec.alpha * d);
    require(next.has_value(), ErrorKind::kNumericalFailure, "Procedure 3 left the interior");
    rec.merit_after = merit_value(prob, *next, mp);
    rec.guaranteed_sigma = sigma_negcurv(params, L0, *c.L1, *c.L2);
    rec.target_decrease = target(rec.alpha);
  } else {
    const auto& bt = std::get<Backtracking>(params.step_mode);
    const double alpha0 = cap;
    std::optional<Iterate> trial_it;
    auto trial = [&](double a) -> std::optional<double> {
      trial_it = it.with_x(prob, it.x() + a * d);
      if (!trial_it) return std::nullopt;
      return merit_value(prob, *trial_it, mp);
    };
    auto ls = backtrack_step(pe.merit.value, trial, alpha0, target, bt.beta,
                             bt.alpha_floor_rel * alpha0);
    if (!ls) stall("Procedure 3", alpha0);
    rec.alpha = ls->alpha;
    rec.merit_after = ls->trial_value;
    rec.target_decrease = ls->target;
    rec.backtracks = ls->backtracks;
    next = std::move(trial_it);
  }
  rec.step_norm = rec.alpha;
  rec.f_after = prob.eval_f(next->x());
  return {*std::move(next), rec};
}

}  // namespace

std::string_view to_string(Procedure p) {
  switch (p) {
    case Procedure::kDualGrad: return "DualGrad";
    case Procedure::kPrimalGrad: return "PrimalGrad";
    case Procedure::kNegCurvature: return "NegCurvature";
    case Procedure::kTerminated: return "Terminated";
  }
  return "Unknown";
}

std::string_view to_string(InnerStatus s) {
  switch (s) {
    case InnerStatus::kConverged: return "Converged";
    case InnerStatus::kConvergedFirstOrder: return "ConvergedFirstOrder";
    case InnerStatus::kIterLimit: return "IterLimit";
    case InnerStatus::kLineSearchStall: return "LineSearchStall";
  }
  return "Unknown";
}

void IpmParams::validate(const LipschitzConstants& constants) const {
  merit().validate();
  auto positive = [](double v) { return !std::isnan(v) && v > 0.0; };
  require(positive(eps_g) && positive(eps_mu) && positive(eps_H), ErrorKind::kInvalidInput,
          "eps_g, eps_mu, eps_H must be > 0");
  require(positive(h_min) && h_min <= h_max && std::isfinite(h_max), ErrorKind::kInvalidInput,
          "need 0 < h_min <= h_max < inf");
  require(positive(kappa_min) && kappa_min <= kappa_max && std::isfinite(kappa_max),
          ErrorKind::kInvalidInput, "need 0 < kappa_min <= kappa_max < inf");
  require(max_inner_iters >= 1, ErrorKind::kInvalidInput, "max_inner_iters must be >= 1");
  std::array<bool, 3> seen{};
  for (Procedure p : order) {
    require(p != Procedure::kTerminated, ErrorKind::kInvalidInput,
            "procedure order must be a permutation of the three procedures");
    seen[static_cast<std::size_t>(p)] = true;
  }
  require(seen[0] && seen[1] && seen[2], ErrorKind::kInvalidInput,
          "procedure order must be a permutation of the three procedures");
  if (const auto* bt = std::get_if<Backtracking>(&step_mode)) {
    require(bt->beta > 0.0 && bt->beta < 1.0, ErrorKind::kInvalidInput, "beta must lie in (0,1)");
    require(positive(bt->alpha_floor_rel), ErrorKind::kInvalidInput, "alpha_floor must be > 0");
  } else {
    require(constants.all_known(), ErrorKind::kConstantsRequired,
            "fixed step mode needs known L0, L1, L2");
  }
}

ScalingOps ScalingOps::identity() {
  return {[](const Vec& v) { return v; }, [](const SymMat& d) { return d; }};
}

EpsCheck check_eps_sosp(const NsdpProblem& prob, const Iterate& it, const IpmParams& params) {
  PointEval pe = evaluate_point(prob, it, params);
  if (!dual_trigger(params, pe) && !primal_trigger(params, pe)) {
    ensure_hessian(prob, it, params, pe);
  }
  return check_from(params, pe);
}

std::optional<LineSearchResult> backtrack_step(
    double current_value, const std::function<std::optional<double>(double)>& trial_value,
    double alpha0, const std::function<double(double)>& target_decrease, double beta,
    double alpha_floor) {
  auto decrease = [&](double a) -> std::optional<double> {
    const std::optional<double> v = trial_value(a);
    if (!v) return std::nullopt;
    return current_value - *v;
  };
  auto ls = backtrack_decrease(decrease, alpha0, target_decrease, beta, alpha_floor);
  if (ls) ls->trial_value = current_value - ls->trial_value;
  return ls;
}

double sigma_dual(const IpmParams& p) {
  const double km = p.kappa_min;
  const double kx = p.kappa_max;
  const double t1 = p.mu * p.eps_mu * km / (4.0 * kx);
  const double t2 = ratio_or_inf(p.mu * p.eps_mu * p.eps_mu * km * km, 4.0 * p.nu * kx * kx);
  return p.nu > 0.0 ? std::min(t1, t2) : kInf;
}

double sigma_primal(const IpmParams& p, double L0, double L1) {
  const double eg = p.eps_g;
  const double hr2 = p.h_min * p.h_min / (p.h_max * p.h_max);
  return std::min({ratio_or_inf(p.mu * eg * p.h_min, 4.0 * L0 * p.h_max),
                   ratio_or_inf(eg * eg * hr2, 8.0 * L1),
                   ratio_or_inf(eg * eg * hr2, 4.0 * p.nu * L1),
                   ratio_or_inf(p.mu * eg * eg * hr2, 16.0 * (1.0 + p.nu) * L0 * L0),
                   ratio_or_inf(eg * eg * hr2, 4.0 * (1.0 + p.nu) * L1)});
}

double sigma_negcurv(const IpmParams& p, double L0, double L1, double L2) {
  const double eh = p.eps_H;
  const double eh3 = eh * eh * eh;
  const double w2 = (1.0 + p.nu) * (1.0 + p.nu);
  const double mu2 = p.mu * p.mu;
  return std::min({ratio_or_inf(mu2 * eh, 24.0 * L0 * L0),
                   ratio_or_inf(2.0 * eh3, 75.0 * L2 * L2),
                   ratio_or_inf(2.0 * eh3, 5.0 * p.nu * p.nu * L2 * L2),
                   ratio_or_inf(2.0 * eh3, 5.0 * w2 * L2 * L2),
                   ratio_or_inf(mu2 * eh3, 40.0 * w2 * L1 * L1 * L0 * L0),
                   ratio_or_inf(mu2 * mu2 * eh3, 1350.0 * w2 * std::pow(L0, 6))});
}

StepResult update1_dual(const NsdpProblem& prob, const Iterate& it, const IpmParams& params,
                        const ScalingOps& scaling) {
  params.validate(prob.lipschitz());
  return dual_step(prob, it, params, scaling, evaluate_point(prob, it, params));
}

StepResult update2_primal(const NsdpProblem& prob, const Iterate& it, const IpmParams& params,
                          const ScalingOps& scaling) {
  params.validate(prob.lipschitz());
  return primal_step(prob, it, params, scaling, evaluate_point(prob, it, params));
}

StepResult update3_negcurv(const NsdpProblem& prob, const Iterate& it, const IpmParams& params) {
  params.validate(prob.lipschitz());
  PointEval pe = evaluate_point(prob, it, params);
  ensure_hessian(prob, it, params, pe);
  return negcurv_step(prob, it, params, pe);
}

InnerResult run_inner(const NsdpProblem& prob, const Iterate& start, const IpmParams& params,
                      const ScalingOps& scaling, const StepObserver& observer) {
  return detail::run_inner_loop(prob, start, params, scaling, observer, false);
}

namespace detail {

InnerResult run_inner_loop(const NsdpProblem& prob, const Iterate& start, const IpmParams& params,
                           const ScalingOps& scaling, const StepObserver& observer,
                           bool primal_mode) {
  params.validate(prob.lipschitz());
  if (primal_mode) {
    require(params.nu == 0.0, ErrorKind::kInvalidInput, "primal method requires nu = 0");
  }
  InnerResult result{start, {}, InnerStatus::kIterLimit, {}, {}};
  Iterate current = start;

  for (int iter = 0;; ++iter) {
    PointEval pe = evaluate_point(prob, current, params);
    std::optional<Procedure> chosen;
    for (Procedure proc : params.order) {
      if (proc == Procedure::kDualGrad) {
        if (!primal_mode && dual_trigger(params, pe)) chosen = proc;
      } else if (proc == Procedure::kPrimalGrad) {
        if (primal_trigger(params, pe)) chosen = proc;
      } else if (proc == Procedure::kNegCurvature && params.negative_curvature) {
        ensure_hessian(prob, current, params, pe);
        if (negcurv_trigger(params, pe)) chosen = proc;
      }
      if (chosen) break;
    }

    if (!chosen) {
      result.final_check = check_from(params, pe);
      result.status =
          params.negative_curvature ? InnerStatus::kConverged : InnerStatus::kConvergedFirstOrder;
      break;
    }
    if (iter >= params.max_inner_iters) {
      result.final_check = check_from(params, pe);
      result.status = InnerStatus::kIterLimit;
      result.diagnostic = "inner iteration cap " + std::to_string(params.max_inner_iters) +
                          " reached; next procedure " + std::string(to_string(*chosen));
      break;
    }

    std::optional<StepResult> step;
    try {
      switch (*chosen) {
        case Procedure::kDualGrad:
          step = dual_step(prob, current, params, scaling, pe);
          break;
        case Procedure::kPrimalGrad:
          step = primal_step(prob, current, params, scaling, pe);
          break;
        default:
          step = negcurv_step(prob, current, params, pe);
          break;
      }
    } catch (const SolverError& e) {
      if (e.kind() != ErrorKind::kLineSearchStall) throw;
      result.final_check = check_from(params, pe);
      result.status = InnerStatus::kLineSearchStall;
      result.diagnostic = e.what();
      break;
    }

    step->record.iter = iter;
    step->record.residuals = residuals_of(pe);
    Iterate next = std::move(step->next);
    if (primal_mode) {
      auto synced = next.with_Z(params.mu * next.X_inv());
      require(synced.has_value(), ErrorKind::kNumericalFailure, "mu X^-1 is not positive definite");
      next = *std::move(synced);
    }
    if (observer) observer(current, next, step->record);
    result.trace.push_back(step->record);
    current = std::move(next);
  }
  result.final = std::move(current);
  return result;
}

}  // namespace detail

}  // namespace ncsdp
