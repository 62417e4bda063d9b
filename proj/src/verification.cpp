#include "ncsdp/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ncsdp/error.hpp"

namespace ncsdp {

namespace {

void record(PropertyCheck& c, double ratio) {
  ++c.samples;
  if (!(ratio <= 1.0)) ++c.violations;
  if (std::isnan(ratio)) {
    c.worst = ratio;
  } else if (!std::isnan(c.worst)) {
    c.worst = std::max(c.worst, ratio);
  }
}

double rel_ratio(double err, double ref, double tol) { return err / (tol * (1.0 + ref)); }

double x_step(const NsdpProblem& prob, const Iterate& it) {
  double amax = 0.0;
  for (const SymMat& a : prob.eval_all_Ai(it.x())) amax = std::max(amax, a.frobenius_norm());
  return 1e-5 * std::min(1.0, it.lambda_min_X() / std::max(amax, 1e-300));
}

Vec random_unit(Index n, SplitMix64& rng) {
  Vec u(n);
  for (Index i = 0; i < n; ++i) u(i) = rng.uniform(-1.0, 1.0);
  const double nrm = u.norm();
  return nrm > 0.0 ? Vec(u / nrm) : Vec(Vec::Unit(n, 0));
}

SymMat random_unit_sym(Index m, SplitMix64& rng) {
  Mat w(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) w(i, j) = rng.uniform(-1.0, 1.0);
  }
  SymMat s(w);
  const double nrm = s.frobenius_norm();
  return nrm > 0.0 ? (1.0 / nrm) * s : SymMat::identity(m);
}

class CorruptedGradient final : public NsdpProblem {
 public:
  CorruptedGradient(const NsdpProblem& base, double offset) : base_(base), offset_(offset) {}
  Index num_vars() const override { return base_.num_vars(); }
  Index matrix_order() const override { return base_.matrix_order(); }
  double eval_f(const Vec& x) const override { return base_.eval_f(x); }
  Vec eval_grad_f(const Vec& x) const override {
    return base_.eval_grad_f(x).array() + offset_;
  }
  SymMat eval_hess_f(const Vec& x) const override { return base_.eval_hess_f(x); }
  SymMat eval_X(const Vec& x) const override { return base_.eval_X(x); }
  SymMat eval_Ai(const Vec& x, Index i) const override { return base_.eval_Ai(x, i); }
  SymMat eval_d2X(const Vec& x, Index i, Index j) const override {
    return base_.eval_d2X(x, i, j);
  }
  std::vector<SymMat> eval_all_Ai(const Vec& x) const override { return base_.eval_all_Ai(x); }
  bool affine_constraint() const override { return base_.affine_constraint(); }
  LipschitzConstants lipschitz() const override { return base_.lipschitz(); }
  std::string name() const override { return base_.name() + "+corrupt"; }

 private:
  const NsdpProblem& base_;
  double offset_;
};

}  // namespace

bool VerificationReport::all_passed() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.passed(); });
}

std::vector<Iterate> sample_interior_iterates(const NsdpProblem& prob, const Vec& center,
                                              double radius, int count, SplitMix64& rng) {
  check_primal_dim(prob, center);
  const Index m = prob.matrix_order();
  std::vector<Iterate> out;
  for (int attempt = 0; attempt < 100 * count && static_cast<int>(out.size()) < count; ++attempt) {
    Vec x = center;
    for (Index i = 0; i < x.size(); ++i) x(i) += rng.uniform(-radius, radius);
    Mat w(m, m);
    for (Index i = 0; i < m; ++i) {
      for (Index j = 0; j < m; ++j) w(i, j) = rng.uniform(-1.0, 1.0);
    }
    SymMat z(Mat(w * w.transpose() / static_cast<double>(m)));
    z += 0.1 * SymMat::identity(m);
    if (auto it = Iterate::try_create(prob, std::move(x), std::move(z))) out.push_back(*it);
  }
  return out;
}

PropertyCheck check_problem_derivatives(const NsdpProblem& prob, const std::vector<Iterate>& points,
                                        double tol) {
  PropertyCheck c{"problem_derivatives", 0, 0, 0.0};
  const Index n = prob.num_vars();
  for (const Iterate& it : points) {
    const double h = 1e-6 * std::max(1.0, it.x().lpNorm<Eigen::Infinity>());
    const Vec g = prob.eval_grad_f(it.x());
    const Mat hess = prob.eval_hess_f(it.x()).matrix();
    Vec g_fd(n);
    Mat h_fd(n, n);
    for (Index i = 0; i < n; ++i) {
      Vec xp = it.x();
      Vec xm = it.x();
      xp(i) += h;
      xm(i) -= h;
      g_fd(i) = (prob.eval_f(xp) - prob.eval_f(xm)) / (2.0 * h);
      h_fd.col(i) = (prob.eval_grad_f(xp) - prob.eval_grad_f(xm)) / (2.0 * h);
    }
    record(c, rel_ratio((g_fd - g).norm(), g.norm(), tol));
    record(c, rel_ratio((h_fd - hess).norm(), hess.norm(), tol));
  }
  return c;
}

std::vector<PropertyCheck> check_merit_derivatives(const NsdpProblem& prob,
                                                   const std::vector<Iterate>& points,
                                                   const MeritParams& p, double tol_grad,
                                                   double tol_hess) {
  PropertyCheck gx{"merit_grad_x", 0, 0, 0.0};
  PropertyCheck gz{"merit_grad_Z", 0, 0, 0.0};
  PropertyCheck hx{"merit_hess_xx", 0, 0, 0.0};
  const Index n = prob.num_vars();
  const Index m = prob.matrix_order();
  for (const Iterate& it : points) {
    const MeritEval e = evaluate_merit(prob, it, p, true);
    const double hx_step = x_step(prob, it);
    Vec g_fd(n);
    Mat h_fd(n, n);
    bool ok = true;
    for (Index i = 0; i < n && ok; ++i) {
      Vec xp = it.x();
      Vec xm = it.x();
      xp(i) += hx_step;
      xm(i) -= hx_step;
      auto ip = it.with_x(prob, xp);
      auto im = it.with_x(prob, xm);
      if (!ip || !im) {
        ok = false;
        break;
      }
      g_fd(i) = (merit_value(prob, *ip, p) - merit_value(prob, *im, p)) / (2.0 * hx_step);
      h_fd.col(i) = (merit_grad_x(prob, *ip, p) - merit_grad_x(prob, *im, p)) / (2.0 * hx_step);
    }
    if (!ok) continue;
    record(gx, rel_ratio((g_fd - e.grad_x).norm(), e.grad_x.norm(), tol_grad));
    record(hx, rel_ratio((h_fd - e.hess_xx->matrix()).norm(), e.hess_xx->frobenius_norm(), tol_hess));

    const double hz = 1e-5 * std::min(1.0, it.lambda_min_Z());
    SymMat gz_fd(m);
    for (Index a = 0; a < m; ++a) {
      for (Index b = a; b < m; ++b) {
        SymMat dir(m);
        const double w = a == b ? 1.0 : 1.0 / std::sqrt(2.0);
        dir.set(a, b, w);
        auto zp = it.with_Z(it.Z() + hz * dir);
        auto zm = it.with_Z(it.Z() - hz * dir);
        if (!zp || !zm) {
          ok = false;
          break;
        }
        const double deriv = (merit_value(prob, *zp, p) - merit_value(prob, *zm, p)) / (2.0 * hz);
        gz_fd.set(a, b, deriv * w);
      }
      if (!ok) break;
    }
    if (!ok) continue;
    record(gz, rel_ratio((gz_fd - e.grad_Z).frobenius_norm(), e.grad_Z.frobenius_norm(), tol_grad));
  }
  return {gx, gz, hx};
}

PropertyCheck check_surrogate_identities(const NsdpProblem& prob, const std::vector<Iterate>& points,
                                         const MeritParams& p, double tol) {
  PropertyCheck c{"surrogate_identities", 0, 0, 0.0};
  for (const Iterate& it : points) {
    const MeritEval e = evaluate_merit(prob, it, p, true);
    const Vec grad_l = prob.eval_grad_f(it.x()) - adjoint_map(prob, it.x(), e.lambda);
    record(c, rel_ratio((e.grad_x - grad_l).norm(), prob.eval_grad_f(it.x()).norm(), tol));

    SymMat hess_l = prob.eval_hess_f(it.x());
    if (!prob.affine_constraint()) hess_l -= second_derivative_contraction(prob, it.x(), e.lambda);
    const SymMat barrier =
        ((1.0 + p.nu) * p.mu) * sandwich_trace_matrix(prob.eval_all_Ai(it.x()), it.X_inv());
    const SymMat rhs = hess_l + barrier;
    record(c, rel_ratio((e.hess_xx->matrix() - rhs.matrix()).norm(), rhs.frobenius_norm(), tol));
  }
  return c;
}

std::vector<PropertyCheck> check_local_lipschitz(const NsdpProblem& prob,
                                                 const std::vector<Iterate>& anchors,
                                                 const MeritParams& p, int probes_per_anchor,
                                                 SplitMix64& rng) {
  const LipschitzConstants lc = prob.lipschitz();
  require(lc.all_known(), ErrorKind::kConstantsRequired, "Lipschitz sampling needs L0, L1, L2");
  const double L0 = *lc.L0;
  PropertyCheck inv{"lipschitz_X_inverse", 0, 0, 0.0};
  PropertyCheck gx{"lipschitz_grad_x", 0, 0, 0.0};
  PropertyCheck gz{"lipschitz_grad_Z", 0, 0, 0.0};
  PropertyCheck hx{"lipschitz_hess_xx", 0, 0, 0.0};
  constexpr double kSlack = 1.0 + 1e-9;
  for (const Iterate& anchor : anchors) {
    const MeritEval e0 = evaluate_merit(prob, anchor, p, true);
    const double lx = local_lipschitz_x(anchor, p, lc);
    const double lz = local_lipschitz_Z(anchor, p);
    const double lxx = local_lipschitz_xx(anchor, p, lc);
    const double xinv2 = std::pow(anchor.X_inv().frobenius_norm(), 2);
    for (int k = 0; k < probes_per_anchor; ++k) {
      const double rx = rng.uniform(0.0, 1.0) * anchor.lambda_min_X() / (2.0 * L0);
      const Vec x = anchor.x() + rx * random_unit(prob.num_vars(), rng);
      const double dx = (x - anchor.x()).norm();
      auto probe = anchor.with_x(prob, x);
      if (!probe) {
        record(inv, std::numeric_limits<double>::infinity());
        continue;
      }
      if (dx > 0.0) {
        record(inv, (anchor.X_inv() - probe->X_inv()).frobenius_norm() /
                        (kSlack * 2.0 * L0 * xinv2 * dx + 1e-300));
        const MeritEval e1 = evaluate_merit(prob, *probe, p, true);
        record(gx, (e0.grad_x - e1.grad_x).norm() / (kSlack * lx * dx + 1e-300));
        record(hx, spectral_norm(*e0.hess_xx - *e1.hess_xx) / (kSlack * lxx * dx + 1e-300));
      }

      const double rz = rng.uniform(0.0, 1.0) * anchor.lambda_min_Z() / 2.0;
      auto zprobe = anchor.with_Z(anchor.Z() + rz * random_unit_sym(prob.matrix_order(), rng));
      if (!zprobe) {
        record(gz, std::numeric_limits<double>::infinity());
        continue;
      }
      const double dz = (zprobe->Z() - anchor.Z()).frobenius_norm();
      if (dz > 0.0) {
        const SymMat g1 = merit_grad_Z(prob, *zprobe, p);
        record(gz, (e0.grad_Z - g1).frobenius_norm() / (kSlack * lz * dz + 1e-300));
      }
    }
  }
  return {inv, gx, gz, hx};
}

StepAuditor::StepAuditor(const NsdpProblem& prob, double rel_slack)
    : prob_(prob), rel_slack_(rel_slack) {}

void StepAuditor::observe(const IpmParams& params, const Iterate& before, const Iterate& after,
                          const StepRecord& rec) {
  (void)params;
  const double slack = rel_slack_ * std::max(1.0, std::abs(rec.merit_before));
  record(interiority_, after.lambda_min_X() > 0.0 && after.lambda_min_Z() > 0.0 ? 0.0 : 2.0);
  record(monotone_, rec.merit_after <= rec.merit_before + slack ? 0.0 : 2.0);

  if (rec.procedure == Procedure::kDualGrad) {
    const double cap = before.lambda_min_Z() / 2.0;
    record(caps_, (after.Z() - before.Z()).frobenius_norm() / (cap * (1.0 + 1e-12)));
  } else {
    const double cap = before.lambda_min_X() / (2.0 * rec.L0_used);
    record(caps_, (after.x() - before.x()).norm() / (cap * (1.0 + 1e-12)));
    const Vec& lb = before.X_spectrum().eigenvalues;
    const Vec& la = after.X_spectrum().eigenvalues;
    double worst = 0.0;
    for (Index i = 0; i < lb.size(); ++i) {
      worst = std::max(worst, 0.5 * lb(i) / la(i));
      worst = std::max(worst, la(i) / (1.5 * lb(i)));
    }
    worst = std::max(worst, after.X_inv().frobenius_norm() / (2.0 * before.X_inv().frobenius_norm()));
    record(sandwich_, worst / (1.0 + 1e-12));
  }

  if (!std::isnan(rec.guaranteed_sigma)) {
    const double decrease = rec.merit_before - rec.merit_after;
    record(decrease_, decrease >= rec.guaranteed_sigma - slack ? 0.0 : 2.0);
  }
}

StepObserver StepAuditor::observer(const IpmParams& params) {
  return [this, params](const Iterate& b, const Iterate& a, const StepRecord& r) {
    observe(params, b, a, r);
  };
}

std::vector<PropertyCheck> StepAuditor::checks() const {
  std::vector<PropertyCheck> out;
  for (const PropertyCheck& c : {interiority_, caps_, sandwich_, monotone_, decrease_}) {
    if (c.samples > 0) out.push_back(c);
  }
  return out;
}

std::unique_ptr<NsdpProblem> corrupt_gradient(const NsdpProblem& base, double offset) {
  return std::make_unique<CorruptedGradient>(base, offset);
}

}  // namespace ncsdp
