#include "ncsdp/merit.hpp"

#include <cmath>

#include "ncsdp/error.hpp"

namespace ncsdp {

void MeritParams::validate() const {
  require(std::isfinite(mu) && mu > 0.0, ErrorKind::kInvalidInput, "mu must be finite and > 0");
  require(std::isfinite(nu) && nu >= 0.0, ErrorKind::kInvalidInput, "nu must be finite and >= 0");
}

SymMat lambda_surrogate(const Iterate& it, const MeritParams& p) {
  return (1.0 + p.nu) * p.mu * it.X_inv() - p.nu * it.Z();
}

double merit_value(const NsdpProblem& prob, const Iterate& it, const MeritParams& p) {
  p.validate();
  const double logdet_x = it.X_spectrum().logdet();
  const double primal_barrier = prob.eval_f(it.x()) - p.mu * logdet_x;
  if (p.nu == 0.0) return primal_barrier;
  const double coupling =
      inner(it.X(), it.Z()) - p.mu * logdet_x - p.mu * it.Z_spectrum().logdet();
  return primal_barrier + p.nu * coupling;
}

SymMat merit_grad_Z(const NsdpProblem& /*prob*/, const Iterate& it, const MeritParams& p) {
  p.validate();
  return p.nu * (it.X() - p.mu * it.Z_inv());
}

Vec merit_grad_x(const NsdpProblem& prob, const Iterate& it, const MeritParams& p) {
  p.validate();
  return prob.eval_grad_f(it.x()) - adjoint_map(prob.eval_all_Ai(it.x()), lambda_surrogate(it, p));
}

SymMat sandwich_trace_matrix(const std::vector<SymMat>& a, const SymMat& w) {
  const auto n = static_cast<Index>(a.size());
  if (n == 0) return SymMat(0);
  const Index m = w.dim();
  // tr(B_i B_j) with B_i = W A_i equals vec(B_i) · vec(B_jᵀ).
  Mat p(n, m * m);
  Mat q(n, m * m);
  for (Index i = 0; i < n; ++i) {
    const Mat b = w.matrix() * a[static_cast<std::size_t>(i)].matrix();
    p.row(i) = Eigen::Map<const Eigen::RowVectorXd>(b.data(), m * m);
    const Mat bt = b.transpose();
    q.row(i) = Eigen::Map<const Eigen::RowVectorXd>(bt.data(), m * m);
  }
  return SymMat(Mat(p * q.transpose()));
}

SymMat second_derivative_contraction(const NsdpProblem& prob, const Vec& x, const SymMat& w) {
  const Index n = prob.num_vars();
  SymMat out(n);
  if (prob.affine_constraint()) return out;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) out.set(i, j, inner(w, prob.eval_d2X(x, i, j)));
  }
  return out;
}

SymMat merit_hess_xx(const NsdpProblem& prob, const Iterate& it, const MeritParams& p,
                     const std::vector<SymMat>& a, const SymMat& lambda) {
  SymMat h = prob.eval_hess_f(it.x());
  if (!prob.affine_constraint()) h -= second_derivative_contraction(prob, it.x(), lambda);
  h += (1.0 + p.nu) * p.mu * sandwich_trace_matrix(a, it.X_inv());
  return h;
}

SymMat merit_hess_xx(const NsdpProblem& prob, const Iterate& it, const MeritParams& p) {
  p.validate();
  return merit_hess_xx(prob, it, p, prob.eval_all_Ai(it.x()), lambda_surrogate(it, p));
}

MeritEval evaluate_merit(const NsdpProblem& prob, const Iterate& it, const MeritParams& p,
                         bool with_hessian) {
  p.validate();
  MeritEval out;
  const std::vector<SymMat> a = prob.eval_all_Ai(it.x());
  out.value = merit_value(prob, it, p);
  out.lambda = lambda_surrogate(it, p);
  out.grad_x = prob.eval_grad_f(it.x()) - adjoint_map(a, out.lambda);
  out.grad_Z = p.nu * (it.X() - p.mu * it.Z_inv());
  if (with_hessian) out.hess_xx = merit_hess_xx(prob, it, p, a, out.lambda);
  return out;
}

double local_lipschitz_Z(const Iterate& it, const MeritParams& p) {
  const double zinv = it.Z_inv().frobenius_norm();
  return 2.0 * p.mu * p.nu * zinv * zinv;
}

double local_lipschitz_x(const Iterate& it, const MeritParams& p, double L0, double L1) {
  const double xinv = it.X_inv().frobenius_norm();
  const double znorm = it.Z().frobenius_norm();
  const double w = (1.0 + p.nu) * p.mu;
  return L1 + p.nu * L1 * znorm + 2.0 * w * L0 * L0 * xinv * xinv + w * L1 * xinv;
}

double local_lipschitz_x(const Iterate& it, const MeritParams& p, const LipschitzConstants& c) {
  require(c.L0.has_value() && c.L1.has_value(), ErrorKind::kConstantsRequired,
          "local_lipschitz_x needs L0 and L1");
  return local_lipschitz_x(it, p, *c.L0, *c.L1);
}

double local_lipschitz_xx(const Iterate& it, const MeritParams& p, double L0, double L1,
                          double L2) {
  const double xinv = it.X_inv().frobenius_norm();
  const double znorm = it.Z().frobenius_norm();
  const double w = (1.0 + p.nu) * p.mu;
  return L2 + p.nu * L2 * znorm +
         w * (L2 * xinv + 4.0 * L1 * L0 * xinv * xinv + 6.0 * L0 * L0 * L0 * xinv * xinv * xinv);
}

double local_lipschitz_xx(const Iterate& it, const MeritParams& p, const LipschitzConstants& c) {
  require(c.all_known(), ErrorKind::kConstantsRequired, "local_lipschitz_xx needs L0, L1, L2");
  return local_lipschitz_xx(it, p, *c.L0, *c.L1, *c.L2);
}

}  // namespace ncsdp
