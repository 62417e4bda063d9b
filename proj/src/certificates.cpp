#include "ncsdp/certificates.hpp"

#include <algorithm>
#include <limits>

#include "ncsdp/error.hpp"

namespace ncsdp {

KktResiduals kkt_residuals(const NsdpProblem& prob, const Vec& x, const SymMat& lambda) {
  check_primal_dim(prob, x);
  require(lambda.dim() == prob.matrix_order(), ErrorKind::kInvalidInput,
          "multiplier has the wrong order");
  const SymMat X = prob.eval_X(x);
  KktResiduals r;
  r.stationarity = (prob.eval_grad_f(x) - adjoint_map(prob, x, lambda)).norm();
  r.primal_feas = std::max(0.0, -spectral_decompose(X).min());
  r.dual_feas = std::max(0.0, -spectral_decompose(lambda).min());
  r.complementarity = (X.matrix() * lambda.matrix()).norm();
  return r;
}

FjScaled fj_scaled_multipliers(const NsdpProblem& prob, const Iterate& it, const MeritParams& p) {
  p.validate();
  FjScaled fj;
  fj.scale = 1.0 + p.mu * it.X_inv().frobenius_norm() + it.Z().frobenius_norm();
  fj.lambda_k = 1.0 / fj.scale;
  fj.omega_k = fj.lambda_k * lambda_surrogate(it, p);
  fj.scaled_stationarity =
      (fj.lambda_k * prob.eval_grad_f(it.x()) - adjoint_map(prob, it.x(), fj.omega_k)).norm();
  return fj;
}

SymMat lagrangian_hessian(const NsdpProblem& prob, const Vec& x, const SymMat& lambda) {
  check_primal_dim(prob, x);
  SymMat h = prob.eval_hess_f(x);
  if (!prob.affine_constraint()) h -= second_derivative_contraction(prob, x, lambda);
  return h;
}

SymMat sigma_term(const NsdpProblem& prob, const Vec& x, const SymMat& lambda, double rank_tol) {
  check_primal_dim(prob, x);
  const Index n = prob.num_vars();
  const Index m = prob.matrix_order();
  const SymMat x_pinv = spectral_decompose(prob.eval_X(x)).pseudo_inverse(rank_tol);
  const std::vector<SymMat> a = prob.eval_all_Ai(x);
  // tr(P_i Q_j) with P_i = A_i X†, Q_j = A_j Λ equals vec(P_iᵀ)·vec(Q_j).
  Mat p(n, m * m);
  Mat q(n, m * m);
  for (Index i = 0; i < n; ++i) {
    const Mat pt = (a[i].matrix() * x_pinv.matrix()).transpose();
    const Mat qi = a[i].matrix() * lambda.matrix();
    p.row(i) = Eigen::Map<const Vec>(pt.data(), m * m).transpose();
    q.row(i) = Eigen::Map<const Vec>(qi.data(), m * m).transpose();
  }
  return SymMat(Mat(2.0 * p * q.transpose()));
}

WsospCheck wsosp_curvature_check(const NsdpProblem& prob, const Vec& x, const SymMat& lambda,
                                 double rank_tol) {
  const Index n = prob.num_vars();
  const SymMat curvature = lagrangian_hessian(prob, x, lambda) + sigma_term(prob, x, lambda, rank_tol);

  const Spectrum xs = spectral_decompose(prob.eval_X(x));
  const Index k = xs.kernel_dim(rank_tol);
  Mat basis;
  if (k == 0) {
    basis = Mat::Identity(n, n);
  } else {
    const Mat u = xs.eigenvectors.rightCols(k);
    const std::vector<SymMat> a = prob.eval_all_Ai(x);
    Mat g(k * (k + 1) / 2, n);
    Index row = 0;
    for (Index s = 0; s < k; ++s) {
      for (Index t = s; t < k; ++t, ++row) {
        for (Index i = 0; i < n; ++i) g(row, i) = u.col(s).dot(a[i].matrix() * u.col(t));
      }
    }
    const Spectrum gs = spectral_decompose(SymMat(Mat(g.transpose() * g)));
    basis = gs.eigenvectors.rightCols(gs.kernel_dim(rank_tol));
  }

  WsospCheck out;
  out.subspace_dim = basis.cols();
  if (out.subspace_dim == 0) {
    out.min_restricted_curvature = std::numeric_limits<double>::infinity();
    return out;
  }
  const SymMat restricted(Mat(basis.transpose() * curvature.matrix() * basis));
  out.min_restricted_curvature = spectral_decompose(restricted).min();
  return out;
}

}  // namespace ncsdp
