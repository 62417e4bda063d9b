#include <gtest/gtest.h>

#include <cmath>

#include "ncsdp/benchmarks.hpp"
#include "ncsdp/certificates.hpp"
#include "ncsdp/merit.hpp"
#include "test_helpers.hpp"

namespace ncsdp {
namespace {

using testing::TestRng;

TEST(Kkt, ScalarCentralPath) {
  const double c = 2.0;
  const double mu = 0.1;
  auto prob = analytic_scalar_problem(c);
  const Vec x = Vec::Constant(1, mu / c);
  const KktResiduals r = kkt_residuals(*prob, x, SymMat::identity(1) * c);
  EXPECT_NEAR(r.stationarity, 0.0, 1e-15);
  EXPECT_NEAR(r.complementarity, mu, 1e-15);
  EXPECT_EQ(r.primal_feas, 0.0);
  EXPECT_EQ(r.dual_feas, 0.0);
}

TEST(Kkt, ZeroMultiplierAtStationaryPoint) {
  auto prob = testing::scalar_quadratic(1.0, 0.0);
  const KktResiduals in = kkt_residuals(*prob, Vec::Zero(1), SymMat(1));
  EXPECT_EQ(in.stationarity, 0.0);
  EXPECT_EQ(in.complementarity, 0.0);
  EXPECT_EQ(in.primal_feas, 0.0);
  auto shifted = testing::scalar_quadratic(1.0, 0.0);
  const KktResiduals out = kkt_residuals(*shifted, Vec::Constant(1, -0.5), SymMat(1));
  EXPECT_DOUBLE_EQ(out.primal_feas, 0.5);
  EXPECT_DOUBLE_EQ(out.stationarity, 1.0);
  const KktResiduals neg = kkt_residuals(*prob, Vec::Ones(1), SymMat::identity(1) * -3.0);
  EXPECT_DOUBLE_EQ(neg.dual_feas, 3.0);
}

TEST(Kkt, AllResidualsNonnegative) {
  const PsfConfig cfg{5, 5, 4, 0.3, 1};
  auto prob = psf_as_nsdp(generate_psf(cfg), cfg);
  TestRng rng(31);
  for (int i = 0; i < 10; ++i) {
    const Vec x = rng.vec(prob->num_vars(), -1.0, 1.0);
    Mat w(prob->matrix_order(), prob->matrix_order());
    for (Index a = 0; a < w.rows(); ++a) {
      for (Index b = 0; b < w.cols(); ++b) w(a, b) = rng.uniform(-1, 1);
    }
    const KktResiduals r = kkt_residuals(*prob, x, SymMat(w));
    EXPECT_GE(r.stationarity, 0.0);
    EXPECT_GE(r.primal_feas, 0.0);
    EXPECT_GE(r.dual_feas, 0.0);
    EXPECT_GE(r.complementarity, 0.0);
  }
}

TEST(FjScaled, DefinitionsAndBounds) {
  auto prob = testing::curved_problem();
  TestRng rng(32);
  const MeritParams p{0.2, 0.7};
  for (const auto& s : testing::interior_samples(*prob, Vec::Zero(2), 1.0, 30, rng)) {
    const Iterate it = Iterate::create(*prob, s.x, SymMat(s.Z));
    const FjScaled fj = fj_scaled_multipliers(*prob, it, p);
    const double scale = 1 + p.mu * it.X_inv().frobenius_norm() + it.Z().frobenius_norm();
    EXPECT_NEAR(fj.scale, scale, 1e-14 * scale);
    EXPECT_NEAR(fj.lambda_k, 1 / scale, 1e-15);
    EXPECT_GT(fj.lambda_k, 0.0);
    EXPECT_LE(fj.lambda_k, 1.0);
    const Mat lam = testing::lambda_oracle(*prob, s.x, s.Z, p.mu, p.nu);
    EXPECT_LE((fj.omega_k.matrix() - lam / scale).norm(), 1e-12);
    const Vec g = merit_grad_x(*prob, it, p);
    EXPECT_NEAR(fj.scaled_stationarity, g.norm() / scale, 1e-12 * (1 + g.norm()));
    const double gap = (p.mu * it.X_inv().matrix() - it.Z().matrix()).norm();
    EXPECT_LE(fj.omega_k.frobenius_norm(), 1 + p.nu * gap);
    EXPECT_GE(fj.lambda_k + fj.omega_k.frobenius_norm(),
              (1 + p.mu * it.X_inv().frobenius_norm()) / scale - p.nu * gap / scale - 1e-14);
  }
}

TEST(FjScaled, CentralPathIndependentOfNu) {
  auto prob = testing::curved_problem();
  const Vec x = Vec::Constant(2, 0.2);
  const SymMat z = 0.3 * Iterate::create(*prob, x, SymMat::identity(2)).X_inv();
  const Iterate it = Iterate::create(*prob, x, z);
  const FjScaled a = fj_scaled_multipliers(*prob, it, {0.3, 0.0});
  const FjScaled b = fj_scaled_multipliers(*prob, it, {0.3, 4.0});
  EXPECT_LE((a.omega_k.matrix() - b.omega_k.matrix()).norm(), 1e-14);
  EXPECT_LE((a.omega_k.matrix() - z.matrix() * a.lambda_k).norm(), 1e-14);
}

TEST(SigmaTerm, ScalarFormula) {
  auto prob = analytic_scalar_problem(1.0);
  const SymMat h = sigma_term(*prob, Vec::Constant(1, 0.4), SymMat::identity(1) * 3.0);
  EXPECT_NEAR(h(0, 0), 2 * 3.0 / 0.4, 1e-14);
  EXPECT_EQ(sigma_term(*prob, Vec::Constant(1, 0.4), SymMat(1))(0, 0), 0.0);
}

TEST(SigmaTerm, InteriorMatchesInverseOracleAndIsSymmetric) {
  const PsfConfig cfg{3, 4, 2, 0.3, 2};
  auto prob = psf_as_nsdp(generate_psf(cfg), cfg);
  TestRng rng(33);
  for (const auto& s : testing::interior_samples(*prob, Vec::Zero(prob->num_vars()), 0.1, 5, rng)) {
    const SymMat lam(s.Z);
    const SymMat h = sigma_term(*prob, s.x, lam);
    const Mat xinv = prob->eval_X(s.x).matrix().lu().inverse();
    const Index n = prob->num_vars();
    Mat want(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        want(i, j) = 2.0 * (prob->eval_Ai(s.x, i).matrix() * xinv *
                            prob->eval_Ai(s.x, j).matrix() * lam.matrix())
                               .trace();
      }
    }
    EXPECT_LE(testing::rel_err(h.matrix(), 0.5 * (want + want.transpose())), 1e-10);
    EXPECT_LE((want - want.transpose()).norm(), 1e-12 * (1 + want.norm()));
  }
}

TEST(LagrangianHessian, IdentityWithMeritHessian) {
  auto prob = testing::curved_problem();
  TestRng rng(34);
  const MeritParams p{0.15, 0.6};
  for (const auto& s : testing::interior_samples(*prob, Vec::Zero(2), 1.0, 20, rng)) {
    const Iterate it = Iterate::create(*prob, s.x, SymMat(s.Z));
    const SymMat lam = lambda_surrogate(it, p);
    const Mat lhs = merit_hess_xx(*prob, it, p).matrix();
    const Mat rhs = lagrangian_hessian(*prob, s.x, lam).matrix() +
                    (1 + p.nu) * p.mu *
                        sandwich_trace_matrix(prob->eval_all_Ai(s.x), it.X_inv()).matrix();
    EXPECT_LE(testing::rel_err(lhs, rhs), 1e-10);
  }
}

TEST(Wsosp, InteriorUsesWholeSpace) {
  auto prob = testing::curved_problem();
  const Vec x = Vec::Constant(2, 0.3);
  const SymMat lam = SymMat::identity(2) * 0.5;
  const WsospCheck w = wsosp_curvature_check(*prob, x, lam);
  EXPECT_EQ(w.subspace_dim, 2);
  const Mat full = lagrangian_hessian(*prob, x, lam).matrix() + sigma_term(*prob, x, lam).matrix();
  EXPECT_NEAR(w.min_restricted_curvature, spectral_decompose(SymMat(full)).min(), 1e-12);
}

TEST(Wsosp, ScalarBoundaryHasTrivialSubspace) {
  auto prob = analytic_scalar_problem(1.0);
  const WsospCheck w = wsosp_curvature_check(*prob, Vec::Zero(1), SymMat::identity(1));
  EXPECT_EQ(w.subspace_dim, 0);
  EXPECT_TRUE(std::isinf(w.min_restricted_curvature));
  EXPECT_GT(w.min_restricted_curvature, 0.0);
}

TEST(Wsosp, BoundaryBlockRestrictsSubspace) {
  // Single-block PSF with q = 2 at a point where one eigenvalue of the first
  // A-block hits −r: the kernel of X is one-dimensional and removes one
  // direction from that block.
  const PsfConfig cfg{3, 3, 2, 0.3, 3};
  auto prob = psf_as_nsdp(generate_psf(cfg), cfg);
  Vec x = Vec::Zero(prob->num_vars());
  SymMat a0(2);
  a0.set(0, 0, -0.3);
  a0.set(1, 1, 0.5);
  x.head(prob->block_dim()) = prob->svec(a0);
  const WsospCheck w = wsosp_curvature_check(*prob, x, SymMat::identity(prob->matrix_order()));
  EXPECT_EQ(w.subspace_dim, prob->num_vars() - 1);
  EXPECT_TRUE(std::isfinite(w.min_restricted_curvature));
}

}  // namespace
}  // namespace ncsdp
