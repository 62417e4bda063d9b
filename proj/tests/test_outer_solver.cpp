#include <gtest/gtest.h>

#include <cmath>

#include "ncsdp/benchmarks.hpp"
#include "ncsdp/error.hpp"
#include "ncsdp/outer_solver.hpp"
#include "ncsdp/verification.hpp"

namespace ncsdp {
namespace {

TEST(DefaultSchedule, PublishedValues) {
  const Schedule s = default_schedule();
  EXPECT_EQ(s.mu_init, 0.3);
  EXPECT_EQ(s.mu_min, 1e-8);
  EXPECT_EQ(s.max_outer_iters, 60);
  EXPECT_DOUBLE_EQ(s.mu_update(0.3), 0.24);
  EXPECT_NEAR(s.nu_of_mu(0.3), 0.8865, 1e-4);
  EXPECT_NEAR(s.eps_mu_of_mu(0.01), 0.003981, 5e-7);
  EXPECT_EQ(s.eps_g_of_mu(0.02), 0.02);
  EXPECT_EQ(s.eps_H_of_mu(0.02), 0.02);
  EXPECT_DOUBLE_EQ(s.mu_update(0.01), 0.008);
  EXPECT_DOUBLE_EQ(s.mu_update(1e-3), 10 * std::pow(1e-3, 1.5));
  EXPECT_NO_THROW(s.validate());
}

TEST(DefaultSchedule, SequencesDecreaseToZero) {
  const Schedule s = default_schedule();
  double mu = s.mu_init;
  double prev[5] = {mu, s.nu_of_mu(mu), s.eps_g_of_mu(mu), s.eps_mu_of_mu(mu), s.eps_H_of_mu(mu)};
  for (int k = 0; k < 40 && mu >= 1e-8; ++k) {
    mu = s.mu_update(mu);
    const double cur[5] = {mu, s.nu_of_mu(mu), s.eps_g_of_mu(mu), s.eps_mu_of_mu(mu),
                           s.eps_H_of_mu(mu)};
    for (int i = 0; i < 5; ++i) {
      EXPECT_LT(cur[i], prev[i]);
      EXPECT_GT(cur[i], 0.0);
      prev[i] = cur[i];
    }
  }
  EXPECT_LT(mu, 1e-8);
}

TEST(Schedule, ValidationRejectsBadSchedules) {
  auto kind = [](const Schedule& s) {
    try {
      s.validate();
    } catch (const SolverError& e) {
      return e.kind();
    }
    return ErrorKind::kIo;
  };
  Schedule s = default_schedule();
  s.mu_update = [](double mu) { return mu; };
  EXPECT_EQ(kind(s), ErrorKind::kInvalidInput);
  s = default_schedule();
  s.nu_of_mu = [](double mu) { return 1.0 / mu; };
  EXPECT_EQ(kind(s), ErrorKind::kInvalidInput);
  s = default_schedule();
  s.eps_g_of_mu = [](double) { return -1.0; };
  EXPECT_EQ(kind(s), ErrorKind::kInvalidInput);
  s = default_schedule();
  s.eps_mu_of_mu = nullptr;
  EXPECT_EQ(kind(s), ErrorKind::kInvalidInput);
  s = default_schedule();
  s.mu_init = 0.0;
  EXPECT_EQ(kind(s), ErrorKind::kInvalidInput);
}

TEST(RunOuter, SingleIterationEqualsOneInnerSolve) {
  const PsfConfig cfg{5, 5, 4, 0.3, 1};
  auto prob = psf_as_nsdp(generate_psf(cfg), cfg);
  const Iterate start = psf_initial_point(*prob, cfg, 0.3);
  Schedule s = default_schedule();
  s.max_outer_iters = 1;
  const IpmParams base;
  const OuterResult outer = run_outer(*prob, start, s, base, ScalingOps::identity());
  ASSERT_EQ(outer.trace.size(), 1u);
  IpmParams p = base;
  p.mu = 0.24;
  p.nu = s.nu_of_mu(0.24);
  p.eps_g = p.eps_H = 0.24;
  p.eps_mu = s.eps_mu_of_mu(0.24);
  const InnerResult inner = run_inner(*prob, start, p, ScalingOps::identity());
  EXPECT_EQ(outer.final.x(), inner.final.x());
  EXPECT_EQ(outer.final.Z().matrix(), inner.final.Z().matrix());
  EXPECT_EQ(outer.trace[0].inner_iters, static_cast<int>(inner.trace.size()));
  EXPECT_EQ(outer.trace[0].mu, 0.24);
  EXPECT_EQ(outer.status, OuterStatus::kConverged);
}

TEST(RunOuter, ScalarTracksCentralPath) {
  const double c = 1.5;
  auto prob = analytic_scalar_problem(c);
  Schedule s = default_schedule();
  s.mu_min = 1e-6;
  const Iterate start = Iterate::create(*prob, Vec::Constant(1, 0.3 / c), SymMat::identity(1) * c);
  OuterOptions opt;
  opt.fixed_nu = 0.0;
  opt.z_resync = true;
  const OuterResult r = run_outer(*prob, start, s, IpmParams{}, ScalingOps::identity(), opt);
  EXPECT_EQ(r.status, OuterStatus::kConverged);
  ASSERT_GE(r.trace.size(), 5u);
  for (const OuterRecord& rec : r.trace) {
    EXPECT_EQ(rec.inner_status, InnerStatus::kConverged);
    const double x = rec.x(0);
    // |c − μ/x| ≤ ε_g·scale rearranged for x.
    EXPECT_LE(std::abs(c - rec.mu / x), rec.eps_g * rec.check.scale_x * (1 + 1e-12));
    EXPECT_LE(std::abs(x - rec.mu / c), 2.0 * rec.eps_g * rec.check.scale_x * x / c);
  }
  EXPECT_LT(r.final.x()(0), 1e-5);
}

TEST(RunOuter, TraceMonotoneAndCertified) {
  const PsfConfig cfg{5, 5, 4, 0.3, 2};
  auto prob = psf_as_nsdp(generate_psf(cfg), cfg);
  Schedule s = default_schedule();
  s.max_outer_iters = 8;
  const OuterResult r =
      run_outer(*prob, psf_initial_point(*prob, cfg, 0.3), s, IpmParams{}, ScalingOps::identity());
  ASSERT_EQ(r.trace.size(), 8u);
  for (size_t k = 0; k < r.trace.size(); ++k) {
    const OuterRecord& rec = r.trace[k];
    EXPECT_EQ(rec.k, static_cast<int>(k) + 1);
    EXPECT_TRUE(rec.check.satisfied());
    EXPECT_EQ(rec.dual_steps + rec.primal_steps + rec.negcurv_steps, rec.inner_iters);
    EXPECT_EQ(static_cast<int>(rec.steps.size()), rec.inner_iters);
    EXPECT_LE(rec.fj.scaled_stationarity, rec.eps_g * (1 + 1e-9));
    EXPECT_NEAR(rec.eps_mu_ratio, rec.eps_mu / (rec.nu * rec.mu), 1e-12 * rec.eps_mu_ratio);
    if (k > 0) {
      EXPECT_LT(rec.mu, r.trace[k - 1].mu);
      EXPECT_LT(rec.nu, r.trace[k - 1].nu);
      EXPECT_LT(rec.eps_mu_ratio, r.trace[k - 1].eps_mu_ratio);
    }
  }
}

TEST(RunOuter, StopsBeforeSolveBelowMuMin) {
  auto prob = analytic_scalar_problem(1.0);
  Schedule s = default_schedule();
  s.mu_min = 0.2;
  const OuterResult r =
      run_outer(*prob, Iterate::create(*prob, Vec::Constant(1, 0.3), SymMat::identity(1)), s,
                IpmParams{}, ScalingOps::identity());
  ASSERT_EQ(r.trace.size(), 1u);
  EXPECT_EQ(r.trace[0].mu, 0.24);
  s.mu_min = 0.24;
  const OuterResult none =
      run_outer(*prob, Iterate::create(*prob, Vec::Constant(1, 0.3), SymMat::identity(1)), s,
                IpmParams{}, ScalingOps::identity());
  EXPECT_TRUE(none.trace.empty());
  EXPECT_EQ(none.status, OuterStatus::kConverged);
}

TEST(RunOuter, SharedBudgetExhausts) {
  const PsfConfig cfg{5, 5, 4, 0.3, 3};
  auto prob = psf_as_nsdp(generate_psf(cfg), cfg);
  OuterOptions opt;
  opt.total_inner_budget = 40;
  const OuterResult r = run_outer(*prob, psf_initial_point(*prob, cfg, 0.3), default_schedule(),
                                  IpmParams{}, ScalingOps::identity(), opt);
  EXPECT_EQ(r.status, OuterStatus::kBudgetExhausted);
  long used = 0;
  for (const OuterRecord& rec : r.trace) used += rec.inner_iters;
  EXPECT_EQ(used, 40);
  EXPECT_FALSE(r.diagnostic.empty());
}

TEST(RunOuter, InnerCapSurfacesAsPartialProgress) {
  const PsfConfig cfg{5, 5, 4, 0.3, 4};
  auto prob = psf_as_nsdp(generate_psf(cfg), cfg);
  IpmParams base;
  base.max_inner_iters = 2;
  const OuterResult r = run_outer(*prob, psf_initial_point(*prob, cfg, 0.3), default_schedule(),
                                  base, ScalingOps::identity());
  EXPECT_EQ(r.status, OuterStatus::kPartialProgress);
  ASSERT_EQ(r.trace.size(), 1u);
  EXPECT_EQ(r.trace[0].inner_status, InnerStatus::kIterLimit);
  EXPECT_EQ(r.trace[0].inner_iters, 2);
}

TEST(RunOuter, FixedNuOverrideAndObserver) {
  const PsfConfig cfg{3, 4, 2, 0.3, 5};
  auto prob = psf_as_nsdp(generate_psf(cfg), cfg);
  Schedule s = default_schedule();
  s.max_outer_iters = 4;
  OuterOptions opt;
  opt.fixed_nu = 0.5;
  long observed = 0;
  int last_k = 0;
  auto obs = [&](int k, const IpmParams& p, const Iterate&, const Iterate&, const StepRecord&) {
    EXPECT_EQ(p.nu, 0.5);
    EXPECT_GE(k, last_k);
    last_k = k;
    ++observed;
  };
  const OuterResult r = run_outer(*prob, psf_initial_point(*prob, cfg, 0.3), s, IpmParams{},
                                  ScalingOps::identity(), opt, obs);
  long total = 0;
  for (const OuterRecord& rec : r.trace) {
    EXPECT_EQ(rec.nu, 0.5);
    total += rec.inner_iters;
  }
  EXPECT_EQ(observed, total);
  EXPECT_EQ(last_k, static_cast<int>(r.trace.size()));
}

TEST(RunOuter, ResyncNeedsZeroNu) {
  auto prob = analytic_scalar_problem(1.0);
  OuterOptions opt;
  opt.z_resync = true;
  EXPECT_THROW(run_outer(*prob, Iterate::create(*prob, Vec::Ones(1), SymMat::identity(1)),
                         default_schedule(), IpmParams{}, ScalingOps::identity(), opt),
               SolverError);
}

TEST(Names, OuterStatus) {
  EXPECT_EQ(to_string(OuterStatus::kConverged), "Converged");
  EXPECT_EQ(to_string(OuterStatus::kPartialProgress), "PartialProgress");
  EXPECT_EQ(to_string(OuterStatus::kBudgetExhausted), "BudgetExhausted");
}

}  // namespace
}  // namespace ncsdp
