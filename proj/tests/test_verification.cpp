#include <gtest/gtest.h>

#include "ncsdp/benchmarks.hpp"
#include "ncsdp/error.hpp"
#include "ncsdp/rng.hpp"
#include "ncsdp/verification.hpp"
#include "test_helpers.hpp"

namespace ncsdp {
namespace {

const PropertyCheck* find(const std::vector<PropertyCheck>& checks, const std::string& name) {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

TEST(PropertyCheck, PassRequiresSamples) {
  EXPECT_FALSE((PropertyCheck{"x", 0, 0, 0.0}.passed()));
  EXPECT_TRUE((PropertyCheck{"x", 3, 0, 0.5}.passed()));
  EXPECT_FALSE((PropertyCheck{"x", 3, 1, 2.0}.passed()));
  VerificationReport r;
  r.checks = {{"a", 1, 0, 0.0}, {"b", 1, 0, 0.0}};
  EXPECT_TRUE(r.all_passed());
  r.checks.push_back({"c", 1, 1, 3.0});
  EXPECT_FALSE(r.all_passed());
}

TEST(SampleInterior, CountAndInteriority) {
  const PsfConfig cfg{5, 5, 4, 0.3, 1};
  auto prob = psf_as_nsdp(generate_psf(cfg), cfg);
  SplitMix64 rng(1, 5);
  const auto pts = sample_interior_iterates(*prob, Vec::Zero(prob->num_vars()), 0.1, 12, rng);
  ASSERT_EQ(pts.size(), 12u);
  for (const Iterate& it : pts) {
    EXPECT_GT(it.lambda_min_X(), 0.0);
    EXPECT_GT(it.lambda_min_Z(), 0.0);
    EXPECT_LE((it.x()).cwiseAbs().maxCoeff(), 0.1);
  }
}

TEST(DerivativeChecks, PassOnBenchmarksAndFailOnCorruptGradient) {
  const PsfConfig cfg{5, 5, 4, 0.3, 2};
  auto psf = psf_as_nsdp(generate_psf(cfg), cfg);
  auto scalar = analytic_scalar_problem(1.3);
  auto curved = testing::curved_problem();
  SplitMix64 rng(2, 5);
  for (const NsdpProblem* prob : {static_cast<const NsdpProblem*>(psf.get()),
                                  static_cast<const NsdpProblem*>(scalar.get()),
                                  static_cast<const NsdpProblem*>(curved.get())}) {
    Vec center = Vec::Zero(prob->num_vars());
    if (prob->num_vars() == 1) center(0) = 1.0;
    const auto pts = sample_interior_iterates(*prob, center, 0.2, 10, rng);
    EXPECT_TRUE(check_problem_derivatives(*prob, pts, 1e-5).passed());
    const auto merit = check_merit_derivatives(*prob, pts, {0.3, 0.8}, 1e-5, 1e-4);
    ASSERT_EQ(merit.size(), 3u);
    for (const auto& c : merit) EXPECT_TRUE(c.passed()) << c.name << " " << c.worst;
    EXPECT_NE(find(merit, "merit_grad_x"), nullptr);
    EXPECT_NE(find(merit, "merit_grad_Z"), nullptr);
    EXPECT_NE(find(merit, "merit_hess_xx"), nullptr);
    EXPECT_TRUE(check_surrogate_identities(*prob, pts, {0.3, 0.8}, 1e-10).passed());
  }
  auto bad = corrupt_gradient(*scalar, 1e-3);
  const auto pts = sample_interior_iterates(*bad, Vec::Ones(1), 0.2, 5, rng);
  const PropertyCheck c = check_problem_derivatives(*bad, pts, 1e-5);
  EXPECT_FALSE(c.passed());
  EXPECT_EQ(c.violations, static_cast<long>(pts.size()));
  EXPECT_GT(c.worst, 1.0);
  const auto merit = check_merit_derivatives(*bad, pts, {0.3, 0.8}, 1e-5, 1e-4);
  EXPECT_FALSE(find(merit, "merit_grad_x")->passed());
}

TEST(LipschitzChecks, NamesAndConstantsRequired) {
  const PsfConfig cfg{3, 4, 2, 0.3, 3};
  auto free = psf_as_nsdp(generate_psf(cfg), cfg);
  SplitMix64 rng(3, 5);
  const auto pts = sample_interior_iterates(*free, Vec::Zero(free->num_vars()), 0.1, 3, rng);
  EXPECT_THROW(check_local_lipschitz(*free, pts, {0.1, 0.5}, 2, rng), SolverError);
  auto ball = psf_as_nsdp(generate_psf(cfg), cfg, 1.0);
  const auto checks = check_local_lipschitz(*ball, pts, {0.1, 0.5}, 4, rng);
  ASSERT_EQ(checks.size(), 4u);
  for (const char* name :
       {"lipschitz_X_inverse", "lipschitz_grad_x", "lipschitz_grad_Z", "lipschitz_hess_xx"}) {
    const PropertyCheck* c = find(checks, name);
    ASSERT_NE(c, nullptr) << name;
    EXPECT_EQ(c->samples, 12);
    EXPECT_TRUE(c->passed()) << name << " " << c->worst;
  }
}

TEST(StepAuditor, FlagsForgedViolations) {
  auto prob = analytic_scalar_problem(1.0);
  StepAuditor audit(*prob);
  IpmParams p;
  p.mu = 0.1;
  p.nu = 0.5;
  const Iterate before = Iterate::create(*prob, Vec::Constant(1, 1.0), SymMat::identity(1));
  const Iterate after = Iterate::create(*prob, Vec::Constant(1, 1.9), SymMat::identity(1));
  StepRecord rec;
  rec.procedure = Procedure::kPrimalGrad;
  rec.merit_before = 1.0;
  rec.merit_after = 1.5;
  rec.step_norm = 0.9;
  rec.step_cap = 0.5;
  rec.L0_used = 1.0;
  audit.observe(p, before, after, rec);
  const auto checks = audit.checks();
  EXPECT_TRUE(find(checks, "interiority")->passed());
  EXPECT_FALSE(find(checks, "step_caps")->passed());
  EXPECT_FALSE(find(checks, "eigenvalue_sandwich")->passed());
  EXPECT_FALSE(find(checks, "merit_monotone")->passed());
  EXPECT_EQ(find(checks, "guaranteed_decrease"), nullptr);
  EXPECT_EQ(audit.steps(), 1);
}

TEST(StepAuditor, FixedModeDecreaseAudited) {
  auto prob = analytic_scalar_problem(1.0);
  IpmParams p;
  p.mu = 0.3;
  p.nu = 0.5;
  p.eps_g = p.eps_mu = p.eps_H = 0.05;
  p.step_mode = FixedLipschitz{};
  StepAuditor audit(*prob);
  const InnerResult r = run_inner(*prob, Iterate::create(*prob, Vec::Constant(1, 2.0), SymMat::identity(1)),
                                  p, ScalingOps::identity(), audit.observer(p));
  EXPECT_EQ(r.status, InnerStatus::kConverged);
  const auto checks = audit.checks();
  const PropertyCheck* dec = find(checks, "guaranteed_decrease");
  ASSERT_NE(dec, nullptr);
  EXPECT_TRUE(dec->passed());
  EXPECT_EQ(dec->samples, static_cast<long>(r.trace.size()));
}

}  // namespace
}  // namespace ncsdp
