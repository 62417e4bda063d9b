#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ncsdp/iterate.hpp"
#include "ncsdp/linalg.hpp"
#include "ncsdp/problem.hpp"

namespace ncsdp {

struct PsfConfig {
  int m_rows = 5;
  int n_cols = 5;
  int q = 4;
  double r = 0.3;
  std::uint64_t seed = 0;

  /// Throws InvalidInput unless m_rows, n_cols ≥ 1, 1 ≤ q < min(m_rows, n_cols), r > 0.
  void validate() const;
};

struct PsfGroundTruth {
  std::vector<SymMat> A;
  std::vector<SymMat> B;
};

struct PsfInstance {
  Mat V;
  std::optional<PsfGroundTruth> ground_truth;
  /// Generation attempts used (1 when the first draw was nonnegative).
  int attempts = 1;
};

/// Draws A*_i, B*_j = M Mᵀ (M uniform on [0,1)), resets round(0.2q) random
/// eigenvalues of each block to −r and forms V_ij = ⟨A*_i, B*_j⟩, redrawing
/// until V ≥ 0. Throws GenerationFailed after 1000 attempts.
PsfInstance generate_psf(const PsfConfig& config);

/// Number of eigenvalues reset per block.
int psf_reset_count(int q);

/// Shifted PSF as an NSDP in x = (svec A_1, …, svec A_m, svec B_1, …, svec B_n):
///   min Σ_ij (V_ij − ⟨A_i, B_j⟩)²  s.t.  ⊕_i (A_i + rI) ⊕ ⊕_j (B_j + rI) ⪰ 0.
/// svec is orthonormal (off-diagonal entries scaled by √2), so ‖ΔX(d)‖_F = ‖d‖.
class PsfProblem final : public NsdpProblem {
 public:
  /// With ball_radius set, lipschitz() reports constants valid on ‖x‖ ≤ R;
  /// otherwise all constants are unknown.
  PsfProblem(Mat V, int q, double r, std::optional<double> ball_radius = std::nullopt);

  Index num_vars() const override { return dim_; }
  Index matrix_order() const override { return order_; }
  double eval_f(const Vec& x) const override;
  Vec eval_grad_f(const Vec& x) const override;
  SymMat eval_hess_f(const Vec& x) const override;
  SymMat eval_X(const Vec& x) const override;
  SymMat eval_Ai(const Vec& x, Index i) const override;
  SymMat eval_d2X(const Vec& x, Index i, Index j) const override;
  std::vector<SymMat> eval_all_Ai(const Vec& x) const override;
  bool affine_constraint() const override { return true; }
  LipschitzConstants lipschitz() const override { return constants_; }
  std::string name() const override { return "psf"; }

  int rows() const { return static_cast<int>(v_.rows()); }
  int cols() const { return static_cast<int>(v_.cols()); }
  int block() const { return q_; }
  double shift() const { return r_; }
  const Mat& V() const { return v_; }
  /// Entries per block, q(q+1)/2.
  Index block_dim() const { return t_; }
  /// svec of a q×q symmetric matrix and its inverse.
  Vec svec(const SymMat& s) const;
  SymMat smat(const Eigen::Ref<const Vec>& v) const;

 private:
  Mat factor_products(const Vec& x) const;

  Mat v_;
  int q_;
  double r_;
  Index t_;
  Index dim_;
  Index order_;
  std::vector<SymMat> basis_;
  LipschitzConstants constants_;
};

/// Conservative L0, L1, L2 for the PSF problem on the ball ‖x‖ ≤ R.
LipschitzConstants psf_lipschitz_on_ball(const Mat& V, int q, double R);

std::unique_ptr<PsfProblem> psf_as_nsdp(const PsfInstance& inst, const PsfConfig& config,
                                        std::optional<double> ball_radius = std::nullopt);

/// x₁ uniform on [0, 1e-6) per entry, redrawn until X(x₁) ≻ 0, and Z₁ = μ₁X(x₁)⁻¹.
/// Uses a stream of the config seed distinct from generate_psf.
Iterate psf_initial_point(const PsfProblem& prob, const PsfConfig& config, double mu1);

/// f(x) = c·x, X(x) = x; central path x(μ) = μ/c. L0 = 1, L1 = L2 = 0.
class ScalarProblem final : public NsdpProblem {
 public:
  explicit ScalarProblem(double c);

  Index num_vars() const override { return 1; }
  Index matrix_order() const override { return 1; }
  double eval_f(const Vec& x) const override { return c_ * x(0); }
  Vec eval_grad_f(const Vec& x) const override;
  SymMat eval_hess_f(const Vec& x) const override;
  SymMat eval_X(const Vec& x) const override;
  SymMat eval_Ai(const Vec& x, Index i) const override;
  SymMat eval_d2X(const Vec& x, Index i, Index j) const override;
  bool affine_constraint() const override { return true; }
  LipschitzConstants lipschitz() const override { return {1.0, 0.0, 0.0}; }
  std::string name() const override { return "scalar"; }

  double c() const { return c_; }

 private:
  double c_;
};

std::unique_ptr<ScalarProblem> analytic_scalar_problem(double c);

/// min_x ψ_{μ,ν}(x, Z) for the scalar problem:
/// μ − μ log(μ/c) + νμ(1 − log μ), attained at x = μ/c, Z = c.
double scalar_merit_minimum(double c, double mu, double nu);

/// Text format:
///   ncsdp-psf 1
///   m_rows n_cols q r seed
///   V row-major, one row per line, 17 significant digits
void write_psf_instance(std::ostream& out, const PsfInstance& inst, const PsfConfig& config);
/// Throws kIo on malformed input and InvalidInput on invalid content.
std::pair<PsfInstance, PsfConfig> read_psf_instance(std::istream& in);

}  // namespace ncsdp
