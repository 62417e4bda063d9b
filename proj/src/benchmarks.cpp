#include "ncsdp/benchmarks.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "ncsdp/error.hpp"
#include "ncsdp/rng.hpp"

namespace ncsdp {

namespace {

constexpr int kMaxGenerationAttempts = 1000;
constexpr int kMaxInitialDraws = 1000;
constexpr char kMagic[] = "ncsdp-psf";
constexpr int kFormatVersion = 1;

SymMat random_shifted_block(SplitMix64& rng, int q, double r) {
  Mat m(q, q);
  for (int i = 0; i < q; ++i) {
    for (int j = 0; j < q; ++j) m(i, j) = rng.uniform();
  }
  Spectrum s = spectral_decompose(SymMat(Mat(m * m.transpose())));
  std::vector<int> idx(q);
  std::iota(idx.begin(), idx.end(), 0);
  const int k = psf_reset_count(q);
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(q - i)));
    std::swap(idx[i], idx[j]);
    s.eigenvalues(idx[i]) = -r;
  }
  return s.reconstruct();
}

}  // namespace

void PsfConfig::validate() const {
  require(m_rows >= 1 && n_cols >= 1, ErrorKind::kInvalidInput, "m and n must be >= 1");
  require(q >= 1 && q < std::min(m_rows, n_cols), ErrorKind::kInvalidInput,
          "q must satisfy 1 <= q < min(m, n)");
  require(std::isfinite(r) && r > 0.0, ErrorKind::kInvalidInput, "r must be finite and > 0");
}

int psf_reset_count(int q) { return (2 * q + 5) / 10; }

PsfInstance generate_psf(const PsfConfig& config) {
  config.validate();
  SplitMix64 rng(config.seed, 0);
  for (int attempt = 1; attempt <= kMaxGenerationAttempts; ++attempt) {
    PsfGroundTruth gt;
    for (int i = 0; i < config.m_rows; ++i) gt.A.push_back(random_shifted_block(rng, config.q, config.r));
    for (int j = 0; j < config.n_cols; ++j) gt.B.push_back(random_shifted_block(rng, config.q, config.r));
    Mat v(config.m_rows, config.n_cols);
    for (int i = 0; i < config.m_rows; ++i) {
      for (int j = 0; j < config.n_cols; ++j) v(i, j) = inner(gt.A[i], gt.B[j]);
    }
    if ((v.array() >= 0.0).all()) return PsfInstance{std::move(v), std::move(gt), attempt};
  }
  fail(ErrorKind::kGenerationFailed,
       "no nonnegative V after " + std::to_string(kMaxGenerationAttempts) + " attempts");
}

PsfProblem::PsfProblem(Mat V, int q, double r, std::optional<double> ball_radius)
    : v_(std::move(V)), q_(q), r_(r) {
  require(v_.rows() >= 1 && v_.cols() >= 1 && v_.allFinite(), ErrorKind::kInvalidInput,
          "V must be a finite nonempty matrix");
  require(q >= 1 && std::isfinite(r) && r > 0.0, ErrorKind::kInvalidInput, "need q >= 1, r > 0");
  t_ = static_cast<Index>(q) * (q + 1) / 2;
  const Index blocks = v_.rows() + v_.cols();
  dim_ = t_ * blocks;
  order_ = static_cast<Index>(q) * blocks;

  std::vector<SymMat> local;
  for (int p = 0; p < q; ++p) {
    for (int s = p; s < q; ++s) {
      SymMat e(q);
      e.set(p, s, p == s ? 1.0 : 1.0 / std::sqrt(2.0));
      local.push_back(e);
    }
  }
  basis_.reserve(dim_);
  for (Index b = 0; b < blocks; ++b) {
    for (Index l = 0; l < t_; ++l) {
      Mat full = Mat::Zero(order_, order_);
      full.block(b * q, b * q, q, q) = local[l].matrix();
      basis_.emplace_back(full);
    }
  }
  if (ball_radius) constants_ = psf_lipschitz_on_ball(v_, q, *ball_radius);
}

Vec PsfProblem::svec(const SymMat& s) const {
  Vec v(t_);
  Index k = 0;
  for (int p = 0; p < q_; ++p) {
    for (int c = p; c < q_; ++c) v(k++) = p == c ? s(p, p) : std::sqrt(2.0) * s(p, c);
  }
  return v;
}

SymMat PsfProblem::smat(const Eigen::Ref<const Vec>& v) const {
  SymMat s(q_);
  Index k = 0;
  for (int p = 0; p < q_; ++p) {
    for (int c = p; c < q_; ++c, ++k) s.set(p, c, p == c ? v(k) : v(k) / std::sqrt(2.0));
  }
  return s;
}

// Columns of the t×(m+n) view are svec(A_1..A_m, B_1..B_n); returns A^T B − V.
Mat PsfProblem::factor_products(const Vec& x) const {
  check_primal_dim(*this, x);
  const Eigen::Map<const Mat> cols(x.data(), t_, v_.rows() + v_.cols());
  return cols.leftCols(v_.rows()).transpose() * cols.rightCols(v_.cols()) - v_;
}

double PsfProblem::eval_f(const Vec& x) const { return factor_products(x).squaredNorm(); }

Vec PsfProblem::eval_grad_f(const Vec& x) const {
  const Mat g = factor_products(x);
  const Eigen::Map<const Mat> cols(x.data(), t_, v_.rows() + v_.cols());
  Vec out(dim_);
  Eigen::Map<Mat> gcols(out.data(), t_, v_.rows() + v_.cols());
  gcols.leftCols(v_.rows()) = 2.0 * cols.rightCols(v_.cols()) * g.transpose();
  gcols.rightCols(v_.cols()) = 2.0 * cols.leftCols(v_.rows()) * g;
  return out;
}

SymMat PsfProblem::eval_hess_f(const Vec& x) const {
  const Mat g = factor_products(x);
  const Eigen::Map<const Mat> cols(x.data(), t_, v_.rows() + v_.cols());
  const auto a = cols.leftCols(v_.rows());
  const auto b = cols.rightCols(v_.cols());
  const Index m = v_.rows();
  const Index n = v_.cols();
  Mat h = Mat::Zero(dim_, dim_);
  const Mat bb = 2.0 * b * b.transpose();
  const Mat aa = 2.0 * a * a.transpose();
  for (Index i = 0; i < m; ++i) h.block(i * t_, i * t_, t_, t_) = bb;
  for (Index j = 0; j < n; ++j) h.block((m + j) * t_, (m + j) * t_, t_, t_) = aa;
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) {
      Mat cross = 2.0 * b.col(j) * a.col(i).transpose();
      cross.diagonal().array() += 2.0 * g(i, j);
      h.block(i * t_, (m + j) * t_, t_, t_) = cross;
      h.block((m + j) * t_, i * t_, t_, t_) = cross.transpose();
    }
  }
  return SymMat(h);
}

SymMat PsfProblem::eval_X(const Vec& x) const {
  check_primal_dim(*this, x);
  Mat out = Mat::Zero(order_, order_);
  const Index blocks = v_.rows() + v_.cols();
  for (Index k = 0; k < blocks; ++k) {
    out.block(k * q_, k * q_, q_, q_) = smat(x.segment(k * t_, t_)).matrix();
  }
  out.diagonal().array() += r_;
  return SymMat(out);
}

SymMat PsfProblem::eval_Ai(const Vec& x, Index i) const {
  check_primal_dim(*this, x);
  require(i >= 0 && i < dim_, ErrorKind::kInvalidInput, "variable index out of range");
  return basis_[i];
}

SymMat PsfProblem::eval_d2X(const Vec& x, Index i, Index j) const {
  check_primal_dim(*this, x);
  require(i >= 0 && i < dim_ && j >= 0 && j < dim_, ErrorKind::kInvalidInput,
          "variable index out of range");
  return SymMat(order_);
}

std::vector<SymMat> PsfProblem::eval_all_Ai(const Vec& x) const {
  check_primal_dim(*this, x);
  return basis_;
}

// On ‖x‖ ≤ R: ‖∇²f‖ ≤ 4R² + 2‖G‖_F with ‖G‖_F ≤ ‖V‖_F + R²/2, and the third
// derivative is bounded by 6√2·R. Each constraint basis matrix has unit norm.
LipschitzConstants psf_lipschitz_on_ball(const Mat& V, int q, double R) {
  require(std::isfinite(R) && R > 0.0, ErrorKind::kInvalidInput, "ball radius must be > 0");
  const double t = static_cast<double>(q) * (q + 1) / 2.0;
  LipschitzConstants c;
  c.L0 = t * static_cast<double>(V.rows() + V.cols());
  c.L1 = 5.0 * R * R + 2.0 * V.norm();
  c.L2 = 6.0 * std::sqrt(2.0) * R;
  return c;
}

std::unique_ptr<PsfProblem> psf_as_nsdp(const PsfInstance& inst, const PsfConfig& config,
                                        std::optional<double> ball_radius) {
  config.validate();
  require(inst.V.rows() == config.m_rows && inst.V.cols() == config.n_cols,
          ErrorKind::kInvalidInput, "V does not match the configured shape");
  return std::make_unique<PsfProblem>(inst.V, config.q, config.r, ball_radius);
}

Iterate psf_initial_point(const PsfProblem& prob, const PsfConfig& config, double mu1) {
  require(std::isfinite(mu1) && mu1 > 0.0, ErrorKind::kInvalidInput, "mu1 must be > 0");
  SplitMix64 rng(config.seed, 1);
  for (int draw = 0; draw < kMaxInitialDraws; ++draw) {
    Vec x(prob.num_vars());
    for (Index i = 0; i < x.size(); ++i) x(i) = rng.uniform(0.0, 1e-6);
    auto base = Iterate::try_create(prob, x, SymMat::identity(prob.matrix_order()));
    if (!base) continue;
    auto it = base->with_Z(mu1 * base->X_inv());
    if (it) return *std::move(it);
  }
  fail(ErrorKind::kGenerationFailed, "no interior initial point found");
}

ScalarProblem::ScalarProblem(double c) : c_(c) {
  require(std::isfinite(c) && c > 0.0, ErrorKind::kInvalidInput, "c must be finite and > 0");
}

Vec ScalarProblem::eval_grad_f(const Vec& x) const {
  check_primal_dim(*this, x);
  return Vec::Constant(1, c_);
}

SymMat ScalarProblem::eval_hess_f(const Vec& x) const {
  check_primal_dim(*this, x);
  return SymMat(1);
}

SymMat ScalarProblem::eval_X(const Vec& x) const {
  check_primal_dim(*this, x);
  return SymMat::diagonal(x);
}

SymMat ScalarProblem::eval_Ai(const Vec& x, Index i) const {
  check_primal_dim(*this, x);
  require(i == 0, ErrorKind::kInvalidInput, "variable index out of range");
  return SymMat::identity(1);
}

SymMat ScalarProblem::eval_d2X(const Vec& x, Index i, Index j) const {
  check_primal_dim(*this, x);
  require(i == 0 && j == 0, ErrorKind::kInvalidInput, "variable index out of range");
  return SymMat(1);
}

std::unique_ptr<ScalarProblem> analytic_scalar_problem(double c) {
  return std::make_unique<ScalarProblem>(c);
}

double scalar_merit_minimum(double c, double mu, double nu) {
  return mu - mu * std::log(mu / c) + nu * mu * (1.0 - std::log(mu));
}

void write_psf_instance(std::ostream& out, const PsfInstance& inst, const PsfConfig& config) {
  std::ostringstream s;
  s.precision(17);
  s << kMagic << ' ' << kFormatVersion << '\n';
  s << config.m_rows << ' ' << config.n_cols << ' ' << config.q << ' ' << config.r << ' '
    << config.seed << '\n';
  for (Index i = 0; i < inst.V.rows(); ++i) {
    for (Index j = 0; j < inst.V.cols(); ++j) s << (j ? " " : "") << inst.V(i, j);
    s << '\n';
  }
  out << s.str();
  require(static_cast<bool>(out), ErrorKind::kIo, "failed to write instance");
}

std::pair<PsfInstance, PsfConfig> read_psf_instance(std::istream& in) {
  std::string magic;
  int version = 0;
  in >> magic >> version;
  require(static_cast<bool>(in) && magic == kMagic, ErrorKind::kIo, "not a PSF instance file");
  require(version == kFormatVersion, ErrorKind::kIo,
          "unsupported instance format version " + std::to_string(version));
  PsfConfig config;
  in >> config.m_rows >> config.n_cols >> config.q >> config.r >> config.seed;
  require(static_cast<bool>(in), ErrorKind::kIo, "malformed instance header");
  config.validate();
  PsfInstance inst;
  inst.V.resize(config.m_rows, config.n_cols);
  for (int i = 0; i < config.m_rows; ++i) {
    for (int j = 0; j < config.n_cols; ++j) {
      in >> inst.V(i, j);
      require(static_cast<bool>(in), ErrorKind::kIo, "truncated instance data");
    }
  }
  require(inst.V.allFinite() && (inst.V.array() >= 0.0).all(), ErrorKind::kInvalidInput,
          "V must be finite and nonnegative");
  return {std::move(inst), config};
}

}  // namespace ncsdp
