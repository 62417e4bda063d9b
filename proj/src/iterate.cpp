#include "ncsdp/iterate.hpp"

#include "ncsdp/error.hpp"

namespace ncsdp {

bool strictly_positive(const Spectrum& spec, const SymMat& a) {
  if (spec.dim() == 0) return true;
  return spec.min() > kInteriorityFloor * (1.0 + a.frobenius_norm());
}

std::optional<Iterate> Iterate::try_create(const NsdpProblem& prob, Vec x, SymMat z) {
  check_primal_dim(prob, x);
  require(z.dim() == prob.matrix_order(), ErrorKind::kInvalidInput, "Z has wrong order");
  SymMat xm = prob.eval_X(x);
  if (!xm.all_finite()) return std::nullopt;
  Spectrum xs = spectral_decompose(xm);
  if (!strictly_positive(xs, xm)) return std::nullopt;
  if (!z.all_finite()) return std::nullopt;
  Spectrum zs = spectral_decompose(z);
  if (!strictly_positive(zs, z)) return std::nullopt;

  Iterate it;
  it.x_inv_ = xs.inverse();
  it.z_inv_ = zs.inverse();
  it.x_ = std::move(x);
  it.z_ = std::move(z);
  it.x_mat_ = std::move(xm);
  it.x_spec_ = std::move(xs);
  it.z_spec_ = std::move(zs);
  return it;
}

Iterate Iterate::create(const NsdpProblem& prob, Vec x, SymMat z) {
  auto it = try_create(prob, std::move(x), std::move(z));
  require(it.has_value(), ErrorKind::kDomainViolation,
          "iterate is not strictly interior (λ_min(X) or λ_min(Z) at or below floor)");
  return *std::move(it);
}

std::optional<Iterate> Iterate::with_Z(SymMat z) const {
  require(z.dim() == z_.dim(), ErrorKind::kInvalidInput, "Z has wrong order");
  if (!z.all_finite()) return std::nullopt;
  Spectrum zs = spectral_decompose(z);
  if (!strictly_positive(zs, z)) return std::nullopt;
  Iterate it = *this;
  it.z_inv_ = zs.inverse();
  it.z_ = std::move(z);
  it.z_spec_ = std::move(zs);
  return it;
}

std::optional<Iterate> Iterate::with_x(const NsdpProblem& prob, Vec x) const {
  check_primal_dim(prob, x);
  SymMat xm = prob.eval_X(x);
  if (!xm.all_finite()) return std::nullopt;
  Spectrum xs = spectral_decompose(xm);
  if (!strictly_positive(xs, xm)) return std::nullopt;
  Iterate it = *this;
  it.x_inv_ = xs.inverse();
  it.x_ = std::move(x);
  it.x_mat_ = std::move(xm);
  it.x_spec_ = std::move(xs);
  return it;
}

}  // namespace ncsdp
