#include "ncsdp/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "ncsdp/error.hpp"

namespace ncsdp {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "InvalidInput";
    case ErrorKind::kNumericalFailure: return "NumericalFailure";
    case ErrorKind::kDomainViolation: return "DomainViolation";
    case ErrorKind::kConstantsRequired: return "ConstantsRequired";
    case ErrorKind::kPreconditionViolated: return "PreconditionViolated";
    case ErrorKind::kLineSearchStall: return "LineSearchStall";
    case ErrorKind::kGenerationFailed: return "GenerationFailed";
    case ErrorKind::kConfig: return "ConfigError";
    case ErrorKind::kIo: return "IoError";
  }
  return "Unknown";
}

SymMat::SymMat(const Mat& a) {
  require(a.rows() == a.cols(), ErrorKind::kInvalidInput, "SymMat requires a square matrix");
  data_ = 0.5 * (a + a.transpose());
}

SymMat SymMat::identity(Index dim) { return SymMat(Mat(Mat::Identity(dim, dim))); }

SymMat SymMat::diagonal(const Vec& diag) { return SymMat(Mat(diag.asDiagonal())); }

SymMat& SymMat::operator+=(const SymMat& other) {
  require(dim() == other.dim(), ErrorKind::kInvalidInput, "SymMat dimension mismatch in +");
  data_ += other.data_;
  return *this;
}

SymMat& SymMat::operator-=(const SymMat& other) {
  require(dim() == other.dim(), ErrorKind::kInvalidInput, "SymMat dimension mismatch in -");
  data_ -= other.data_;
  return *this;
}

SymMat& SymMat::operator*=(double s) {
  data_ *= s;
  return *this;
}

double inner(const SymMat& a, const SymMat& b) {
  require(a.dim() == b.dim(), ErrorKind::kInvalidInput, "inner product dimension mismatch");
  return a.matrix().cwiseProduct(b.matrix()).sum();
}

SymMat Spectrum::reconstruct() const {
  return SymMat(Mat(eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose()));
}

SymMat Spectrum::inverse() const {
  const Vec inv = eigenvalues.cwiseInverse();
  return SymMat(Mat(eigenvectors * inv.asDiagonal() * eigenvectors.transpose()));
}

SymMat Spectrum::pseudo_inverse(double rel_tol) const {
  const double cutoff = rel_tol * std::max(max(), 0.0);
  Vec inv(eigenvalues.size());
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    inv(i) = eigenvalues(i) > cutoff ? 1.0 / eigenvalues(i) : 0.0;
  }
  return SymMat(Mat(eigenvectors * inv.asDiagonal() * eigenvectors.transpose()));
}

double Spectrum::logdet() const { return eigenvalues.array().log().sum(); }

Index Spectrum::kernel_dim(double rel_tol) const {
  const double cutoff = rel_tol * std::max(max(), 0.0);
  return (eigenvalues.array() <= cutoff).count();
}

Spectrum spectral_decompose(const SymMat& a) {
  require(a.all_finite(), ErrorKind::kNumericalFailure, "eigendecomposition of non-finite matrix");
  const Index m = a.dim();
  Spectrum out;
  if (m == 0) {
    out.eigenvalues.resize(0);
    out.eigenvectors.resize(0, 0);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Mat> solver(a.matrix(), Eigen::ComputeEigenvectors);
  require(solver.info() == Eigen::Success, ErrorKind::kNumericalFailure,
          "symmetric eigensolver did not converge");
  // Eigen sorts ascending; reverse to descending.
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

double spectral_norm(const SymMat& a) {
  if (a.dim() == 0) return 0.0;
  const Spectrum s = spectral_decompose(a);
  return std::max(std::abs(s.max()), std::abs(s.min()));
}

}  // namespace ncsdp
