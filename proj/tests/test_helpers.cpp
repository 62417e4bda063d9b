#include "test_helpers.hpp"

#include <cmath>
#include <limits>

namespace ncsdp::testing {

std::unique_ptr<LambdaProblem> scalar_quadratic(double a, double b) {
  auto p = std::make_unique<LambdaProblem>();
  p->f = [a, b](const Vec& x) { return a * x(0) * x(0) + b * x(0); };
  p->grad = [a, b](const Vec& x) { return Vec::Constant(1, 2.0 * a * x(0) + b); };
  p->hess = [a](const Vec&) { return Mat::Constant(1, 1, 2.0 * a); };
  p->X = [](const Vec& x) { return Mat::Constant(1, 1, x(0)); };
  p->Ai = [](const Vec&, Index) { return Mat::Ones(1, 1); };
  p->d2X = [](const Vec&, Index, Index) { return Mat::Zero(1, 1); };
  p->affine = true;
  return p;
}

std::unique_ptr<LambdaProblem> curved_problem() {
  auto p = std::make_unique<LambdaProblem>();
  p->n = 2;
  p->m = 2;
  p->f = [](const Vec& x) {
    const double t = x(0) * x(0) - 1.0;
    return t * t + x(0) * x(1) + 0.5 * x(1) * x(1);
  };
  p->grad = [](const Vec& x) {
    Vec g(2);
    g << 4.0 * x(0) * (x(0) * x(0) - 1.0) + x(1), x(0) + x(1);
    return g;
  };
  p->hess = [](const Vec& x) {
    Mat h(2, 2);
    h << 12.0 * x(0) * x(0) - 4.0, 1.0, 1.0, 1.0;
    return h;
  };
  p->X = [](const Vec& x) {
    Mat m(2, 2);
    m << 1.0 + x(0) * x(0), x(0) * x(1), x(0) * x(1), 1.0 + x(1) * x(1);
    return m;
  };
  p->Ai = [](const Vec& x, Index i) {
    Mat m(2, 2);
    if (i == 0) {
      m << 2.0 * x(0), x(1), x(1), 0.0;
    } else {
      m << 0.0, x(0), x(0), 2.0 * x(1);
    }
    return m;
  };
  p->d2X = [](const Vec&, Index i, Index j) {
    Mat m = Mat::Zero(2, 2);
    if (i == 0 && j == 0) {
      m(0, 0) = 2.0;
    } else if (i == 1 && j == 1) {
      m(1, 1) = 2.0;
    } else {
      m(0, 1) = m(1, 0) = 1.0;
    }
    return m;
  };
  return p;
}

Vec fd_gradient(const std::function<double(const Vec&)>& fn, const Vec& x, double h) {
  Vec g(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    Vec xp = x;
    Vec xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (fn(xp) - fn(xm)) / (2.0 * h);
  }
  return g;
}

Mat fd_jacobian(const std::function<Vec(const Vec&)>& fn, const Vec& x, double h) {
  Mat j;
  for (Index i = 0; i < x.size(); ++i) {
    Vec xp = x;
    Vec xm = x;
    xp(i) += h;
    xm(i) -= h;
    const Vec col = (fn(xp) - fn(xm)) / (2.0 * h);
    if (i == 0) j.resize(col.size(), x.size());
    j.col(i) = col;
  }
  return j;
}

double logdet_chol(const Mat& a) {
  Eigen::LLT<Mat> llt(a);
  if (llt.info() != Eigen::Success) return std::numeric_limits<double>::quiet_NaN();
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

double merit_oracle(const NsdpProblem& prob, const Vec& x, const Mat& Z, double mu, double nu) {
  const Mat X = prob.eval_X(x).matrix();
  const double ldx = logdet_chol(X);
  const double ldz = logdet_chol(Z);
  return prob.eval_f(x) - mu * ldx + nu * ((X.array() * Z.array()).sum() - mu * ldx - mu * ldz);
}

Vec merit_grad_x_fd(const NsdpProblem& prob, const Vec& x, const Mat& Z, double mu, double nu,
                    double h) {
  return fd_gradient([&](const Vec& y) { return merit_oracle(prob, y, Z, mu, nu); }, x, h);
}

Mat merit_grad_Z_fd(const NsdpProblem& prob, const Vec& x, const Mat& Z, double mu, double nu,
                    double h) {
  const Index m = Z.rows();
  Mat g(m, m);
  for (Index a = 0; a < m; ++a) {
    for (Index b = a; b < m; ++b) {
      const double w = a == b ? 1.0 : 1.0 / std::sqrt(2.0);
      Mat e = Mat::Zero(m, m);
      e(a, b) = w;
      e(b, a) = w;
      const double d =
          (merit_oracle(prob, x, Z + h * e, mu, nu) - merit_oracle(prob, x, Z - h * e, mu, nu)) /
          (2.0 * h);
      g(a, b) = d * w;
      g(b, a) = d * w;
    }
  }
  return g;
}

Mat lambda_oracle(const NsdpProblem& prob, const Vec& x, const Mat& Z, double mu, double nu) {
  const Mat X = prob.eval_X(x).matrix();
  const Mat xinv = X.partialPivLu().inverse();
  return (1.0 + nu) * mu * xinv - nu * Z;
}

Mat merit_hess_oracle(const NsdpProblem& prob, const Vec& x, const Mat& Z, double mu, double nu) {
  const Index n = prob.num_vars();
  const Mat xinv = prob.eval_X(x).matrix().partialPivLu().inverse();
  const Mat lam = lambda_oracle(prob, x, Z, mu, nu);
  std::vector<Mat> b(n);
  for (Index i = 0; i < n; ++i) b[i] = prob.eval_Ai(x, i).matrix() * xinv;
  Mat h = prob.eval_hess_f(x).matrix();
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      h(i, j) += (1.0 + nu) * mu * (b[i].array() * b[j].transpose().array()).sum();
      if (!prob.affine_constraint()) {
        h(i, j) -= (lam.array() * prob.eval_d2X(x, i, j).matrix().array()).sum();
      }
    }
  }
  return h;
}

double rel_err(const Mat& a, const Mat& b) {
  const double d = (a - b).norm();
  const double nb = b.norm();
  return nb < 1e-12 ? d : d / nb;
}

std::vector<Sample> interior_samples(const NsdpProblem& prob, const Vec& center, double radius,
                                     int count, TestRng& rng, double z_shift) {
  std::vector<Sample> out;
  for (int attempt = 0; attempt < 1000 * count && static_cast<int>(out.size()) < count; ++attempt) {
    Vec x = center + rng.vec(center.size(), -radius, radius);
    if (std::isnan(logdet_chol(prob.eval_X(x).matrix()))) continue;
    if (prob.eval_X(x).matrix().selfadjointView<Eigen::Lower>().eigenvalues().minCoeff() < 1e-3) {
      continue;
    }
    out.push_back({x, rng.spd(prob.matrix_order(), z_shift)});
  }
  return out;
}

}  // namespace ncsdp::testing
