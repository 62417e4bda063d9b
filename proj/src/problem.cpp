#include "ncsdp/problem.hpp"

#include "ncsdp/error.hpp"

namespace ncsdp {

std::vector<SymMat> NsdpProblem::eval_all_Ai(const Vec& x) const {
  std::vector<SymMat> out;
  out.reserve(static_cast<std::size_t>(num_vars()));
  for (Index i = 0; i < num_vars(); ++i) out.push_back(eval_Ai(x, i));
  return out;
}

void check_primal_dim(const NsdpProblem& prob, const Vec& x) {
  require(x.size() == prob.num_vars(), ErrorKind::kInvalidInput,
          "x has " + std::to_string(x.size()) + " entries, problem expects " +
              std::to_string(prob.num_vars()));
}

Vec adjoint_map(const std::vector<SymMat>& a, const SymMat& w) {
  Vec out(static_cast<Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    require(a[i].dim() == w.dim(), ErrorKind::kInvalidInput, "adjoint_map: matrix order mismatch");
    out(static_cast<Index>(i)) = inner(a[i], w);
  }
  return out;
}

Vec adjoint_map(const NsdpProblem& prob, const Vec& x, const SymMat& w) {
  check_primal_dim(prob, x);
  require(w.dim() == prob.matrix_order(), ErrorKind::kInvalidInput,
          "adjoint_map: W has order " + std::to_string(w.dim()));
  return adjoint_map(prob.eval_all_Ai(x), w);
}

SymMat delta_X(const std::vector<SymMat>& a, const Vec& d) {
  require(static_cast<Index>(a.size()) == d.size(), ErrorKind::kInvalidInput,
          "delta_X: direction length mismatch");
  require(!a.empty(), ErrorKind::kInvalidInput, "delta_X: empty derivative list");
  Mat acc = Mat::Zero(a.front().dim(), a.front().dim());
  for (std::size_t i = 0; i < a.size(); ++i) acc += d(static_cast<Index>(i)) * a[i].matrix();
  return SymMat(acc);
}

SymMat delta_X(const NsdpProblem& prob, const Vec& x, const Vec& d) {
  check_primal_dim(prob, x);
  require(d.size() == prob.num_vars(), ErrorKind::kInvalidInput, "delta_X: d has wrong length");
  return delta_X(prob.eval_all_Ai(x), d);
}

}  // namespace ncsdp
