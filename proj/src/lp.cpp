#include "unimargin/lp.hpp"

#include <stdexcept>

#include "unimargin/polytope.hpp"
#include "unimargin/simplex.hpp"

namespace unimargin {

namespace {

constexpr double kPositiveThreshold = 1e-9;

template <class Scalar>
LPVerdict solve_pattern(const ZeroPattern& pattern, const Shape& shape) {
  auto [C, b] = full_matrix(shape);
  std::vector<std::size_t> cols;
  for (std::size_t k = 0; k < pattern.cells(); ++k)
    if (pattern.z[k]) cols.push_back(k);
  std::size_t np = cols.size();
  std::size_t ncons = C.rows;
  // variables: [p_0..p_{np-1}, delta, s_0..s_{np-1}]
  std::size_t nv = 2 * np + 1;
  std::vector<std::vector<Scalar>> A(ncons + np, std::vector<Scalar>(nv, Scalar(0)));
  std::vector<Scalar> rhs(ncons + np, Scalar(0));
  std::vector<Scalar> obj(nv, Scalar(0));
  for (std::size_t r = 0; r < ncons; ++r) {
    for (std::size_t c = 0; c < np; ++c)
      A[r][c] = Scalar((long long)C.at(r, cols[c]));
    rhs[r] = Scalar(b[r]);
  }
  for (std::size_t c = 0; c < np; ++c) {
    A[ncons + c][c] = Scalar(1);
    A[ncons + c][np] = Scalar(-1);
    A[ncons + c][np + 1 + c] = Scalar(-1);  // p_c - delta - s_c = 0
  }
  obj[np] = Scalar(1);  // maximize delta

  auto res = TwoPhaseSimplex<Scalar>::solve(std::move(A), std::move(rhs), obj);
  LPVerdict v;
  if (res.status == TwoPhaseSimplex<Scalar>::Status::infeasible) {
    v.status = LpStatus::infeasible_system;
    return v;
  }
  if (res.status == TwoPhaseSimplex<Scalar>::Status::unbounded)
    throw std::runtime_error("lp solver reported an unbounded objective");

  Scalar delta = res.objective;
  if constexpr (std::is_same_v<Scalar, Rational>) {
    v.delta_star = delta.to_double();
    v.delta_exact = delta.to_string();
  } else {
    v.delta_star = delta;
  }
  bool positive = std::is_same_v<Scalar, Rational>
                      ? delta > Scalar(0)
                      : v.delta_star > kPositiveThreshold;
  if (!positive) {
    v.status = LpStatus::boundary_only;
    v.delta_star = v.delta_star < 0 ? 0.0 : v.delta_star;
    return v;
  }
  v.status = LpStatus::strictly_positive;
  std::vector<double> cells(pattern.cells(), 0.0);
  for (std::size_t c = 0; c < np; ++c) {
    if constexpr (std::is_same_v<Scalar, Rational>)
      cells[cols[c]] = res.x[c].to_double();
    else
      cells[cols[c]] = res.x[c];
  }
  v.witness = make_table(shape, std::move(cells), TableMode::probability);
  return v;
}

}  // namespace

LPVerdict lp_feasibility(const ZeroPattern& pattern, const Shape& shape,
                         bool exact) {
  validate_pattern(pattern);
  if (pattern.shape != shape)
    throw std::domain_error("pattern shape mismatch");
  return exact ? solve_pattern<Rational>(pattern, shape)
               : solve_pattern<double>(pattern, shape);
}

}  // namespace unimargin
