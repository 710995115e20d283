#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "unimargin/rational.hpp"

namespace unimargin {

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static double eps() { return 1e-9; }
  static double abs(double x) { return x < 0 ? -x : x; }
};

template <>
struct ScalarTraits<Rational> {
  static Rational eps() { return Rational(0); }
  static Rational abs(const Rational& x) { return x.abs(); }
};

// Dense two-phase primal simplex with Bland's anti-cycling rule.
// Solves: maximize c.x subject to A x = b, x >= 0.
template <class Scalar>
class TwoPhaseSimplex {
 public:
  enum class Status { optimal, infeasible, unbounded };
  struct Result {
    Status status = Status::infeasible;
    Scalar objective{};
    std::vector<Scalar> x;
  };

  static Result solve(std::vector<std::vector<Scalar>> A, std::vector<Scalar> b,
                      const std::vector<Scalar>& c) {
    const std::size_t m = A.size();
    const std::size_t n = c.size();
    for (auto& row : A)
      if (row.size() != n) throw std::invalid_argument("simplex: ragged matrix");
    if (b.size() != m) throw std::invalid_argument("simplex: rhs size mismatch");

    Tableau t;
    t.n_struct = n;
    t.rows.resize(m);
    t.rhs.resize(m);
    t.basis.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      t.rows[i].assign(n + m, Scalar(0));
      bool flip = b[i] < Scalar(0);
      for (std::size_t j = 0; j < n; ++j)
        t.rows[i][j] = flip ? -A[i][j] : A[i][j];
      t.rhs[i] = flip ? -b[i] : b[i];
      t.rows[i][n + i] = Scalar(1);  // artificial
      t.basis[i] = n + i;
    }

    // Phase 1: maximize -(sum of artificials)
    std::vector<Scalar> c1(n + m, Scalar(0));
    for (std::size_t i = 0; i < m; ++i) c1[n + i] = Scalar(-1);
    t.set_objective(c1);
    t.iterate();
    if (t.objective_value(c1) < -ScalarTraits<Scalar>::eps())
      return {Status::infeasible, Scalar(0), {}};
    t.purge_artificials();

    // Phase 2 on structural columns only
    std::vector<Scalar> c2(c);
    c2.resize(t.width(), Scalar(0));
    t.set_objective(c2);
    if (!t.iterate()) return {Status::unbounded, Scalar(0), {}};

    Result r;
    r.status = Status::optimal;
    r.x.assign(n, Scalar(0));
    for (std::size_t i = 0; i < t.rows.size(); ++i)
      if (t.basis[i] < n) r.x[t.basis[i]] = t.rhs[i];
    r.objective = t.objective_value(c2);
    return r;
  }

 private:
  struct Tableau {
    std::size_t n_struct = 0;
    std::vector<std::vector<Scalar>> rows;
    std::vector<Scalar> rhs;
    std::vector<std::size_t> basis;
    std::vector<Scalar> red;  // reduced costs c_j - z_j over all columns

    std::size_t width() const { return rows.empty() ? 0 : rows[0].size(); }

    void set_objective(const std::vector<Scalar>& c) {
      red = c;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const Scalar& cb = c[basis[i]];
        if (cb == Scalar(0)) continue;
        for (std::size_t j = 0; j < red.size(); ++j)
          red[j] -= cb * rows[i][j];
      }
    }

    Scalar objective_value(const std::vector<Scalar>& c) const {
      Scalar v(0);
      for (std::size_t i = 0; i < rows.size(); ++i) v += c[basis[i]] * rhs[i];
      return v;
    }

    void pivot(std::size_t pr, std::size_t pc) {
      Scalar piv = rows[pr][pc];
      for (auto& v : rows[pr]) v /= piv;
      rhs[pr] /= piv;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i == pr) continue;
        Scalar f = rows[i][pc];
        if (f == Scalar(0)) continue;
        for (std::size_t j = 0; j < rows[i].size(); ++j)
          rows[i][j] -= f * rows[pr][j];
        rhs[i] -= f * rhs[pr];
      }
      Scalar f = red[pc];
      if (f != Scalar(0))
        for (std::size_t j = 0; j < red.size(); ++j)
          red[j] -= f * rows[pr][j];
      basis[pr] = pc;
    }

    // Returns false on unboundedness.
    bool iterate() {
      const Scalar eps = ScalarTraits<Scalar>::eps();
      for (;;) {
        // Bland: smallest-index column with positive reduced cost
        std::size_t pc = width();
        for (std::size_t j = 0; j < width(); ++j) {
          if (red[j] > eps) {
            pc = j;
            break;
          }
        }
        if (pc == width()) return true;  // optimal
        std::size_t pr = rows.size();
        for (std::size_t i = 0; i < rows.size(); ++i) {
          if (rows[i][pc] <= eps) continue;
          if (pr == rows.size()) {
            pr = i;
            continue;
          }
          Scalar lhs = rhs[i] * rows[pr][pc];
          Scalar rhsv = rhs[pr] * rows[i][pc];
          if (lhs < rhsv || (lhs == rhsv && basis[i] < basis[pr])) pr = i;
        }
        if (pr == rows.size()) return false;  // unbounded direction
        pivot(pr, pc);
      }
    }

    // Pivot artificials out of the basis; drop rows that are redundant.
    void purge_artificials() {
      for (std::size_t i = 0; i < rows.size();) {
        if (basis[i] < n_struct) {
          ++i;
          continue;
        }
        std::size_t pc = n_struct;
        for (std::size_t j = 0; j < n_struct; ++j) {
          if (ScalarTraits<Scalar>::abs(rows[i][j]) >
              ScalarTraits<Scalar>::eps()) {
            pc = j;
            break;
          }
        }
        if (pc < n_struct) {
          pivot(i, pc);
          ++i;
        } else {
          rows.erase(rows.begin() + (long)i);
          rhs.erase(rhs.begin() + (long)i);
          basis.erase(basis.begin() + (long)i);
        }
      }
      for (auto& row : rows) row.resize(n_struct);
      red.clear();
    }
  };
};

}  // namespace unimargin
