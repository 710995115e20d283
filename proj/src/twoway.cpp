#include "unimargin/twoway.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace unimargin {

namespace {

struct Grid {
  int R, S;
  std::vector<double> cell;  // row-major
  double at(int i, int j) const { return cell[(std::size_t)i * S + j]; }
};

Grid as_grid(const Table& t) {
  if (t.dims() != 2) throw std::domain_error("two-way operation needs d = 2");
  Grid g{t.shape[0], t.shape[1], t.p};
  if (g.R > 12 || g.S > 12)
    throw std::domain_error("two-way enumeration bounded at 12x12");
  return g;
}

}  // namespace

std::vector<NullRectangle> null_rectangles(const Table& t, double eps) {
  Grid g = as_grid(t);
  // per-row masks of eps-zero columns
  std::vector<std::uint32_t> rowzero(g.R, 0);
  for (int i = 0; i < g.R; ++i)
    for (int j = 0; j < g.S; ++j)
      if (g.at(i, j) <= eps) rowzero[i] |= (std::uint32_t)1 << j;
  std::uint32_t full_cols = ((std::uint32_t)1 << g.S) - 1;

  // A maximal null rectangle is a closed pair: cols = common zero-columns of
  // its rows and rows = all rows zero on those cols. Enumerate closures.
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  std::vector<NullRectangle> out;
  for (std::uint32_t rows = 1; rows < ((std::uint32_t)1 << g.R); ++rows) {
    std::uint32_t cols = full_cols;
    for (int i = 0; i < g.R && cols; ++i)
      if (rows & ((std::uint32_t)1 << i)) cols &= rowzero[i];
    if (!cols) continue;
    std::uint32_t closed_rows = 0;
    for (int i = 0; i < g.R; ++i)
      if ((cols & ~rowzero[i]) == 0) closed_rows |= (std::uint32_t)1 << i;
    if (!seen.insert({closed_rows, cols}).second) continue;
    NullRectangle r;
    r.rows = closed_rows;
    r.cols = cols;
    r.weight_num = __builtin_popcount(closed_rows) * g.S +
                   __builtin_popcount(cols) * g.R;
    r.weight_den = g.R * g.S;
    out.push_back(r);
  }
  std::sort(out.begin(), out.end(), [](const NullRectangle& a, const NullRectangle& b) {
    if (a.rows != b.rows) return a.rows < b.rows;
    return a.cols < b.cols;
  });
  return out;
}

TwoWayVerdict classify_twoway(const Table& t, double eps) {
  Grid g = as_grid(t);
  auto rects = null_rectangles(t, eps);
  TwoWayVerdict v;

  std::vector<NullRectangle> over, ones;
  for (const auto& r : rects) {
    if (r.weight_num > r.weight_den)
      over.push_back(r);
    else if (r.weight_num == r.weight_den)
      ones.push_back(r);
  }
  if (!over.empty()) {
    v.verdict = TwoWayCase::no_solution;
    v.witnesses = std::move(over);
    return v;
  }
  if (ones.empty()) {
    v.verdict = TwoWayCase::unique_exists;
    return v;
  }
  // weight-1 rectangles: existence holds iff each complement is also null
  auto is_null = [&](std::uint32_t rows, std::uint32_t cols) {
    if (!rows || !cols) return true;  // empty rectangle is vacuously null
    for (int i = 0; i < g.R; ++i) {
      if (!(rows & ((std::uint32_t)1 << i))) continue;
      for (int j = 0; j < g.S; ++j)
        if ((cols & ((std::uint32_t)1 << j)) && g.at(i, j) > eps) return false;
    }
    return true;
  };
  std::uint32_t full_rows = ((std::uint32_t)1 << g.R) - 1;
  std::uint32_t full_cols = ((std::uint32_t)1 << g.S) - 1;
  for (const auto& r : ones) {
    if (!is_null(full_rows & ~r.rows, full_cols & ~r.cols)) {
      v.verdict = TwoWayCase::reduced_support_only;
      v.witnesses.push_back(r);
    }
  }
  if (v.verdict == TwoWayCase::reduced_support_only) return v;
  v.verdict = TwoWayCase::unique_exists_boundary;
  v.witnesses = std::move(ones);
  return v;
}

DiscreteCopula discrete_copula(const Table& t) {
  Grid g = as_grid(t);
  double total = t.total();
  if (total <= 0) throw std::domain_error("copula needs a positive-total table");
  DiscreteCopula c;
  c.u.assign((std::size_t)g.R + 1, 0.0);
  c.v.assign((std::size_t)g.S + 1, 0.0);
  for (int i = 0; i < g.R; ++i) {
    double rowsum = 0;
    for (int j = 0; j < g.S; ++j) rowsum += g.at(i, j);
    c.u[(std::size_t)i + 1] = c.u[i] + rowsum / total;
  }
  for (int j = 0; j < g.S; ++j) {
    double colsum = 0;
    for (int i = 0; i < g.R; ++i) colsum += g.at(i, j);
    c.v[(std::size_t)j + 1] = c.v[j] + colsum / total;
  }
  c.u.back() = 1.0;
  c.v.back() = 1.0;
  c.c.assign((std::size_t)g.R + 1, std::vector<double>((std::size_t)g.S + 1, 0.0));
  for (int i = 1; i <= g.R; ++i)
    for (int j = 1; j <= g.S; ++j)
      c.c[i][j] = c.c[i - 1][j] + c.c[i][j - 1] - c.c[i - 1][j - 1] +
                  g.at(i - 1, j - 1) / total;
  c.c[g.R][g.S] = 1.0;
  return c;
}

}  // namespace unimargin
