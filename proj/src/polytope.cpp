#include "unimargin/polytope.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace unimargin {

namespace {

long long gcd_ll(long long a, long long b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) {
    long long t = a % b;
    a = b;
    b = t;
  }
  return a;
}

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::vector<long long> reduce_content(std::vector<__int128> w) {
  __int128 g = 0;
  for (__int128 x : w) g = gcd128(g, x);
  std::vector<long long> out(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    __int128 v = g > 1 ? w[j] / g : w[j];
    if (v < INT64_MIN || v > INT64_MAX)
      throw std::overflow_error("ray coefficient overflow");
    out[j] = (long long)v;
  }
  return out;
}

struct IntRay {
  std::vector<long long> v;
  std::uint64_t zmask = 0;  // bit k set <=> v[k] == 0
};

std::uint64_t zero_mask_of(const std::vector<long long>& v) {
  std::uint64_t m = 0;
  for (std::size_t k = 0; k < v.size(); ++k)
    if (v[k] == 0) m |= (std::uint64_t)1 << k;
  return m;
}

// Exact rank via fraction-free Gaussian elimination on a copy.
std::size_t int_matrix_rank(std::vector<std::vector<long long>> m) {
  std::size_t rank = 0;
  std::size_t rows = m.size();
  if (rows == 0) return 0;
  std::size_t cols = m[0].size();
  std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a[i][j] = Rational(m[i][j]);
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c].is_zero()) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (a[i][c].is_zero()) continue;
      Rational f = a[i][c] / a[r][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
    ++rank;
  }
  return rank;
}

// Double description over the columns listed in cols: extreme rays of
// {y >= 0 : (H restricted) y = 0}, as content-1 integer vectors.
std::vector<std::vector<long long>> dd_rays(const ConstraintMatrix& H,
                                            const std::vector<std::size_t>& cols) {
  std::size_t nn = cols.size();
  if (nn > 64) throw std::domain_error("ray enumeration limited to 64 cells");
  std::vector<std::vector<long long>> hrows(H.rows);
  for (std::size_t r = 0; r < H.rows; ++r) {
    hrows[r].resize(nn);
    for (std::size_t k = 0; k < nn; ++k) hrows[r][k] = H.at(r, cols[k]);
  }
  std::size_t rank = int_matrix_rank(hrows);
  std::size_t min_common =
      nn >= rank + 2 ? nn - rank - 2 : 0;  // adjacency popcount precondition

  std::vector<IntRay> rays(nn);
  for (std::size_t k = 0; k < nn; ++k) {
    rays[k].v.assign(nn, 0);
    rays[k].v[k] = 1;
    rays[k].zmask = ~((std::uint64_t)1 << k);
    if (nn < 64) rays[k].zmask &= ((std::uint64_t)1 << nn) - 1;
  }

  for (const auto& h : hrows) {
    std::vector<std::size_t> pos, neg;
    std::vector<__int128> dot(rays.size());
    std::vector<IntRay> next;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      __int128 s = 0;
      for (std::size_t k = 0; k < nn; ++k)
        s += (__int128)h[k] * rays[i].v[k];
      dot[i] = s;
      if (s > 0)
        pos.push_back(i);
      else if (s < 0)
        neg.push_back(i);
      else
        next.push_back(rays[i]);
    }
    for (std::size_t ip : pos) {
      for (std::size_t in : neg) {
        std::uint64_t inter = rays[ip].zmask & rays[in].zmask;
        if ((std::size_t)__builtin_popcountll(inter) < min_common) continue;
        bool adjacent = true;
        for (std::size_t o = 0; o < rays.size(); ++o) {
          if (o == ip || o == in) continue;
          if ((inter & ~rays[o].zmask) == 0) {
            adjacent = false;
            break;
          }
        }
        if (!adjacent) continue;
        std::vector<__int128> w(nn);
        for (std::size_t k = 0; k < nn; ++k)
          w[k] = dot[ip] * rays[in].v[k] - dot[in] * rays[ip].v[k];
        IntRay nr;
        nr.v = reduce_content(std::move(w));
        nr.zmask = zero_mask_of(nr.v);
        next.push_back(std::move(nr));
      }
    }
    rays = std::move(next);
  }

  std::vector<std::vector<long long>> out;
  out.reserve(rays.size());
  for (auto& r : rays) out.push_back(std::move(r.v));
  return out;
}

RationalVec normalize_ray(const Shape& shape,
                          const std::vector<std::size_t>& cols,
                          const std::vector<long long>& v) {
  long long sum = 0;
  for (long long x : v) sum += x;
  if (sum <= 0) throw std::logic_error("ray with nonpositive total");
  RationalVec p(cell_count(shape), Rational(0));
  for (std::size_t k = 0; k < cols.size(); ++k)
    p[cols[k]] = Rational(v[k], sum);
  return p;
}

std::vector<RationalVec> enumerate_pmfs(const Shape& shape,
                                        const std::vector<std::size_t>& cols) {
  ConstraintMatrix H = margin_matrix(shape);
  auto raw = dd_rays(H, cols);
  std::vector<RationalVec> pmfs;
  pmfs.reserve(raw.size());
  for (const auto& v : raw) pmfs.push_back(normalize_ray(shape, cols, v));
  std::sort(pmfs.begin(), pmfs.end(),
            [](const RationalVec& a, const RationalVec& b) {
              for (std::size_t k = 0; k < a.size(); ++k) {
                if (a[k] < b[k]) return true;
                if (b[k] < a[k]) return false;
              }
              return false;
            });
  pmfs.erase(std::unique(pmfs.begin(), pmfs.end()), pmfs.end());
  return pmfs;
}

std::uint64_t support_mask(const RationalVec& p) {
  std::uint64_t m = 0;
  for (std::size_t k = 0; k < p.size(); ++k)
    if (!p[k].is_zero()) m |= (std::uint64_t)1 << k;
  return m;
}

std::mutex cache_mutex;
std::map<Shape, std::vector<RationalVec>>& ray_cache() {
  static std::map<Shape, std::vector<RationalVec>> c;
  return c;
}

}  // namespace

ConstraintMatrix margin_matrix(const Shape& shape) {
  validate_shape(shape);
  std::size_t n = cell_count(shape);
  std::size_t rows = 0;
  for (int x : shape) rows += (std::size_t)(x - 1);
  ConstraintMatrix H;
  H.rows = rows;
  H.cols = n;
  H.a.assign(rows * n, 0);
  std::size_t r = 0;
  for (int axis = 1; axis <= (int)shape.size(); ++axis) {
    std::size_t inner = 1;
    for (std::size_t j = (std::size_t)axis; j < shape.size(); ++j)
      inner *= (std::size_t)shape[j];
    std::size_t levels = (std::size_t)shape[axis - 1];
    for (std::size_t l = 0; l + 1 < levels; ++l, ++r) {
      for (std::size_t k = 0; k < n; ++k) {
        std::size_t lev = (k / inner) % levels;
        if (lev == l)
          H.a[r * n + k] = 1;
        else if (lev == l + 1)
          H.a[r * n + k] = -1;
      }
    }
  }
  return H;
}

std::pair<ConstraintMatrix, std::vector<long long>> full_matrix(const Shape& shape) {
  ConstraintMatrix H = margin_matrix(shape);
  ConstraintMatrix C;
  C.rows = H.rows + 1;
  C.cols = H.cols;
  C.a.assign(C.rows * C.cols, 1);  // first row all ones
  std::copy(H.a.begin(), H.a.end(), C.a.begin() + (long)C.cols);
  std::vector<long long> b(C.rows, 0);
  b[0] = 1;
  return {std::move(C), std::move(b)};
}

std::vector<RationalVec> extreme_pmfs(const Shape& shape, std::size_t cell_bound) {
  validate_shape(shape);
  std::size_t n = cell_count(shape);
  if (n > cell_bound || n > 64)
    throw std::domain_error("shape exceeds the ray-enumeration cell bound");
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = ray_cache().find(shape);
    if (it != ray_cache().end()) return it->second;
  }
  std::vector<std::size_t> cols(n);
  std::iota(cols.begin(), cols.end(), 0);
  auto pmfs = enumerate_pmfs(shape, cols);
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    ray_cache().emplace(shape, pmfs);
  }
  return pmfs;
}

std::vector<RationalVec> restricted_extreme_pmfs(const Shape& shape,
                                                 const ZeroPattern& pattern,
                                                 std::size_t cell_bound) {
  validate_pattern(pattern);
  if (pattern.shape != shape)
    throw std::domain_error("pattern shape mismatch");
  std::size_t n = cell_count(shape);
  if (n > cell_bound || n > 64)
    throw std::domain_error("shape exceeds the ray-enumeration cell bound");
  std::vector<std::size_t> cols;
  for (std::size_t k = 0; k < n; ++k)
    if (pattern.z[k]) cols.push_back(k);
  return enumerate_pmfs(shape, cols);
}

CompatibilityVerdict check_compatibility_rays(
    const ZeroPattern& pattern, const Shape& shape,
    const std::vector<RationalVec>& rays) {
  validate_pattern(pattern);
  if (pattern.shape != shape)
    throw std::domain_error("pattern shape mismatch");
  std::uint64_t positive = pattern.positive_mask();
  CompatibilityVerdict verdict;
  std::uint64_t covered = 0;
  for (std::size_t r = 0; r < rays.size(); ++r) {
    std::uint64_t supp = support_mask(rays[r]);
    if ((supp & ~positive) == 0) {
      verdict.S1.push_back((int)r);
      covered |= supp;
    }
  }
  for (std::size_t k = 0; k < pattern.cells(); ++k)
    if (covered & ((std::uint64_t)1 << k)) verdict.S2.push_back(k);
  if (verdict.S1.empty()) {
    verdict.status = CompatibilityVerdict::Status::s1_empty;
    return verdict;
  }
  if (covered != positive) {
    verdict.status = CompatibilityVerdict::Status::s2_proper_subset;
    return verdict;
  }
  verdict.status = CompatibilityVerdict::Status::compatible;
  RationalVec w(pattern.cells(), Rational(0));
  Rational coef(1, (long long)verdict.S1.size());
  for (int r : verdict.S1)
    for (std::size_t k = 0; k < w.size(); ++k)
      w[k] += coef * rays[(std::size_t)r][k];
  verdict.witness = std::move(w);
  return verdict;
}

CompatibilityVerdict check_compatibility_rays(const ZeroPattern& pattern,
                                              const Shape& shape) {
  return check_compatibility_rays(pattern, shape, extreme_pmfs(shape));
}

std::vector<ZeroPattern> monotone_prune(const ZeroPattern& pattern,
                                        const Shape& shape) {
  auto verdict = check_compatibility_rays(pattern, shape);
  if (!verdict.S1.empty())
    throw std::domain_error("monotone_prune needs an S1-empty pattern");
  std::uint64_t m = pattern.positive_mask();
  int k = __builtin_popcountll(m);
  if (k > 20) throw std::domain_error("prune set too large to enumerate");
  std::vector<ZeroPattern> out;
  out.reserve(((std::size_t)1 << k) - 1);
  for (std::uint64_t sub = (m - 1) & m;; sub = (sub - 1) & m) {
    out.push_back(ZeroPattern::from_mask(shape, sub));
    if (sub == 0) break;
  }
  return out;
}

ZeroPattern forced_zeros(const ZeroPattern& pattern, const Shape& shape) {
  validate_pattern(pattern);
  if (pattern.shape != shape)
    throw std::domain_error("pattern shape mismatch");
  for (int x : shape)
    if (x != 2) throw std::domain_error("forced_zeros handles binary shapes");
  int d = (int)shape.size();
  ZeroPattern cur = pattern;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i1 = 0; i1 < d; ++i1) {
      for (int i2 = i1 + 1; i2 < d; ++i2) {
        for (int y1 = 0; y1 < 2; ++y1) {
          for (int y2 = 0; y2 < 2; ++y2) {
            bool slice_zero = true;
            for (std::size_t k = 0; k < cur.cells() && slice_zero; ++k) {
              if (!cur.z[k]) continue;
              MultiIndex a = cell_index(shape, k + 1);
              if (a[i1] == y1 && a[i2] == y2) slice_zero = false;
            }
            if (!slice_zero) continue;
            for (std::size_t k = 0; k < cur.cells(); ++k) {
              if (!cur.z[k]) continue;
              MultiIndex a = cell_index(shape, k + 1);
              if (a[i1] == 1 - y1 && a[i2] == 1 - y2) {
                cur.z[k] = 0;
                changed = true;
              }
            }
          }
        }
      }
    }
  }
  if (cur.all_zero())
    throw std::domain_error("forced-zero closure leaves no positive cell");
  return cur;
}

std::vector<std::vector<long long>> kernel_basis(const ZeroPattern& pattern,
                                                 const Shape& shape) {
  validate_pattern(pattern);
  if (pattern.shape != shape)
    throw std::domain_error("pattern shape mismatch");
  auto [C, b] = full_matrix(shape);
  (void)b;
  std::vector<std::size_t> cols;
  for (std::size_t k = 0; k < pattern.cells(); ++k)
    if (pattern.z[k]) cols.push_back(k);
  std::size_t m = C.rows, k = cols.size();
  std::vector<std::vector<Rational>> a(m, std::vector<Rational>(k));
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < k; ++c) a[r][c] = Rational(C.at(r, cols[c]));

  // reduced row echelon form
  std::vector<std::size_t> pivot_col;
  std::size_t rr = 0;
  for (std::size_t c = 0; c < k && rr < m; ++c) {
    std::size_t piv = rr;
    while (piv < m && a[piv][c].is_zero()) ++piv;
    if (piv == m) continue;
    std::swap(a[piv], a[rr]);
    Rational inv = Rational(1) / a[rr][c];
    for (std::size_t j = c; j < k; ++j) a[rr][j] *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == rr || a[i][c].is_zero()) continue;
      Rational f = a[i][c];
      for (std::size_t j = c; j < k; ++j) a[i][j] -= f * a[rr][j];
    }
    pivot_col.push_back(c);
    ++rr;
  }

  std::vector<std::vector<long long>> basis;
  std::vector<bool> is_pivot(k, false);
  for (std::size_t c : pivot_col) is_pivot[c] = true;
  for (std::size_t f = 0; f < k; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> x(k, Rational(0));
    x[f] = Rational(1);
    for (std::size_t r = 0; r < pivot_col.size(); ++r)
      x[pivot_col[r]] = -a[r][f];
    // scale to content-1 integers, first nonzero positive
    long long l = 1;
    for (const Rational& q : x) {
      long long g = gcd_ll(l, q.den());
      __int128 nl = (__int128)(l / g) * q.den();
      if (nl > INT64_MAX) throw std::overflow_error("kernel scaling overflow");
      l = (long long)nl;
    }
    std::vector<long long> v(k);
    long long content = 0;
    for (std::size_t c = 0; c < k; ++c) {
      Rational scaled = x[c] * Rational(l);
      v[c] = scaled.num();  // den is 1 by construction
      content = gcd_ll(content, v[c]);
    }
    if (content > 1)
      for (auto& val : v) val /= content;
    for (long long val : v) {
      if (val == 0) continue;
      if (val < 0)
        for (auto& w : v) w = -w;
      break;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace unimargin
