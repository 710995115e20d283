#include "unimargin/table.hpp"

#include <cmath>
#include <stdexcept>

namespace unimargin {

void validate_shape(const Shape& shape) {
  if (shape.empty()) throw std::invalid_argument("shape must have d >= 1 axes");
  for (int x : shape)
    if (x < 2) throw std::invalid_argument("every axis needs at least 2 levels");
}

std::size_t cell_count(const Shape& shape) {
  std::size_t n = 1;
  for (int x : shape) n *= (std::size_t)x;
  return n;
}

std::size_t cell_rank(const Shape& shape, const MultiIndex& alpha) {
  if (alpha.size() != shape.size())
    throw std::invalid_argument("multi-index dimension mismatch");
  std::size_t r = 0;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (alpha[i] < 0 || alpha[i] >= shape[i])
      throw std::out_of_range("multi-index component out of bounds");
    r = r * (std::size_t)shape[i] + (std::size_t)alpha[i];
  }
  return r + 1;
}

MultiIndex cell_index(const Shape& shape, std::size_t rank) {
  std::size_t n = cell_count(shape);
  if (rank < 1 || rank > n) throw std::out_of_range("cell rank out of range");
  std::size_t r = rank - 1;
  MultiIndex alpha(shape.size());
  for (std::size_t i = shape.size(); i-- > 0;) {
    alpha[i] = (int)(r % (std::size_t)shape[i]);
    r /= (std::size_t)shape[i];
  }
  return alpha;
}

double Table::total() const {
  double s = 0;
  for (double v : p) s += v;
  return s;
}

double Table::at(const MultiIndex& alpha) const {
  return p[cell_rank(shape, alpha) - 1];
}

Table make_table(Shape shape, std::vector<double> entries, TableMode mode,
                 double sum_tol) {
  validate_shape(shape);
  if (entries.size() != cell_count(shape))
    throw std::invalid_argument("entry count does not match shape");
  for (double v : entries) {
    if (!(v >= 0) || std::isnan(v) || std::isinf(v))
      throw std::invalid_argument("table entries must be finite and nonnegative");
  }
  Table t{std::move(shape), std::move(entries), mode};
  if (mode == TableMode::probability) {
    double s = t.total();
    if (std::fabs(s - 1.0) > sum_tol)
      throw std::invalid_argument("probability table does not sum to 1");
    if (s != 1.0)
      for (double& v : t.p) v /= s;
  }
  return t;
}

Table normalized(const Table& t) {
  double s = t.total();
  if (s <= 0) throw std::domain_error("cannot normalize a zero-total table");
  Table out = t;
  out.mode = TableMode::probability;
  for (double& v : out.p) v /= s;
  return out;
}

std::vector<double> margin(const Table& t, int axis) {
  if (axis < 1 || axis > t.dims()) throw std::out_of_range("axis out of range");
  // stride trick: cells cycle through axis levels with a fixed period
  std::size_t inner = 1;
  for (int j = axis; j < t.dims(); ++j) inner *= (std::size_t)t.shape[j];
  std::size_t levels = (std::size_t)t.shape[axis - 1];
  std::vector<double> m(levels, 0.0);
  for (std::size_t k = 0; k < t.p.size(); ++k)
    m[(k / inner) % levels] += t.p[k];
  return m;
}

std::vector<std::vector<double>> margins(const Table& t) {
  std::vector<std::vector<double>> out;
  out.reserve(t.dims());
  for (int i = 1; i <= t.dims(); ++i) out.push_back(margin(t, i));
  return out;
}

bool is_uniform_margins(const Table& t, double tol) {
  if (t.mode != TableMode::probability)
    throw std::invalid_argument("uniform-margin check needs probability mode");
  for (int i = 1; i <= t.dims(); ++i) {
    double target = 1.0 / t.shape[i - 1];
    for (double v : margin(t, i))
      if (std::fabs(v - target) > tol) return false;
  }
  return true;
}

double kl_divergence(const Table& q, const Table& p) {
  if (q.shape != p.shape) throw std::invalid_argument("KL: shape mismatch");
  if (q.mode != TableMode::probability || p.mode != TableMode::probability)
    throw std::invalid_argument("KL: probability mode required");
  double s = 0;
  for (std::size_t k = 0; k < q.p.size(); ++k) {
    if (q.p[k] == 0) continue;
    if (p.p[k] == 0)
      throw std::domain_error("KL: support(q) must lie inside support(p)");
    s += q.p[k] * std::log(q.p[k] / p.p[k]);
  }
  return s;
}

int ZeroPattern::zero_count() const {
  int n = 0;
  for (auto v : z) n += (v == 0);
  return n;
}

bool ZeroPattern::all_zero() const { return zero_count() == (int)z.size(); }

std::uint64_t ZeroPattern::positive_mask() const {
  if (z.size() > 64) throw std::domain_error("pattern mask limited to 64 cells");
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < z.size(); ++i)
    if (z[i]) m |= (std::uint64_t)1 << i;
  return m;
}

std::string ZeroPattern::to_string() const {
  std::string s(z.size(), '0');
  for (std::size_t i = 0; i < z.size(); ++i)
    if (z[i]) s[i] = '1';
  return s;
}

ZeroPattern ZeroPattern::from_string(const Shape& shape, const std::string& s) {
  validate_shape(shape);
  if (s.size() != cell_count(shape))
    throw std::invalid_argument("pattern string length does not match shape");
  ZeroPattern pat{shape, std::vector<std::uint8_t>(s.size(), 0)};
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1')
      pat.z[i] = 1;
    else if (s[i] != '0')
      throw std::invalid_argument("pattern string must be 0/1 only");
  }
  return pat;
}

ZeroPattern ZeroPattern::from_mask(const Shape& shape, std::uint64_t positive) {
  std::size_t n = cell_count(shape);
  ZeroPattern pat{shape, std::vector<std::uint8_t>(n, 0)};
  for (std::size_t i = 0; i < n; ++i)
    if (positive & ((std::uint64_t)1 << i)) pat.z[i] = 1;
  return pat;
}

ZeroPattern ZeroPattern::from_zero_cells(const Shape& shape,
                                         const std::vector<MultiIndex>& zeros) {
  std::size_t n = cell_count(shape);
  ZeroPattern pat{shape, std::vector<std::uint8_t>(n, 1)};
  for (const auto& alpha : zeros) pat.z[cell_rank(shape, alpha) - 1] = 0;
  return pat;
}

ZeroPattern ZeroPattern::all_ones(const Shape& shape) {
  return ZeroPattern{shape, std::vector<std::uint8_t>(cell_count(shape), 1)};
}

void validate_pattern(const ZeroPattern& pat) {
  validate_shape(pat.shape);
  if (pat.z.size() != cell_count(pat.shape))
    throw std::invalid_argument("pattern length does not match shape");
  if (pat.all_zero())
    throw std::domain_error("pattern has no positive cell");
}

ZeroPattern zero_pattern_of(const Table& t, double eps) {
  ZeroPattern pat{t.shape, std::vector<std::uint8_t>(t.p.size(), 0)};
  for (std::size_t i = 0; i < t.p.size(); ++i)
    if (t.p[i] > eps) pat.z[i] = 1;
  if (pat.all_zero())
    throw std::domain_error("all cells fall at or below the zero threshold");
  return pat;
}

std::vector<Rational> margin_exact(const Shape& shape,
                                   const std::vector<Rational>& p, int axis) {
  if (axis < 1 || axis > (int)shape.size())
    throw std::out_of_range("axis out of range");
  std::size_t inner = 1;
  for (std::size_t j = (std::size_t)axis; j < shape.size(); ++j)
    inner *= (std::size_t)shape[j];
  std::size_t levels = (std::size_t)shape[axis - 1];
  std::vector<Rational> m(levels, Rational(0));
  for (std::size_t k = 0; k < p.size(); ++k)
    m[(k / inner) % levels] += p[k];
  return m;
}

bool is_uniform_margins_exact(const Shape& shape,
                              const std::vector<Rational>& p) {
  for (int i = 1; i <= (int)shape.size(); ++i) {
    Rational target(1, shape[i - 1]);
    for (const Rational& v : margin_exact(shape, p, i))
      if (v != target) return false;
  }
  return true;
}

}  // namespace unimargin
