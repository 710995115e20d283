#include "unimargin/odds.hpp"

#include <cmath>
#include <stdexcept>

namespace unimargin {

namespace {

void check_pair(const Shape& shape, int i, int j) {
  int d = (int)shape.size();
  if (i < 1 || j < 1 || i >= j || j > d)
    throw std::domain_error("odds-ratio pair must satisfy 1 <= i < j <= d");
  if (shape[i - 1] != 2 || shape[j - 1] != 2)
    throw std::domain_error("odds ratios need binary axes i and j");
}

}  // namespace

ORMonomial monomial_of(const Shape& shape, const ConditionalORSpec& spec) {
  validate_shape(shape);
  check_pair(shape, spec.i, spec.j);
  int d = (int)shape.size();
  if ((int)spec.cond.size() != d - 2)
    throw std::domain_error("conditioning must cover exactly the other axes");
  ORMonomial m{shape, std::vector<int>(cell_count(shape), 0)};
  MultiIndex alpha(d);
  int c = 0;
  for (int a = 1; a <= d; ++a)
    if (a != spec.i && a != spec.j) alpha[a - 1] = spec.cond[c++];
  auto put = [&](int vi, int vj, int e) {
    alpha[spec.i - 1] = vi;
    alpha[spec.j - 1] = vj;
    m.expo[cell_rank(shape, alpha) - 1] += e;
  };
  put(1, 1, +1);
  put(0, 0, +1);
  put(1, 0, -1);
  put(0, 1, -1);
  return m;
}

ORMonomial monomial_product(const std::vector<ORMonomial>& factors) {
  if (factors.empty())
    throw std::domain_error("monomial product needs at least one factor");
  ORMonomial out = factors[0];
  for (std::size_t k = 1; k < factors.size(); ++k) {
    if (factors[k].shape != out.shape)
      throw std::domain_error("monomial product: shape mismatch");
    for (std::size_t c = 0; c < out.expo.size(); ++c)
      out.expo[c] += factors[k].expo[c];
  }
  return out;
}

ORValue evaluate_monomial(const Table& t, const ORMonomial& m) {
  if (t.shape != m.shape)
    throw std::domain_error("monomial evaluation: shape mismatch");
  bool zero_numerator = false;
  for (std::size_t c = 0; c < m.expo.size(); ++c) {
    if (m.expo[c] == 0 || t.p[c] != 0.0) continue;
    if (m.expo[c] < 0) return {ORStatus::undefined, 0.0};
    zero_numerator = true;
  }
  if (zero_numerator) return {ORStatus::defined, 0.0};
  double logv = 0;
  for (std::size_t c = 0; c < m.expo.size(); ++c)
    if (m.expo[c] != 0) logv += m.expo[c] * std::log(t.p[c]);
  return {ORStatus::defined, std::exp(logv)};
}

ORValue conditional_or(const Table& t, const ConditionalORSpec& spec) {
  return evaluate_monomial(t, monomial_of(t.shape, spec));
}

ORValue marginal_or(const Table& t, int i, int j) {
  check_pair(t.shape, i, j);
  double m[2][2] = {{0, 0}, {0, 0}};
  for (std::size_t k = 0; k < t.p.size(); ++k) {
    MultiIndex alpha = cell_index(t.shape, k + 1);
    m[alpha[i - 1]][alpha[j - 1]] += t.p[k];
  }
  if (m[0][1] == 0 || m[1][0] == 0) return {ORStatus::undefined, 0.0};
  return {ORStatus::defined, m[1][1] * m[0][0] / (m[1][0] * m[0][1])};
}

std::vector<ConditionalORSpec> all_conditional_specs(const Shape& shape) {
  validate_shape(shape);
  int d = (int)shape.size();
  for (int x : shape)
    if (x != 2) throw std::domain_error("conditional-OR census needs a binary table");
  std::vector<ConditionalORSpec> out;
  for (int i = 1; i <= d; ++i) {
    for (int j = i + 1; j <= d; ++j) {
      int nfree = d - 2;
      for (int bits = 0; bits < (1 << nfree); ++bits) {
        ConditionalORSpec s;
        s.i = i;
        s.j = j;
        s.cond.resize(nfree);
        // bit order follows ascending axis order, most significant first,
        // so the census is lexicographic in the conditioning assignment
        for (int b = 0; b < nfree; ++b)
          s.cond[b] = (bits >> (nfree - 1 - b)) & 1;
        out.push_back(std::move(s));
      }
    }
  }
  return out;
}

std::vector<std::pair<ConditionalORSpec, ORValue>> all_conditional_ors(
    const Table& t) {
  std::vector<std::pair<ConditionalORSpec, ORValue>> out;
  for (auto& s : all_conditional_specs(t.shape)) {
    ORValue v = conditional_or(t, s);
    out.emplace_back(std::move(s), v);
  }
  return out;
}

bool degree_zero(const ORMonomial& m) {
  long long s = 0;
  for (int e : m.expo) s += e;
  return s == 0;
}

bool axis_balanced(const ORMonomial& m) {
  int d = (int)m.shape.size();
  for (int a = 0; a < d; ++a) {
    std::vector<long long> level_sum(m.shape[a], 0);
    for (std::size_t k = 0; k < m.expo.size(); ++k) {
      if (m.expo[k] == 0) continue;
      MultiIndex alpha = cell_index(m.shape, k + 1);
      level_sum[alpha[a]] += m.expo[k];
    }
    for (long long s : level_sum)
      if (s != 0) return false;
  }
  return true;
}

std::string spec_name(const ConditionalORSpec& spec) {
  std::string s = std::to_string(spec.i) + std::to_string(spec.j);
  if (spec.cond.empty()) return s;
  s += '|';
  for (int v : spec.cond) s += std::to_string(v);
  return s;
}

std::string product_name(const std::vector<ConditionalORSpec>& specs) {
  std::string pairs, cond;
  for (std::size_t k = 0; k < specs.size(); ++k) {
    if (k) pairs += ',';
    pairs += std::to_string(specs[k].i) + std::to_string(specs[k].j);
    for (int v : specs[k].cond) cond += std::to_string(v);
  }
  if (cond.empty()) return pairs;
  return pairs + '|' + cond;
}

ConditionalORSpec parse_spec(const Shape& shape, const std::string& text) {
  auto bar = text.find('|');
  std::string pair = text.substr(0, bar);
  std::string cond = bar == std::string::npos ? "" : text.substr(bar + 1);
  if (pair.size() != 2 || pair[0] < '1' || pair[1] < '1')
    throw std::invalid_argument("odds-ratio spec must look like \"ij|bits\"");
  ConditionalORSpec s;
  s.i = pair[0] - '0';
  s.j = pair[1] - '0';
  int d = (int)shape.size();
  if ((int)cond.size() != d - 2)
    throw std::invalid_argument("conditioning bits must cover the other axes");
  for (char ch : cond) {
    if (ch < '0' || ch > '9')
      throw std::invalid_argument("conditioning bits must be digits");
    s.cond.push_back(ch - '0');
  }
  check_pair(shape, s.i, s.j);
  int c = 0;
  for (int a = 1; a <= d; ++a) {
    if (a == s.i || a == s.j) continue;
    if (s.cond[c] >= shape[a - 1])
      throw std::invalid_argument("conditioning level out of range");
    ++c;
  }
  return s;
}

}  // namespace unimargin
