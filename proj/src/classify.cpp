#include "unimargin/classify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

#include "unimargin/lp.hpp"

namespace unimargin {

namespace {

std::uint64_t support_mask(const RationalVec& p) {
  std::uint64_t m = 0;
  for (std::size_t k = 0; k < p.size(); ++k)
    if (!p[k].is_zero()) m |= (std::uint64_t)1 << k;
  return m;
}

}  // namespace

Atlas classify_all(const Shape& shape, const ClassifyConfig& cfg) {
  validate_shape(shape);
  std::size_t n = cell_count(shape);
  if (n > 16) throw std::domain_error("classify_all bounded at 16 cells");
  auto rays = extreme_pmfs(shape);
  std::vector<std::uint64_t> supp(rays.size());
  for (std::size_t r = 0; r < rays.size(); ++r) supp[r] = support_mask(rays[r]);

  std::size_t nmask = (std::size_t)1 << n;
  // cover[m]: some ray's support fits inside m. Monotone in m, so a bottom-up
  // sweep settles every S1-empty pattern without touching the ray list again.
  std::vector<std::uint8_t> cover(nmask, 0);
  for (std::uint64_t s : supp) cover[s] = 1;
  for (std::size_t m = 1; m < nmask; ++m) {
    if (cover[m]) continue;
    for (std::size_t b = 0; b < n; ++b) {
      if ((m >> b) & 1) {
        if (cover[m & ~((std::size_t)1 << b)]) {
          cover[m] = 1;
          break;
        }
      }
    }
  }
  // cover alone says S1 != empty; recompute which masks were reachable as a
  // union-of-fitting-supports to grade compatibility in the parallel pass.

  std::vector<std::uint8_t> want_lp(nmask, 0);
  if (cfg.lp_all) {
    std::fill(want_lp.begin() + 1, want_lp.end(), 1);
  } else if (cfg.lp_sample > 0) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<std::uint64_t> dist(1, nmask - 1);
    for (std::size_t k = 0; k < cfg.lp_sample; ++k) want_lp[dist(rng)] = 1;
  }

  Atlas atlas;
  atlas.shape = shape;
  atlas.records.resize(nmask - 1);

  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t m = lo; m < hi; ++m) {
      PatternRecord& rec = atlas.records[m - 1];
      rec.positive_mask = m;
      rec.N0 = (int)(n - (std::size_t)__builtin_popcountll(m));
      if (!cover[m]) {
        rec.status = CompatibilityVerdict::Status::s1_empty;
        rec.N1 = 0;
      } else {
        int n1 = 0;
        std::uint64_t covered = 0;
        for (std::size_t r = 0; r < supp.size(); ++r) {
          if ((supp[r] & ~m) == 0) {
            ++n1;
            covered |= supp[r];
          }
        }
        rec.N1 = n1;
        rec.status = covered == m
                         ? CompatibilityVerdict::Status::compatible
                         : CompatibilityVerdict::Status::s2_proper_subset;
      }
      if (want_lp[m]) {
        auto lp = lp_feasibility(ZeroPattern::from_mask(shape, m), shape);
        rec.lp_checked = true;
        rec.lp_delta = lp.delta_star;
        bool lp_pos = lp.status == LpStatus::strictly_positive;
        if (lp_pos != rec.compatible())
          throw std::runtime_error("ray and LP verdicts disagree on pattern " +
                                   ZeroPattern::from_mask(shape, m).to_string());
      }
    }
  };

  int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    work(1, nmask);
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (nmask - 1 + (std::size_t)jobs - 1) / (std::size_t)jobs;
    for (int t = 0; t < jobs; ++t) {
      std::size_t lo = 1 + (std::size_t)t * chunk;
      std::size_t hi = std::min(nmask, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  for (const auto& rec : atlas.records) {
    if (rec.compatible()) {
      ++atlas.compatible_count;
      ++atlas.crosstab[{rec.N0, rec.N1}];
    }
    if (rec.status == CompatibilityVerdict::Status::s1_empty)
      ++atlas.pruned_count;
  }
  return atlas;
}

namespace {

ProbeEntry::Kind monomial_kind(const ORMonomial& m, const ZeroPattern& pat) {
  bool zero_num = false;
  for (std::size_t c = 0; c < m.expo.size(); ++c) {
    if (m.expo[c] == 0 || pat.z[c]) continue;
    if (m.expo[c] < 0) return ProbeEntry::Kind::undefined;
    zero_num = true;
  }
  return zero_num ? ProbeEntry::Kind::zero : ProbeEntry::Kind::defined;
}

// all weight vectors with `parts` parts summing to `total` (grid over the
// simplex of restricted extreme pmfs)
void compositions(int total, int parts, std::vector<int>& cur,
                  std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int v = 0; v <= total; ++v) {
    cur.push_back(v);
    compositions(total - v, parts - 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

UniquenessReport uniqueness_probe(const ZeroPattern& pattern, const Shape& shape) {
  if (shape != Shape{2, 2, 2})
    throw std::domain_error("uniqueness_probe covers the 2x2x2 catalog only");
  auto verdict = check_compatibility_rays(pattern, shape);
  if (!verdict.compatible())
    throw std::domain_error("uniqueness_probe needs a compatible pattern");
  auto rays = extreme_pmfs(shape);

  UniquenessReport rep;
  rep.pattern = pattern;
  rep.n_rays = (int)verdict.S1.size();

  // sample grid: convex combinations of the admissible rays at resolution 1/4
  std::vector<std::vector<int>> weights;
  std::vector<int> cur;
  compositions(4, rep.n_rays, cur, weights);
  std::vector<Table> grid;
  for (const auto& w : weights) {
    std::vector<double> cells(8, 0.0);
    for (int r = 0; r < rep.n_rays; ++r) {
      if (!w[(std::size_t)r]) continue;
      const auto& ray = rays[(std::size_t)verdict.S1[(std::size_t)r]];
      for (std::size_t c = 0; c < 8; ++c)
        cells[c] += (w[(std::size_t)r] / 4.0) * ray[c].to_double();
    }
    grid.push_back(make_table(shape, std::move(cells), TableMode::probability));
  }

  auto probe = [&](const std::string& name, const ORMonomial& mono) {
    ProbeEntry e;
    e.name = name;
    e.kind = monomial_kind(mono, pattern);
    if (e.kind == ProbeEntry::Kind::defined) {
      bool first = true;
      for (const auto& t : grid) {
        ORValue v = evaluate_monomial(t, mono);
        if (v.status != ORStatus::defined) continue;
        if (first) {
          e.lo = e.hi = v.value;
          first = false;
        } else {
          e.lo = std::min(e.lo, v.value);
          e.hi = std::max(e.hi, v.value);
        }
      }
      e.separates = !first && (e.hi - e.lo) > 1e-9 * std::max(1.0, std::fabs(e.hi));
    }
    return e;
  };

  auto spec_of = [](int i, int j, int cond) {
    ConditionalORSpec s;
    s.i = i;
    s.j = j;
    s.cond = {cond};
    return s;
  };

  for (const auto& s : all_conditional_specs(shape))
    rep.singles.push_back(probe(spec_name(s), monomial_of(shape, s)));

  const int pairs[3][2] = {{1, 2}, {1, 3}, {2, 3}};
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      for (int ca = 0; ca < 2; ++ca) {
        for (int cb = 0; cb < 2; ++cb) {
          auto sa = spec_of(pairs[a][0], pairs[a][1], ca);
          auto sb = spec_of(pairs[b][0], pairs[b][1], cb);
          rep.pair_products.push_back(
              probe(product_name({sa, sb}),
                    monomial_product({monomial_of(shape, sa), monomial_of(shape, sb)})));
        }
      }
    }
  }
  for (int ca = 0; ca < 2; ++ca) {
    for (int cb = 0; cb < 2; ++cb) {
      for (int cc = 0; cc < 2; ++cc) {
        auto s1 = spec_of(1, 2, ca), s2 = spec_of(1, 3, cb), s3 = spec_of(2, 3, cc);
        rep.triple_products.push_back(probe(
            product_name({s1, s2, s3}),
            monomial_product({monomial_of(shape, s1), monomial_of(shape, s2),
                              monomial_of(shape, s3)})));
      }
    }
  }
  return rep;
}

Table lambda_family(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::domain_error("lambda must lie in [0, 1]");
  double a = lambda / 2, b = (1 - lambda) / 4;
  return make_table({2, 2, 2}, {a, b, b, 0, b, 0, 0, a + b},
                    TableMode::probability);
}

double lambda_triple_or(double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0))
    throw std::domain_error("lambda must lie in [0, 1)");
  double q = 1 - lambda;
  return 4 * lambda * lambda * (1 + lambda) / (q * q * q);
}

}  // namespace unimargin
