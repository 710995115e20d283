#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "doctest.h"
#include "testutil.hpp"
#include "unimargin/classify.hpp"
#include "unimargin/odds.hpp"

using namespace unimargin;

namespace {

const ProbeEntry& by_name(const std::vector<ProbeEntry>& v, const std::string& n) {
  for (const auto& e : v)
    if (e.name == n) return e;
  throw std::runtime_error("probe entry missing: " + n);
}

ORMonomial triple_001() {
  Shape sh{2, 2, 2};
  return monomial_product({monomial_of(sh, {1, 2, {0}}),
                           monomial_of(sh, {1, 3, {0}}),
                           monomial_of(sh, {2, 3, {1}})});
}

}  // namespace

TEST_SUITE("classify") {
  TEST_CASE("the full 2x2x2 atlas") {
    Atlas a = classify_all({2, 2, 2});
    REQUIRE(a.records.size() == 255);
    CHECK(a.compatible_count == 45);
    CHECK(a.pruned_count == 78);
    std::map<std::pair<int, int>, int> want{{{0, 6}, 1}, {{1, 4}, 8}, {{2, 3}, 16},
                                            {{3, 2}, 8}, {{4, 1}, 2}, {{4, 2}, 6},
                                            {{6, 1}, 4}};
    CHECK(a.crosstab == want);
    int total = 0;
    for (const auto& [key, cnt] : a.crosstab) total += cnt;
    CHECK(total == a.compatible_count);
    // pruned == patterns with an empty S1
    int s1_empty = 0;
    for (const auto& r : a.records)
      if (r.status == CompatibilityVerdict::Status::s1_empty) ++s1_empty;
    CHECK(s1_empty == a.pruned_count);
  }

  TEST_CASE("individual records carry the right verdicts") {
    Atlas a = classify_all({2, 2, 2});
    const PatternRecord& all = a.records[254];
    CHECK(all.compatible());
    CHECK(all.N0 == 0);
    CHECK(all.N1 == 6);
    const PatternRecord& z4 = a.records[0b01011010 - 1];
    CHECK(z4.compatible());
    CHECK(z4.N0 == 4);
    CHECK(z4.N1 == 2);
    const PatternRecord& z3 = a.records[0b11111010 - 1];
    CHECK(z3.status == CompatibilityVerdict::Status::s2_proper_subset);
    CHECK(z3.N0 == 2);
    CHECK(z3.N1 == 2);
    const PatternRecord& z1 = a.records[0];
    CHECK(z1.status == CompatibilityVerdict::Status::s1_empty);
    CHECK(z1.N0 == 7);
    CHECK(z1.N1 == 0);
  }

  TEST_CASE("the 2x2 atlas has three compatible supports") {
    Atlas a = classify_all({2, 2});
    REQUIRE(a.records.size() == 15);
    CHECK(a.compatible_count == 3);
    CHECK(a.pruned_count == 8);
    CHECK(a.records[0b0110 - 1].compatible());
    CHECK(a.records[0b1001 - 1].compatible());
    CHECK(a.records[0b1111 - 1].compatible());
    std::map<std::pair<int, int>, int> want{{{0, 2}, 1}, {{2, 1}, 2}};
    CHECK(a.crosstab == want);
  }

  TEST_CASE("LP cross-check on every pattern agrees with the rays") {
    ClassifyConfig cfg;
    cfg.lp_all = true;
    Atlas a = classify_all({2, 2, 2}, cfg);  // throws on any disagreement
    for (const auto& r : a.records) {
      CHECK(r.lp_checked);
      CHECK((r.lp_delta > 1e-9) == r.compatible());
    }
  }

  TEST_CASE("LP sampling touches only the requested number of patterns") {
    ClassifyConfig cfg;
    cfg.lp_sample = 40;
    cfg.seed = 7;
    Atlas a = classify_all({2, 2, 2}, cfg);
    int checked = 0;
    for (const auto& r : a.records)
      if (r.lp_checked) ++checked;
    CHECK(checked >= 1);
    CHECK(checked <= 40);
  }

  TEST_CASE("thread count does not change the atlas") {
    ClassifyConfig par;
    par.jobs = 4;
    Atlas a = classify_all({2, 2, 2});
    Atlas b = classify_all({2, 2, 2}, par);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
      CHECK(a.records[i].positive_mask == b.records[i].positive_mask);
      CHECK(a.records[i].status == b.records[i].status);
      CHECK(a.records[i].N0 == b.records[i].N0);
      CHECK(a.records[i].N1 == b.records[i].N1);
    }
    CHECK(a.crosstab == b.crosstab);
    CHECK(a.compatible_count == b.compatible_count);
    CHECK(a.pruned_count == b.pruned_count);
  }

  TEST_CASE("cell bound") {
    CHECK_THROWS_AS(classify_all({2, 2, 2, 2, 2}), std::domain_error);
  }

  TEST_CASE("probe of the two-zero pattern") {
    Shape sh{2, 2, 2};
    UniquenessReport rep =
        uniqueness_probe(ZeroPattern::from_string(sh, "11010111"), sh);
    CHECK(rep.n_rays == 3);
    REQUIRE(rep.singles.size() == 6);
    REQUIRE(rep.pair_products.size() == 12);
    REQUIRE(rep.triple_products.size() == 8);
    CHECK(by_name(rep.singles, "12|0").kind == ProbeEntry::Kind::undefined);
    CHECK(by_name(rep.singles, "13|0").kind == ProbeEntry::Kind::undefined);
    CHECK(by_name(rep.singles, "23|0").kind == ProbeEntry::Kind::undefined);
    CHECK(by_name(rep.singles, "13|1").kind == ProbeEntry::Kind::zero);
    CHECK(by_name(rep.singles, "23|1").kind == ProbeEntry::Kind::zero);
    const ProbeEntry& w12 = by_name(rep.singles, "12|1");
    CHECK(w12.kind == ProbeEntry::Kind::defined);
    CHECK(w12.separates);  // 4ac/b^2 over the mixture weights: not constant
    CHECK(w12.lo == doctest::Approx(0.0));
    CHECK(w12.hi == doctest::Approx(8.0));
    const ProbeEntry& pair = by_name(rep.pair_products, "13,23|01");
    CHECK(pair.kind == ProbeEntry::Kind::defined);
    CHECK(pair.separates);
  }

  TEST_CASE("probe of the three-zero pattern") {
    Shape sh{2, 2, 2};
    UniquenessReport rep =
        uniqueness_probe(ZeroPattern::from_string(sh, "11101001"), sh);
    CHECK(rep.n_rays == 2);
    for (const auto& e : rep.singles) {
      CAPTURE(e.name);
      CHECK(e.kind != ProbeEntry::Kind::defined);
    }
    for (const auto& e : rep.pair_products) {
      CAPTURE(e.name);
      CHECK(e.kind != ProbeEntry::Kind::defined);
    }
    const ProbeEntry& t = by_name(rep.triple_products, "12,13,23|001");
    CHECK(t.kind == ProbeEntry::Kind::defined);
    CHECK(t.separates);
    CHECK(t.lo == doctest::Approx(0.0));
    CHECK(t.hi == doctest::Approx(252.0).epsilon(1e-9));
  }

  TEST_CASE("probe of the full support") {
    Shape sh{2, 2, 2};
    UniquenessReport rep = uniqueness_probe(ZeroPattern::all_ones(sh), sh);
    CHECK(rep.n_rays == 6);
    for (const auto& e : rep.singles) {
      CAPTURE(e.name);
      CHECK(e.kind == ProbeEntry::Kind::defined);
    }
  }

  TEST_CASE("probe guards") {
    CHECK_THROWS_AS(uniqueness_probe(ZeroPattern::all_ones({2, 2}), {2, 2}),
                    std::domain_error);
    Shape sh{2, 2, 2};
    CHECK_THROWS_AS(uniqueness_probe(ZeroPattern::from_string(sh, "10000000"), sh),
                    std::domain_error);
    CHECK_THROWS_AS(uniqueness_probe(ZeroPattern::from_string(sh, "01011111"), sh),
                    std::domain_error);
  }

  TEST_CASE("lambda family cells and margins") {
    Table t = lambda_family(0.9);
    CHECK(t.p[0] == doctest::Approx(0.45).epsilon(1e-12));
    CHECK(t.p[1] == doctest::Approx(0.025).epsilon(1e-12));
    CHECK(t.p[3] == 0.0);
    CHECK(t.p[7] == doctest::Approx(0.475).epsilon(1e-12));
    for (double l : {0.0, 0.3, 0.5, 0.99, 1.0})
      CHECK(is_uniform_margins(lambda_family(l), 1e-12));
    CHECK(lambda_family(1.0).p[1] == 0.0);
    CHECK_THROWS_AS(lambda_family(-0.1), std::domain_error);
    CHECK_THROWS_AS(lambda_family(1.5), std::domain_error);
  }

  TEST_CASE("triple product along the lambda family") {
    CHECK(lambda_triple_or(0.9) == doctest::Approx(6156.0).epsilon(1e-9));
    CHECK(lambda_triple_or(0.0) == 0.0);
    ORMonomial m = triple_001();
    for (double l : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
      CAPTURE(l);
      ORValue v = evaluate_monomial(lambda_family(l), m);
      REQUIRE(v.status == ORStatus::defined);
      CHECK(v.value == doctest::Approx(lambda_triple_or(l)).epsilon(1e-9));
    }
    // strictly increasing on [0, 1): the family is identified by its value
    double prev = lambda_triple_or(0.0);
    for (double l = 1e-3; l < 0.999; l += 1e-3) {
      double cur = lambda_triple_or(l);
      CHECK(cur > prev);
      prev = cur;
    }
    CHECK_THROWS_AS(lambda_triple_or(1.0), std::domain_error);
    CHECK_THROWS_AS(lambda_triple_or(-0.01), std::domain_error);
  }
}
