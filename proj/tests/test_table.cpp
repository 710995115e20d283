#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "testutil.hpp"
#include "unimargin/table.hpp"

using namespace unimargin;

TEST_SUITE("table") {
  TEST_CASE("shape validation") {
    CHECK_THROWS_AS(validate_shape({}), std::invalid_argument);
    CHECK_THROWS_AS(validate_shape({1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(validate_shape({2, 0}), std::invalid_argument);
    CHECK_NOTHROW(validate_shape({2}));
    CHECK(cell_count({2, 3, 4}) == 24);
  }

  TEST_CASE("cell_rank is a bijection, axis 1 most significant") {
    for (const Shape& shape : {Shape{2, 2, 2}, Shape{3, 4}, Shape{2, 3, 4}, Shape{5}}) {
      std::size_t n = cell_count(shape);
      for (std::size_t r = 1; r <= n; ++r) CHECK(cell_rank(shape, cell_index(shape, r)) == r);
    }
    // binary shapes: rank-1 in binary spells out the multi-index
    Shape b{2, 2, 2, 2};
    CHECK(cell_rank(b, {0, 0, 0, 0}) == 1);
    CHECK(cell_rank(b, {0, 0, 0, 1}) == 2);
    CHECK(cell_rank(b, {1, 0, 1, 1}) == 12);  // 1011 -> 11, rank 12
    CHECK(cell_rank(b, {1, 1, 1, 1}) == 16);
    CHECK(cell_index(b, 12) == MultiIndex{1, 0, 1, 1});
    CHECK_THROWS_AS(cell_rank(b, {0, 0, 2, 0}), std::out_of_range);
    CHECK_THROWS_AS(cell_rank(b, {0, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(cell_index(b, 0), std::out_of_range);
    CHECK_THROWS_AS(cell_index(b, 17), std::out_of_range);
  }

  TEST_CASE("make_table validates") {
    CHECK_THROWS_AS(make_table({2, 2}, {0.5, 0.5, 0.5}, TableMode::probability),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_table({2, 2}, {-0.1, 0.5, 0.3, 0.3}, TableMode::probability),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_table({2, 2}, {0.2, 0.2, 0.2, 0.2}, TableMode::probability),
                    std::invalid_argument);
    // within sum tolerance: renormalized to exactly 1
    Table t = make_table({2, 2}, {0.25, 0.25, 0.25, 0.2499999}, TableMode::probability);
    CHECK(t.total() == doctest::Approx(1.0).epsilon(1e-12));
    // counts kept as-is
    Table c = make_table({2, 2}, {274, 278, 200, 3951}, TableMode::counts);
    CHECK(c.total() == doctest::Approx(4703));
    CHECK(c.at({1, 1}) == doctest::Approx(3951));
  }

  TEST_CASE("normalized is idempotent") {
    Table c = make_table({2, 2}, {1, 2, 3, 4}, TableMode::counts);
    Table p = normalized(c);
    CHECK(p.mode == TableMode::probability);
    CHECK(p.p[3] == doctest::Approx(0.4));
    Table q = normalized(p);
    for (std::size_t i = 0; i < 4; ++i) CHECK(q.p[i] == p.p[i]);
  }

  TEST_CASE("margins sum to the total") {
    std::mt19937 rng(7);
    for (const Shape& shape : {Shape{2, 2, 2}, Shape{3, 4}, Shape{2, 3, 4}}) {
      Table t = testutil::random_positive(shape, rng);
      auto ms = margins(t);
      REQUIRE(ms.size() == shape.size());
      for (std::size_t a = 0; a < ms.size(); ++a) {
        REQUIRE((int)ms[a].size() == shape[a]);
        double s = 0;
        for (double x : ms[a]) s += x;
        CHECK(s == doctest::Approx(t.total()).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("margin picks the right slices") {
    // 2x3 counts, margins computable by hand
    Table t = make_table({2, 3}, {1, 2, 3, 4, 5, 6}, TableMode::counts);
    auto m1 = margin(t, 1);
    CHECK(m1[0] == doctest::Approx(6));
    CHECK(m1[1] == doctest::Approx(15));
    auto m2 = margin(t, 2);
    CHECK(m2[0] == doctest::Approx(5));
    CHECK(m2[1] == doctest::Approx(7));
    CHECK(m2[2] == doctest::Approx(9));
    CHECK_THROWS_AS(margin(t, 0), std::out_of_range);
    CHECK_THROWS_AS(margin(t, 3), std::out_of_range);
  }

  TEST_CASE("is_uniform_margins") {
    Table u = make_table({2, 2}, {0.25, 0.25, 0.25, 0.25}, TableMode::probability);
    CHECK(is_uniform_margins(u, 1e-12));
    Table v = make_table({2, 2}, {0.4, 0.1, 0.1, 0.4}, TableMode::probability);
    CHECK(is_uniform_margins(v, 1e-12));
    Table w = make_table({2, 2}, {0.3, 0.3, 0.2, 0.2}, TableMode::probability);
    CHECK_FALSE(is_uniform_margins(w, 1e-9));
    Table c = make_table({2, 2}, {1, 1, 1, 1}, TableMode::counts);
    CHECK_THROWS_AS(is_uniform_margins(c, 1e-9), std::invalid_argument);
  }

  TEST_CASE("kl divergence") {
    std::mt19937 rng(11);
    Table p = testutil::random_positive({2, 2, 2}, rng);
    Table q = testutil::random_positive({2, 2, 2}, rng);
    CHECK(kl_divergence(q, p) >= 0.0);
    CHECK(kl_divergence(p, p) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(kl_divergence(q, q) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(kl_divergence(q, p) > 1e-6);  // distinct tables stay separated
    // support violation: q puts mass where p has none
    Table z = make_table({2, 2}, {0.0, 0.5, 0.25, 0.25}, TableMode::probability);
    Table f = make_table({2, 2}, {0.25, 0.25, 0.25, 0.25}, TableMode::probability);
    CHECK_THROWS_AS(kl_divergence(f, z), std::domain_error);
    CHECK_NOTHROW(kl_divergence(z, f));
  }

  TEST_CASE("zero pattern round-trips") {
    Shape shape{2, 2, 2};
    ZeroPattern z = ZeroPattern::from_string(shape, "01011010");
    CHECK(z.to_string() == "01011010");
    CHECK(z.zero_count() == 4);
    CHECK(z.positive_mask() == 0b01011010u);  // bit i <=> cell i+1
    ZeroPattern m = ZeroPattern::from_mask(shape, z.positive_mask());
    CHECK(m.to_string() == z.to_string());
    ZeroPattern c = ZeroPattern::from_zero_cells(
        shape, {{0, 0, 0}, {0, 1, 0}, {1, 0, 1}, {1, 1, 1}});
    CHECK(c.to_string() == "01011010");
    CHECK(ZeroPattern::all_ones(shape).to_string() == "11111111");
    CHECK_THROWS_AS(ZeroPattern::from_string(shape, "0101"), std::invalid_argument);
    CHECK_THROWS_AS(ZeroPattern::from_string(shape, "0101101x"), std::invalid_argument);
    CHECK_THROWS_AS(validate_pattern(ZeroPattern::from_string(shape, "00000000")),
                    std::domain_error);
  }

  TEST_CASE("zero_pattern_of") {
    Table t = make_table({2, 2}, {0.0, 0.5, 0.5, 0.0}, TableMode::probability);
    CHECK(zero_pattern_of(t).to_string() == "0110");
    Table s = make_table({2, 2}, {1e-13, 0.5, 0.5 - 1e-13, 0.0}, TableMode::probability);
    CHECK(zero_pattern_of(s).to_string() == "1110");
    CHECK(zero_pattern_of(s, 1e-12).to_string() == "0110");
  }

  TEST_CASE("exact margins") {
    using unimargin::Rational;
    std::vector<Rational> r = {Rational(1, 4), Rational(1, 4), Rational(1, 4),
                               Rational(1, 4)};
    CHECK(is_uniform_margins_exact({2, 2}, r));
    auto m = margin_exact({2, 2}, r, 2);
    CHECK(m[0] == Rational(1, 2));
    std::vector<Rational> bad = {Rational(1, 3), Rational(1, 6), Rational(1, 4),
                                 Rational(1, 4)};
    CHECK_FALSE(is_uniform_margins_exact({2, 2}, bad));
  }
}
