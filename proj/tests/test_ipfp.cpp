#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "testutil.hpp"
#include "unimargin/ipfp.hpp"
#include "unimargin/odds.hpp"
#include "unimargin/polytope.hpp"

using namespace unimargin;

namespace {

Table sheffield() {
  return normalized(make_table({2, 2}, {274, 278, 200, 3951}, TableMode::counts));
}

double or22(const Table& t) {
  return conditional_or(t, ConditionalORSpec{1, 2, {}}).value;
}

}  // namespace

TEST_SUITE("ipfp") {
  TEST_CASE("sheffield reaches uniform margins and keeps its odds ratio") {
    auto [fit, rep] = ipfp_uniform(sheffield());
    CHECK(rep.converged);
    CHECK(rep.final_margin_deviation <= 1e-10);
    CHECK(rep.iterations_used < 100);
    CHECK(testutil::approx_cells(fit, {0.408, 0.092, 0.092, 0.408}, 0.001));
    CHECK(or22(fit) == doctest::Approx(or22(sheffield())).epsilon(1e-10));
    CHECK(is_uniform_margins(fit, 1e-9));
    CHECK(rep.kl_to_input > 0.0);
    CHECK_FALSE(rep.boundary_drift);
  }

  TEST_CASE("dense d=3 fixture lands on the reference cells") {
    Table p0 = make_table({2, 2, 2}, {0.1, 0.05, 0.3, 0.2, 0.1, 0.05, 0.15, 0.05},
                          TableMode::probability);
    auto [p1, rep] = ipfp_uniform(p0);
    CHECK(rep.converged);
    CHECK(testutil::approx_cells(p1, {0.09, 0.09, 0.14, 0.18, 0.16, 0.16, 0.11, 0.07},
                                 0.005));
    // high-precision pin against an independent solve of the same projection
    CHECK(testutil::approx_cells(p1,
                                 {0.094279, 0.092902, 0.135193, 0.177626, 0.15756,
                                  0.155259, 0.112968, 0.074213},
                                 5e-6));
  }

  TEST_CASE("a uniform-margin table is a fixed point") {
    Table u = make_table({2, 2, 2}, std::vector<double>(8, 0.125), TableMode::probability);
    auto [fit, rep] = ipfp_uniform(u);
    CHECK(rep.converged);
    CHECK(rep.iterations_used == 1);
    for (std::size_t k = 0; k < 8; ++k) CHECK(fit.p[k] == u.p[k]);
  }

  TEST_CASE("zero cells survive untouched, positives stay positive") {
    Table p0 = make_table({2, 2, 2}, {0.288, 0.106, 0, 0.106, 0, 0.106, 0.288, 0.106},
                          TableMode::probability);
    auto [p1, rep] = ipfp_uniform(p0);
    CHECK(rep.converged);
    CHECK_FALSE(rep.boundary_drift);
    CHECK(testutil::approx_cells(p1, {0.25, 0.125, 0, 0.125, 0, 0.125, 0.25, 0.125},
                                 0.001));
    CHECK(p1.p[2] == 0.0);
    CHECK(p1.p[4] == 0.0);
    for (std::size_t k = 0; k < 8; ++k)
      if (p0.p[k] > 0) CHECK(p1.p[k] > 0.0);
  }

  TEST_CASE("three-zero fixture keeps its triple-product invariant") {
    Table p0 = make_table({2, 2, 2}, {0.40, 0.15, 0.15, 0, 0.15, 0, 0, 0.15},
                          TableMode::probability);
    auto [p1, rep] = ipfp_uniform(p0);
    CHECK(rep.converged);
    CHECK(testutil::approx_cells(p1,
                                 {0.225345, 0.137328, 0.137328, 0, 0.137328, 0, 0,
                                  0.362672},
                                 1e-4));
    Shape sh{2, 2, 2};
    ORMonomial triple = monomial_product({monomial_of(sh, {1, 2, {0}}),
                                          monomial_of(sh, {1, 3, {0}}),
                                          monomial_of(sh, {2, 3, {1}})});
    double v0 = evaluate_monomial(p0, triple).value;
    double v1 = evaluate_monomial(p1, triple).value;
    CHECK(v0 == doctest::Approx(64.0 / 9).epsilon(1e-9));
    CHECK(v1 == doctest::Approx(v0).epsilon(1e-8));
  }

  TEST_CASE("conditional odds ratios are preserved on random tables") {
    std::mt19937 rng(19);
    for (const Shape& sh : {Shape{2, 2, 2}, Shape{2, 2, 2, 2}, Shape{2, 2, 2, 2, 2}}) {
      for (int rep = 0; rep < 5; ++rep) {
        Table t = testutil::random_positive(sh, rng);
        auto [fit, r] = ipfp_uniform(t);
        REQUIRE(r.converged);
        for (const auto& s : all_conditional_specs(sh)) {
          double a = conditional_or(t, s).value;
          double b = conditional_or(fit, s).value;
          CHECK(std::fabs(a - b) <= 1e-8 * std::max(1.0, std::fabs(a)));
        }
      }
    }
  }

  TEST_CASE("sweep order does not change the limit") {
    Table p0 = make_table({2, 2, 2}, {0.1, 0.05, 0.3, 0.2, 0.1, 0.05, 0.15, 0.05},
                          TableMode::probability);
    IpfpConfig cfg;
    cfg.sweep = {3, 1, 2};
    auto [a, ra] = ipfp_uniform(p0);
    auto [b, rb] = ipfp_uniform(p0, cfg);
    REQUIRE(ra.converged);
    REQUIRE(rb.converged);
    for (std::size_t k = 0; k < 8; ++k) CHECK(a.p[k] == doctest::Approx(b.p[k]).epsilon(1e-8));
  }

  TEST_CASE("non-convergence is reported, not hidden") {
    IpfpConfig cfg;
    cfg.max_iter = 1;
    cfg.tol = 1e-15;
    auto [fit, rep] = ipfp_uniform(sheffield(), cfg);
    CHECK_FALSE(rep.converged);
    CHECK(rep.iterations_used == 1);
    CHECK(rep.final_margin_deviation > 0.0);
    CHECK(fit.cells() == 4);
  }

  TEST_CASE("boundary drift on an incompatible support") {
    // p00 = 0 admits no uniform-margin table with the same support: IPFP
    // pushes p11 toward zero instead of converging inside the support.
    // The collapse is harmonic (p11 ~ 1/iter), so the run exhausts its
    // sweeps far above tol; the drift flag must still catch the cell.
    Table t = make_table({2, 2}, {0.0, 0.3, 0.3, 0.4}, TableMode::probability);
    IpfpConfig cfg;
    cfg.max_iter = 20000;
    cfg.tol = 1e-10;
    auto [fit, rep] = ipfp_uniform(t, cfg);
    CHECK_FALSE(rep.converged);
    CHECK(rep.iterations_used == 20000);
    CHECK(rep.boundary_drift);
    CHECK(fit.p[3] < 2e-5);
    CHECK(fit.p[1] == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(fit.p[2] == doctest::Approx(0.5).epsilon(1e-4));
  }

  TEST_CASE("input validation") {
    Table counts = make_table({2, 2}, {1, 2, 3, 4}, TableMode::counts);
    CHECK_THROWS_AS(ipfp_uniform(counts), std::domain_error);
    Table zrow = make_table({2, 2}, {0.0, 0.0, 0.5, 0.5}, TableMode::probability);
    CHECK_THROWS_AS(ipfp_uniform(zrow), std::domain_error);
    Table ok = sheffield();
    IpfpConfig bad;
    bad.tol = 0;
    CHECK_THROWS_AS(ipfp_uniform(ok, bad), std::invalid_argument);
    bad = {};
    bad.max_iter = 0;
    CHECK_THROWS_AS(ipfp_uniform(ok, bad), std::invalid_argument);
    bad = {};
    bad.sweep = {1, 3};
    CHECK_THROWS_AS(ipfp_uniform(ok, bad), std::invalid_argument);
  }

  TEST_CASE("closed form 2x2") {
    Table one = closed_form_2x2(1.0);
    for (double v : one.p) CHECK(v == doctest::Approx(0.25).epsilon(1e-12));
    Table four = closed_form_2x2(4.0);
    CHECK(four.p[0] == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(four.p[1] == doctest::Approx(1.0 / 6).epsilon(1e-12));
    Table sheff = closed_form_2x2(19.47);
    CHECK(sheff.p[0] == doctest::Approx(0.408).epsilon(0.002));
    CHECK(sheff.p[1] == doctest::Approx(0.092).epsilon(0.02));
    CHECK(is_uniform_margins(sheff, 1e-12));
    CHECK(or22(sheff) == doctest::Approx(19.47).epsilon(1e-12));
    CHECK_THROWS_AS(closed_form_2x2(0.0), std::domain_error);
    CHECK_THROWS_AS(closed_form_2x2(-2.0), std::domain_error);
  }

  TEST_CASE("ipfp agrees with the closed form across omega") {
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> logu(std::log(0.01), std::log(100.0));
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int rep = 0; rep < 25; ++rep) {
      double omega = std::exp(logu(rng));
      // an arbitrary table with odds ratio exactly omega
      double p01 = u(rng), p10 = u(rng), p11 = u(rng);
      double p00 = omega * p01 * p10 / p11;
      double s = p00 + p01 + p10 + p11;
      Table t = make_table({2, 2}, {p00 / s, p01 / s, p10 / s, p11 / s},
                           TableMode::probability, 1e-9);
      auto [fit, r] = ipfp_uniform(t);
      REQUIRE(r.converged);
      Table cf = closed_form_2x2(omega);
      for (std::size_t k = 0; k < 4; ++k)
        CHECK(std::fabs(fit.p[k] - cf.p[k]) <= 1e-8);
    }
  }

  TEST_CASE("the fit is the KL minimizer over kernel perturbations") {
    Table p0 = make_table({2, 2, 2}, {0.288, 0.106, 0, 0.106, 0, 0.106, 0.288, 0.106},
                          TableMode::probability);
    auto [fit, rep] = ipfp_uniform(p0);
    REQUIRE(rep.converged);
    ZeroPattern pat = zero_pattern_of(p0);
    auto basis = kernel_basis(pat, p0.shape);
    REQUIRE(basis.size() == 2);
    // positive cells in canonical order carry the kernel coordinates
    std::vector<std::size_t> pos;
    for (std::size_t k = 0; k < 8; ++k)
      if (pat.z[k]) pos.push_back(k);
    double kl0 = kl_divergence(fit, p0);
    std::mt19937 rng(37);
    std::uniform_real_distribution<double> c(-0.02, 0.02);
    int tested = 0;
    for (int rep2 = 0; rep2 < 200 && tested < 50; ++rep2) {
      double a = c(rng), b = c(rng);
      Table q = fit;
      bool feasible = true;
      for (std::size_t idx = 0; idx < pos.size(); ++idx) {
        q.p[pos[idx]] += a * (double)basis[0][idx] + b * (double)basis[1][idx];
        if (q.p[pos[idx]] <= 0) feasible = false;
      }
      if (!feasible) continue;
      ++tested;
      CHECK(is_uniform_margins(q, 1e-9));
      CHECK(kl_divergence(q, p0) >= kl0 - 1e-9);
    }
    CHECK(tested >= 50);
  }
}
