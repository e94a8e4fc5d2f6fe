#include <doctest.h>

#include <cmath>
#include <numeric>

#include "archtest/copula.hpp"
#include "archtest/multiplier.hpp"
#include "oracles.hpp"

using namespace archtest;

TEST_SUITE_BEGIN("multiplier");

TEST_CASE("draw values and mean") {
  Rng rng(100);
  auto draw = draw_multipliers(10000, rng);
  REQUIRE(draw.xi.size() == 10000);
  double sum = 0.0, sumsq = 0.0;
  for (double v : draw.xi) {
    REQUIRE((v == 0.0 || v == 2.0));
    sum += v;
    sumsq += v * v;
  }
  CHECK(draw.xibar == doctest::Approx(sum / 10000.0).epsilon(1e-15));
  double mean = sum / 10000.0;
  double var = sumsq / 10000.0 - mean * mean;
  CHECK(std::abs(mean - 1.0) <= 0.05);
  CHECK(std::abs(var - 1.0) <= 0.05);
}

TEST_CASE("all-zero draws are discarded") {
  // At n = 2 an all-zero vector has probability 1/4 per attempt, so a seed
  // with at least one redraw is easy to find; verify xibar > 0 throughout.
  bool found = false;
  for (std::uint64_t seed = 0; seed < 64 && !found; ++seed) {
    Rng rng(seed);
    auto draw = draw_multipliers(2, rng);
    CHECK(draw.xibar > 0.0);
    if (draw.redraws >= 1) found = true;
  }
  CHECK(found);
}

TEST_CASE("alpha examples") {
  RankMatrix rm{3, {1, 2, 3}, {1, 3, 2}};
  EmpiricalCopula ec(rm);
  auto draw = oracles::make_draw({2.0, 0.0, 2.0});
  MultiplierProcess mp(ec, draw);

  // Degenerate edges: u1 = 0 kills both terms, (1,1) is a fixed point of
  // both C_n^xi and C_n.
  CHECK(mp.alpha(0.0, 0.7) == 0.0);
  CHECK(mp.alpha(1.0, 1.0) == 0.0);

  // Hand computation at (2/3, 2/3): ranks (1,1) and (2,3); only the first
  // falls inside, weight 2/(4/3) = 3/2, so C^xi = (3/2)/3 = 1/2, C_n = 1/3.
  CHECK(mp.alpha(2.0 / 3.0, 2.0 / 3.0) ==
        doctest::Approx(std::sqrt(3.0) * (0.5 - 1.0 / 3.0)).epsilon(1e-15));
}

TEST_CASE("alpha equals the weighted indicator oracle") {
  Rng rng(55);
  auto sample = oracles::draw_sample(GumbelCopula{2.0}, 90, rng);
  auto rm = oracles::ranks_of(sample);
  EmpiricalCopula ec(rm);
  auto draw = draw_multipliers(rm.n, rng);
  MultiplierProcess mp(ec, draw);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    double u1 = unif(rng), u2 = unif(rng);
    REQUIRE(mp.alpha(u1, u2) ==
            doctest::Approx(oracles::alpha_xi(rm, draw, u1, u2))
                .epsilon(1e-12));
  }
}

TEST_CASE("equal weights collapse the process to zero") {
  Rng rng(66);
  auto sample = oracles::draw_sample(ClaytonCopula{1.0}, 40, rng);
  EmpiricalCopula ec(oracles::ranks_of(sample));
  auto draw = oracles::make_draw(std::vector<double>(40, 2.0));
  MultiplierProcess mp(ec, draw);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    REQUIRE(mp.alpha(unif(rng), unif(rng)) == 0.0);
  }
  auto field = hn_xi_field(ec, draw, Grid3(5), 0.2);
  for (double v : field.values) REQUIRE(v == 0.0);
}

TEST_CASE("bootstrap field matches the term-by-term oracle") {
  Rng rng(77);
  for (int rep = 0; rep < 3; ++rep) {
    int n = 20 + 10 * rep;  // keeps the default bandwidth below 1/2
    auto sample = oracles::draw_sample(StudentTCopula{0.5, 1}, n, rng);
    auto rm = oracles::ranks_of(sample);
    EmpiricalCopula ec(rm);
    auto draw = draw_multipliers(n, rng);
    double h = std::pow(n, -0.25);
    Grid3 grid(5);
    auto field = hn_xi_field(ec, draw, grid, h);
    for (int ix = 0; ix < grid.m; ++ix) {
      for (int iy = 0; iy < grid.m; ++iy) {
        for (int iz = 0; iz < grid.m; ++iz) {
          REQUIRE(field.at(ix, iy, iz) ==
                  doctest::Approx(oracles::hn_xi(rm, draw, grid.node(ix),
                                                 grid.node(iy), grid.node(iz),
                                                 h))
                      .epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("bootstrap field is bounded by the alpha sup") {
  // Twelve alpha terms enter each node, four of them scaled by derivative
  // estimates in [0,1] twice over, so 12 * sup|alpha| is a hard bound.
  auto sample = oracles::comonotone_sample(30);
  auto rm = oracles::ranks_of(sample);
  EmpiricalCopula ec(rm);
  Rng rng(88);
  auto draw = draw_multipliers(30, rng);
  MultiplierProcess mp(ec, draw);
  double sup = 0.0;
  for (int i = 0; i <= 30; ++i) {
    for (int j = 0; j <= 30; ++j) {
      sup = std::max(sup, std::abs(mp.alpha_at(i, j)));
    }
  }
  auto field = hn_xi_field(ec, draw, Grid3(6), std::pow(30.0, -0.25));
  for (double v : field.values) REQUIRE(std::abs(v) <= 12.0 * sup + 1e-12);
}

TEST_CASE("field is linear in the recentred weights at fixed xibar") {
  // Two draws with the same mean: every alpha term, hence the whole field,
  // is linear in xi, so a convex combination of draws maps to the same
  // combination of fields.
  Rng rng(91);
  auto sample = oracles::draw_sample(ClaytonCopula{1.0}, 24, rng);
  EmpiricalCopula ec(oracles::ranks_of(sample));
  std::vector<double> xa(24, 0.0), xb(24, 0.0);
  for (int i = 0; i < 12; ++i) xa[i] = 2.0;
  for (int i = 6; i < 18; ++i) xb[i] = 2.0;
  std::vector<double> xc(24);
  for (int i = 0; i < 24; ++i) xc[i] = 0.3 * xa[i] + 0.7 * xb[i];
  Grid3 grid(3);
  double h = 0.25;
  auto fa = hn_xi_field(ec, oracles::make_draw(xa), grid, h);
  auto fb = hn_xi_field(ec, oracles::make_draw(xb), grid, h);
  auto fc = hn_xi_field(ec, oracles::make_draw(xc), grid, h);
  for (std::size_t k = 0; k < fc.values.size(); ++k) {
    REQUIRE(fc.values[k] ==
            doctest::Approx(0.3 * fa.values[k] + 0.7 * fb.values[k])
                .epsilon(1e-10));
  }
}

TEST_CASE("bootstrap_pair is deterministic and order independent") {
  Rng rng(123);
  auto sample = oracles::draw_sample(GumbelCopula{1.5}, 60, rng);
  EmpiricalCopula ec(oracles::ranks_of(sample));
  Grid3 grid(6);
  double h = std::pow(60.0, -0.25);
  auto a = bootstrap_pair(ec, grid, h, 40, 999, 1);
  auto b = bootstrap_pair(ec, grid, h, 40, 999, 1);
  auto c = bootstrap_pair(ec, grid, h, 40, 999, 4);
  REQUIRE(a.l2 == b.l2);
  REQUIRE(a.ks == b.ks);
  REQUIRE(a.l2 == c.l2);
  REQUIRE(a.ks == c.ks);
  for (std::size_t i = 0; i < a.l2.size(); ++i) {
    REQUIRE(a.l2[i] >= 0.0);
    REQUIRE(a.ks[i] >= 0.0);
    REQUIRE(a.l2[i] <= a.ks[i] * a.ks[i] + 1e-15);
  }
  auto single = bootstrap_statistics(ec, grid, h, 40, Statistic::kKS, 999, 1);
  REQUIRE(single.stats == a.ks);
}

TEST_CASE("bootstrap quantile tracks the sampling distribution") {
  // Desk-scale calibration check: the 95% bootstrap quantile of one dataset
  // should land near the 95% quantile of the statistic over fresh datasets.
  const int n = 100;
  Grid3 grid(8);
  double h = std::pow(double(n), -0.25);
  ClaytonCopula model(1.0);

  Rng rng(2718);
  auto sample = oracles::draw_sample(model, n, rng);
  EmpiricalCopula ec(oracles::ranks_of(sample));
  auto boot = bootstrap_pair(ec, grid, h, 400, 31, 4);
  double q_boot = quantile(boot.l2, 0.95);

  std::vector<double> fresh;
  for (int r = 0; r < 200; ++r) {
    auto s = oracles::draw_sample(model, n, rng);
    EmpiricalCopula e(oracles::ranks_of(s));
    fresh.push_back(statistic_l2(hn_field(e, grid)));
  }
  double q_true = quantile(fresh, 0.95);
  CHECK(q_boot == doctest::Approx(q_true).epsilon(0.5));
  CHECK(q_boot > 0.0);
}

TEST_CASE("quantile examples") {
  CHECK(quantile({1.0, 2.0, 3.0, 4.0}, 0.5) == 2.0);
  CHECK(quantile({3.0, 1.0, 4.0, 2.0}, 0.5) == 2.0);
  CHECK(quantile({7.0}, 0.95) == 7.0);
  std::vector<double> v(100);
  std::iota(v.begin(), v.end(), 1.0);
  CHECK(quantile(v, 0.95) == 95.0);
  CHECK(quantile(v, 0.05) == 5.0);
  CHECK_THROWS_AS(static_cast<void>(quantile({}, 0.5)), std::invalid_argument);
}

TEST_SUITE_END();
