#include "doctest.h"
#include "matchgame/linprog.hpp"
#include "matchgame/zerosum.hpp"
#include "test_support.hpp"

#include <algorithm>

using namespace matchgame;
using testing_support::Rng;

namespace {

double median3(double a, double b, double c) { return std::max(std::min(a, b), std::min(std::max(a, b), c)); }

bool one_side_pure(const LevelSolve& l) { return l.x.pure_action() || l.y.pure_action(); }

}  // namespace

TEST_CASE("solve_level examples") {
  auto clamp = solve_level(RealMatrix{{1}}, 5);
  REQUIRE(clamp);
  CHECK(clamp->achieved == 1.0);

  RealMatrix anti{{0, 1}, {1, 0}};
  auto mid = solve_level(anti, 0.5);
  REQUIRE(mid);
  CHECK(mid->x.pure_action() == 0u);
  CHECK(mid->y[0] == doctest::Approx(0.5));
  CHECK(bilinear(anti, mid->x, mid->y) == doctest::Approx(0.5));

  CHECK_FALSE(solve_level(anti, -1));
}

TEST_CASE("solve_level hits every reachable level with a pure side") {
  Rng rng(21);
  for (int trial = 0; trial < 500; ++trial) {
    RealMatrix A = rng.matrix(1 + rng.integer(0, 3), 1 + rng.integer(0, 3), -10, 10);
    double c = rng.real(A.min() - 1, A.max() + 1);
    auto level = solve_level(A, c);
    if (c < A.min()) {
      CHECK_FALSE(level);
      continue;
    }
    REQUIRE(level);
    CHECK(one_side_pure(*level));
    CHECK(level->achieved == doctest::Approx(std::min(c, A.max())).epsilon(1e-12));
    CHECK(bilinear(A, level->x, level->y) == doctest::Approx(level->achieved));
  }
}

TEST_CASE("proposal values") {
  RealMatrix anti{{0, 1}, {1, 0}};
  auto top = proposal_value(anti, -1.5, 0.5);
  REQUIRE(top);
  CHECK(top->achieved == 1.0);
  CHECK(-top->achieved >= -1.5 + 0.5);

  CHECK_FALSE(proposal_value(anti, 0.5, 0.5));

  RealMatrix pennies{{-2, 2}, {2, -2}};
  auto mid = proposal_value(pennies, 0, 1);
  REQUIRE(mid);
  CHECK(bilinear(pennies, mid->x, mid->y) == doctest::Approx(-1.0));
}

TEST_CASE("proposal value is nonincreasing in the woman's floor") {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    RealMatrix A = rng.matrix(1 + rng.integer(0, 3), 1 + rng.integer(0, 3), -10, 10);
    double previous = std::numeric_limits<double>::infinity();
    for (double floor = -12; floor <= 12; floor += 0.5) {
      auto p = proposal_value(A, floor, 0.25);
      double value = p ? p->achieved : -std::numeric_limits<double>::infinity();
      CHECK(value <= previous);
      previous = value;
    }
  }
}

TEST_CASE("bids") {
  auto zero = bid(RealMatrix{{0, 1}, {1, 0}}, 0);
  REQUIRE(zero);
  CHECK(zero->lambda == 0.0);
  CHECK_FALSE(bid(RealMatrix{{2}}, 3));
  auto low = bid(RealMatrix{{-1, 1}, {1, -1}}, -1);
  REQUIRE(low);
  CHECK(low->lambda == 1.0);
}

TEST_CASE("constrained equilibrium examples") {
  RealMatrix pennies{{1, -1}, {-1, 1}};
  // the woman's outside option enters as the upper bound -v on xAy
  auto inside = cne(pennies, -0.5, -0.5, 0.1);
  CHECK(inside.value == doctest::Approx(-0.3));
  auto wide = cne(pennies, -0.5, 0.5, 0.1);
  CHECK(wide.value == doctest::Approx(0.0));
  CHECK(wide.x[0] == doctest::Approx(0.5));
  CHECK(wide.y[0] == doctest::Approx(0.5));

  auto man_side = cne(pennies, 0.5, 1, 0.1);
  CHECK(man_side.value == doctest::Approx(0.3));
  auto gains = testing_support::exact_gains(pennies, negated(pennies), man_side.x, man_side.y, 0.5, -1, 0.1);
  CHECK(gains.man <= 0.1 + 1e-9);
  CHECK(gains.woman <= 0.1 + 1e-9);

  auto woman_side = cne(pennies, -2, -0.6, 0.1);
  CHECK(woman_side.value == doctest::Approx(-0.4));
  gains = testing_support::exact_gains(pennies, negated(pennies), woman_side.x, woman_side.y, -2, 0.6, 0.1);
  CHECK(gains.man <= 0.1 + 1e-9);
  CHECK(gains.woman <= 0.1 + 1e-9);

  CHECK_THROWS_AS(cne(pennies, 2, 0, 0.1), NoFeasibleAgreement);
}

TEST_CASE("median formula and best-response checks on random instances") {
  Rng rng(99);
  int man_cases = 0, woman_cases = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    RealMatrix A = rng.matrix(1 + rng.integer(0, 3), 1 + rng.integer(0, 3), -10, 10);
    const double eps = rng.real(0.05, 1.0);
    // outside options around a random achievable value keep the band feasible
    double anchor = rng.real(A.min(), A.max());
    double u = anchor + rng.real(-3, eps);
    double upper = anchor + rng.real(-eps, 3);
    const double w = game_value(A).value;
    for (double margin : {2 * eps, eps}) {
      auto out = cne_with_margin(A, u, upper, eps, margin);
      CHECK(out.value == doctest::Approx(median3(u - margin, w, upper + margin)).epsilon(1e-9));
      CHECK(bilinear(A, out.x, out.y) == doctest::Approx(out.value));
      auto gains = testing_support::exact_gains(A, negated(A), out.x, out.y, u, -upper, eps);
      CHECK(gains.man <= eps + 1e-9);
      CHECK(gains.woman <= eps + 1e-9);
    }
    if (w < u - 2 * eps) ++man_cases;
    if (w > upper + 2 * eps) ++woman_cases;
  }
  // both constructions are exercised
  CHECK(man_cases > 50);
  CHECK(woman_cases > 50);
}

TEST_CASE("participation margin keeps both partners within eps of their options") {
  Rng rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    RealMatrix A = rng.matrix(2 + rng.integer(0, 2), 2 + rng.integer(0, 2), -10, 10);
    const double eps = 0.25;
    double anchor = rng.real(A.min(), A.max());
    double u = anchor + rng.real(-3, eps);
    double upper = anchor + rng.real(-eps, 3);
    auto out = cne_with_margin(A, u, upper, eps, eps);
    CHECK(out.value >= u - eps - 1e-9);
    CHECK(out.value <= upper + eps + 1e-9);
  }
}
