#include "doctest.h"
#include "matchgame/repeated.hpp"
#include "test_support.hpp"

using namespace matchgame;
using testing_support::Rng;

namespace {

RationalMatrix rational(std::initializer_list<std::initializer_list<int>> rows) {
  RationalMatrix m(rows.size(), rows.begin()->size());
  std::size_t r = 0;
  for (const auto& row : rows) {
    std::size_t c = 0;
    for (int v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

// rows/cols: 0 cooperate, 1 betray
const RationalMatrix kDilemmaA = rational({{2, 0}, {3, -1}});
const RationalMatrix kDilemmaB = rational({{2, 3}, {0, -1}});

RationalMatrix random_stage(Rng& rng, std::size_t rows, std::size_t cols) {
  RationalMatrix m(rows, cols);
  for (std::size_t s = 0; s < rows; ++s)
    for (std::size_t t = 0; t < cols; ++t) m(s, t) = Rational(rng.integer(-20, 20), 2);
  return m;
}

std::vector<std::pair<double, double>> stage_points(const RationalMatrix& A, const RationalMatrix& B) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < A.values().size(); ++k)
    pts.emplace_back(to_double(A.values()[k]), to_double(B.values()[k]));
  return pts;
}

std::vector<std::pair<double, double>> swapped(std::vector<std::pair<double, double>> pts) {
  for (auto& p : pts) std::swap(p.first, p.second);
  return pts;
}

Rational span(const RationalMatrix& A, const RationalMatrix& B) { return std::max(A.max() - A.min(), B.max() - B.min()); }

PayoffPair schedule_average(const RationalMatrix& A, const RationalMatrix& B, const RepeatedStrategy& sigma) {
  Rational u = 0, v = 0;
  BigInt n = 0;
  for (const auto& run : sigma.schedule) {
    u += A(run.s, run.t) * Rational(run.count);
    v += B(run.s, run.t) * Rational(run.count);
    n += run.count;
  }
  return {u / Rational(n), v / Rational(n)};
}

std::uint64_t as_u64(const BigInt& n) { return static_cast<std::uint64_t>(n); }

}  // namespace

TEST_CASE("dilemma average (1, 1) is the uniform four-cycle") {
  auto sigma = achieve_payoff(kDilemmaA, kDilemmaB, {1, 1});
  REQUIRE(sigma.schedule.size() == 4);
  CHECK(sigma.period() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(sigma.schedule[k].s == k / 2);
    CHECK(sigma.schedule[k].t == k % 2);
    CHECK(sigma.schedule[k].count == 1);
  }
  CHECK(schedule_average(kDilemmaA, kDilemmaB, sigma) == PayoffPair{1, 1});
  auto pay = evaluate_payoffs(RepeatedGame{kDilemmaA, kDilemmaB}, sigma);
  CHECK(pay.u == 1.0);
  CHECK(pay.v == 1.0);
}

TEST_CASE("vertex and segment targets") {
  auto vertex = achieve_payoff(kDilemmaA, kDilemmaB, {3, 0});
  REQUIRE(vertex.schedule.size() == 1);
  CHECK(vertex.period() == 1);
  CHECK(vertex.schedule[0].s == 1);
  CHECK(vertex.schedule[0].t == 0);

  RationalMatrix A = rational({{0, 3}}), B = rational({{3, 0}});
  auto third = achieve_payoff(A, B, {2, 1});
  CHECK(third.period() == 3);
  REQUIRE(third.schedule.size() == 2);
  CHECK(third.schedule[0].count == 1);
  CHECK(third.schedule[1].count == 2);
  CHECK(schedule_average(A, B, third) == PayoffPair{2, 1});

  CHECK_THROWS_AS(achieve_payoff(kDilemmaA, kDilemmaB, {3, 3}), ContractViolation);
}

TEST_CASE("random hull targets are reproduced exactly") {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    auto A = random_stage(rng, 1 + rng.integer(0, 2), 1 + rng.integer(0, 2));
    auto B = random_stage(rng, A.rows(), A.cols());
    // random rational weights
    std::vector<Rational> w(A.rows() * A.cols());
    Rational total = 0;
    for (auto& x : w) total += (x = rng.integer(0, 6));
    if (total == 0) w[0] = total = 1;
    Rational u = 0, v = 0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      w[k] /= total;
      u += w[k] * A.values()[k];
      v += w[k] * B.values()[k];
    }
    auto sigma = achieve_payoff(A, B, {u, v});
    CHECK(schedule_average(A, B, sigma) == PayoffPair{u, v});
    CHECK(sigma.limit_payoff == PayoffPair{u, v});
  }
}

TEST_CASE("best payoff over the hull") {
  auto one = best_in_hull(kDilemmaA, kDilemmaB, 1);
  REQUIRE(one);
  CHECK(one->u == Rational(5, 2));
  CHECK(one->v == 1);

  auto slack = best_in_hull(kDilemmaA, kDilemmaB, -1);
  REQUIRE(slack);
  CHECK(slack->u == kDilemmaA.max());

  auto top = best_in_hull(kDilemmaA, kDilemmaB, 3);
  REQUIRE(top);
  CHECK(top->u == 0);
  CHECK_FALSE(best_in_hull(kDilemmaA, kDilemmaB, 4));
}

TEST_CASE("hull optimum agrees with vertex enumeration and is monotone") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto A = random_stage(rng, 1 + rng.integer(0, 2), 1 + rng.integer(0, 2));
    auto B = random_stage(rng, A.rows(), A.cols());
    auto pts = stage_points(A, B);
    std::optional<Rational> previous;
    for (int f = -22; f <= 22; f += 2) {
      Rational floor(f, 2);
      auto best = best_in_hull(A, B, floor);
      auto oracle = testing_support::hull_max_u(pts, to_double(floor));
      REQUIRE(best.has_value() == oracle.has_value());
      if (!best) continue;
      CHECK(to_double(best->u) == doctest::Approx(*oracle));
      if (previous) CHECK(best->u <= *previous);
      previous = best->u;
    }
  }
}

TEST_CASE("dilemma punishment levels") {
  auto levels = punishment_levels(kDilemmaA, kDilemmaB);
  CHECK(levels.alpha == 0);
  CHECK(levels.beta == 0);
}

TEST_CASE("dilemma equilibrium for options (1, 1)") {
  auto sigma = cne_repeated(kDilemmaA, kDilemmaB, 1, 1, Rational(1, 10));
  CHECK(sigma.limit_payoff == PayoffPair{Rational(51, 20), Rational(9, 10)});
  CHECK(sigma.punish_man.has_value());
  CHECK(sigma.punish_woman.has_value());
  CHECK(schedule_average(kDilemmaA, kDilemmaB, sigma) == sigma.limit_payoff);
  CHECK_THROWS_AS(cne_repeated(kDilemmaA, kDilemmaB, 3, 3, Rational(1, 10)), NoFeasibleAgreement);
}

TEST_CASE("simulation without deviations") {
  RepeatedGame game{kDilemmaA, kDilemmaB};
  auto sigma = achieve_payoff(kDilemmaA, kDilemmaB, {Rational(3, 2), Rational(1, 3)});
  const auto n = as_u64(sigma.period());
  CHECK(simulate(game, sigma, n * 7) == sigma.limit_payoff);
  const Rational width = span(kDilemmaA, kDilemmaB);
  for (std::uint64_t K : {1ull, 2ull, 5ull, 13ull, 101ull, 10000ull}) {
    auto [u, v] = simulate(game, sigma, K);
    Rational bound = width * Rational(static_cast<long long>(n), static_cast<long long>(K));
    CHECK(abs(u - sigma.limit_payoff.first) <= bound);
    CHECK(abs(v - sigma.limit_payoff.second) <= bound);
  }
}

TEST_CASE("punished man drifts to his punishment level") {
  RepeatedGame game{kDilemmaA, kDilemmaB};
  auto sigma = cne_repeated(kDilemmaA, kDilemmaB, 1, 1, Rational(1, 10));
  const auto levels = punishment_levels(kDilemmaA, kDilemmaB);
  const std::uint64_t n = as_u64(sigma.period());
  const std::uint64_t K = 10 * n * 1000;
  for (std::size_t action : {0u, 1u}) {
    ScriptedDeviation dev{Side::Man, 0, {action}};
    if (action == sigma.schedule[0].s) dev.actions = {action, 1 - action};
    auto [u, v] = simulate(game, sigma, K, dev);
    (void)v;
    CHECK(u <= levels.alpha + span(kDilemmaA, kDilemmaB) * Rational(static_cast<long long>(n + 1), static_cast<long long>(K)));
  }
}

TEST_CASE("folk-theorem contracts on random stage games") {
  Rng rng(2024);
  int mutual = 0, ignored = 0;
  const std::uint64_t K = 10000;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t size = trial % 2 == 0 ? 2 : 3;
    auto A = random_stage(rng, size, size);
    auto B = random_stage(rng, size, size);
    RepeatedGame game{A, B};
    const Rational eps(rng.integer(1, 8), 8);
    const std::size_t cell = static_cast<std::size_t>(rng.integer(0, static_cast<int>(size * size) - 1));
    const Rational u = A.values()[cell] + Rational(rng.integer(-24, 4), 4);
    const Rational v = B.values()[cell] + Rational(rng.integer(-24, 4), 4);
    auto sigma = cne_repeated(A, B, u, v, eps);
    const auto levels = punishment_levels(A, B);
    const auto [lu, lv] = sigma.limit_payoff;
    CHECK(schedule_average(A, B, sigma) == sigma.limit_payoff);
    CHECK(lu >= u - eps);
    CHECK(lv >= v - eps);
    const std::uint64_t n = as_u64(sigma.period());
    const Rational width = span(A, B);

    std::vector<ScriptedDeviation> scripts;
    for (Side who : {Side::Man, Side::Woman})
      for (std::uint64_t start = 0; start < std::min<std::uint64_t>(n, 6); ++start) {
        for (std::size_t a = 0; a < size; ++a) scripts.push_back({who, start, {a}});
        std::vector<std::size_t> random_script(1 + static_cast<std::size_t>(rng.integer(0, static_cast<int>(3 * std::min<std::uint64_t>(n, 4)))));
        for (auto& a : random_script) a = static_cast<std::size_t>(rng.integer(0, static_cast<int>(size) - 1));
        scripts.push_back({who, start, random_script});
      }

    if (sigma.punish_man && sigma.punish_woman) {
      ++mutual;
      CHECK(lu >= levels.alpha);
      CHECK(lv >= levels.beta);
      for (const auto& dev : scripts) {
        auto [du, dv] = simulate(game, sigma, K, dev);
        Rational slack = width * Rational(static_cast<long long>(dev.start + n + 1), static_cast<long long>(K));
        if (dev.deviator == Side::Man) CHECK(du <= lu + eps + slack);
        else CHECK(dv <= lv + eps + slack);
      }
      continue;
    }
    ++ignored;
    // exactly one side is ignored; a gain above the limit must cost the
    // partner his or her option
    const bool woman_ignored = sigma.punish_man.has_value();
    CHECK(sigma.punish_man.has_value() != sigma.punish_woman.has_value());
    auto pts = stage_points(A, B);
    if (woman_ignored) {
      auto top = testing_support::hull_max_u(swapped(pts), to_double(u - eps));
      REQUIRE(top);
      CHECK(to_double(lv) == doctest::Approx(*top));
    } else {
      auto top = testing_support::hull_max_u(pts, to_double(v - eps));
      REQUIRE(top);
      CHECK(to_double(lu) == doctest::Approx(*top));
    }
    for (const auto& dev : scripts) {
      for (std::uint64_t horizon : {n, 2 * n, 3 * n, K}) {
        auto [du, dv] = simulate(game, sigma, horizon, dev);
        if (dev.deviator == Side::Woman && woman_ignored && dv > lv) CHECK(du < u - eps);
        if (dev.deviator == Side::Man && !woman_ignored && du > lu) CHECK(dv < v - eps);
        if (dev.deviator == Side::Man && woman_ignored && horizon == K) {
          Rational slack = width * Rational(static_cast<long long>(dev.start + n + 1), static_cast<long long>(K));
          CHECK(du <= lu + eps + slack);
        }
        if (dev.deviator == Side::Woman && !woman_ignored && horizon == K) {
          Rational slack = width * Rational(static_cast<long long>(dev.start + n + 1), static_cast<long long>(K));
          CHECK(dv <= lv + eps + slack);
        }
      }
    }
  }
  MESSAGE("mutual punishment cases: " << mutual << ", one-sided cases: " << ignored);
  CHECK(mutual > 0);
  CHECK(ignored > 0);
}
