#include "doctest.h"
#include "matchgame/appendix.hpp"
#include "matchgame/engine.hpp"
#include "matchgame/generator.hpp"
#include "matchgame/repeated.hpp"
#include "matchgame/verify.hpp"
#include "profile_support.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <numeric>
#include <string>

using namespace matchgame;
using testing_support::compare_with_grid;
using testing_support::random_profile;
using testing_support::Rng;

namespace {

MatchingGame market(GameClass kind, std::uint64_t seed, double eps) {
  GeneratorConfig cfg;
  cfg.kind = kind;
  cfg.seed = seed;
  cfg.men = 1 + seed % 4;
  cfg.women = 1 + (seed / 4) % 4;
  cfg.actions = kind == GameClass::Repeated ? 2 : 3;
  cfg.epsilon = eps;
  return generate_market(cfg);
}

std::vector<std::size_t> identity_order(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  return order;
}

}  // namespace

TEST_CASE("appendix profile after propose-dispose has no blocking pair") {
  const MatchingGame g = appendix_market();
  auto run = propose_dispose(g, appendix_order(), 1);
  auto report = external_stability(g, run.profile, 1);
  CHECK(report.externally_stable);
  CHECK(report.blocking_pairs.empty());
  CHECK(brute_force_blocking(g, run.profile, 1, 1e-2).empty());
}

TEST_CASE("appendix final profile is internally stable") {
  const MatchingGame g = appendix_market();
  auto run = solve(g, appendix_order(), 1);
  auto report = verify_profile(g, run.profile, 1);
  CHECK(report.green());
  REQUIRE(report.cne_residuals.size() == 3);
  for (const auto& r : report.cne_residuals) {
    CHECK(r.man_gain == 0);
    CHECK(r.woman_gain == 0);
  }
}

TEST_CASE("a woman pushed below her IRP is flagged") {
  const MatchingGame g = appendix_market();
  MatchingProfile p = propose_dispose(g, appendix_order(), 1).profile;
  // woman 1 sits at 1 with man 2; she pays 3 more
  auto play = std::get<TransferPlay>(p.play(2));
  play.y += 3;
  p.match(g, 2, 1, play, evaluate_payoffs(g.game(2, 1), play));
  REQUIRE(p.v(1) == -2);
  auto report = external_stability(g, p, 1);
  CHECK_FALSE(report.externally_stable);
  const bool flagged = std::any_of(report.blocking_pairs.begin(), report.blocking_pairs.end(), [](const auto& b) {
    return b.man.is_empty && !b.woman.is_empty && b.woman.index == 1;
  });
  CHECK(flagged);
  CHECK_FALSE(brute_force_blocking(g, p, 1, 1e-2).empty());

  // within eps of the IRP the empty player cannot block
  play.y -= 2.5;
  p.match(g, 2, 1, play, evaluate_payoffs(g.game(2, 1), play));
  for (const auto& b : external_stability(g, p, 1).blocking_pairs) CHECK_FALSE(b.man.is_empty);
}

TEST_CASE("one couple with money transfers") {
  // base utilities 10 and 0, both IRPs 1
  MatchingGame g;
  g.men = g.women = 1;
  g.games = {TransferGame{10, 0}};
  g.irp_men = {1};
  g.irp_women = {1};
  const double eps = 0.5;

  MatchingProfile p = MatchingProfile::unmatched(g);
  p.match(g, 0, 0, TransferPlay{1, 0}, {9, 1});
  auto fair = verify_profile(g, p, eps);
  CHECK(fair.green());

  p.match(g, 0, 0, TransferPlay{2, 0}, {8, 2});
  auto generous = verify_profile(g, p, eps);
  CHECK(generous.externally_stable);
  CHECK_FALSE(generous.internally_stable);
  REQUIRE(generous.cne_residuals.size() == 1);
  // he can cut his payment down to 1 - eps
  CHECK(generous.cne_residuals[0].man_gain == doctest::Approx(1.0));
  CHECK(generous.cne_residuals[0].woman_gain == 0);

  // single: she would accept a transfer of 1, so the pair blocks
  CHECK_FALSE(external_stability(g, MatchingProfile::unmatched(g), eps).externally_stable);
}

TEST_CASE("dilemma couple cooperating half the time is accepted") {
  MatchingGame g;
  g.men = g.women = 1;
  RationalMatrix A(2, 2), B(2, 2);
  A(0, 0) = 2, A(0, 1) = 0, A(1, 0) = 3, A(1, 1) = -1;
  B(0, 0) = 2, B(0, 1) = 3, B(1, 0) = 0, B(1, 1) = -1;
  g.games = {RepeatedGame{A, B}};
  g.irp_men = {1};
  g.irp_women = {1};
  const double eps = 0.01;
  MatchingProfile p = MatchingProfile::unmatched(g);
  auto sigma = achieve_payoff(A, B, {Rational(1), Rational(1)});
  p.match(g, 0, 0, sigma, {1, 1});
  auto opts = verified_outside_options(g, p, 0, 0, eps);
  CHECK(opts.u_eps == 1);
  CHECK(opts.v_eps == 1);
  auto report = verify_profile(g, p, eps);
  CHECK(report.green());
}

TEST_CASE("brute force on the empty market") {
  MatchingGame g;
  CHECK(brute_force_blocking(g, MatchingProfile::unmatched(g), 1, 0.1).empty());
  CHECK(verify_profile(g, MatchingProfile::unmatched(g), 1).green());
}

TEST_CASE("exact and grid verdicts agree") {
  const GameClass kinds[] = {GameClass::ZeroSum, GameClass::StrictlyCompetitive, GameClass::Repeated,
                             GameClass::LinearTransfer};
  for (GameClass kind : kinds) {
    int disagreements = 0, blocked = 0, profiles = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const double eps = seed % 2 ? 0.25 : 1.0;
      MatchingGame g = market(kind, seed + 3000, eps);
      Rng rng(seed);
      // half stable outputs, half random couples
      MatchingProfile p = seed % 4 < 2 ? propose_dispose(g, identity_order(g.men), eps).profile : random_profile(g, rng);
      auto a = compare_with_grid(g, p, eps);
      disagreements += a.disagreements;
      blocked += a.blocked;
      ++profiles;
    }
    CAPTURE(std::string(class_name(kind)));
    CHECK(disagreements == 0);
    CHECK(blocked > 0);
    CHECK(profiles == 200);
  }
}

TEST_CASE("shifting a transfer market's man utilities shifts his payoffs only") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const double eps = 1, shift = static_cast<double>(seed % 7) - 3;
    MatchingGame g = market(GameClass::LinearTransfer, seed + 700, eps);
    Rng rng(seed);
    MatchingProfile p = seed % 2 ? solve(g, identity_order(g.men), eps).profile : random_profile(g, rng);

    MatchingGame shifted = g;
    for (auto& game : shifted.games) std::get<TransferGame>(game).a += shift;
    for (auto& irp : shifted.irp_men) irp += shift;
    MatchingProfile q = MatchingProfile::unmatched(shifted);
    for (auto [i, j] : p.couples()) q.match(shifted, i, j, p.play(i), evaluate_payoffs(shifted.game(i, j), p.play(i)));
    for (std::size_t i = 0; i < g.men; ++i) CHECK(q.u(i) == doctest::Approx(p.u(i) + shift));
    for (std::size_t j = 0; j < g.women; ++j) CHECK(q.v(j) == p.v(j));

    auto before = verify_profile(g, p, eps), after = verify_profile(shifted, q, eps);
    CHECK(before.externally_stable == after.externally_stable);
    CHECK(before.internally_stable == after.internally_stable);
    CHECK(before.blocking_pairs.size() == after.blocking_pairs.size());
  }
}

TEST_CASE("engine outputs always verify") {
  const GameClass kinds[] = {GameClass::ZeroSum, GameClass::StrictlyCompetitive, GameClass::Repeated,
                             GameClass::LinearTransfer};
  for (GameClass kind : kinds)
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      CAPTURE(std::string(class_name(kind)));
      CAPTURE(seed);
      const double eps = seed % 2 ? 0.25 : 1.0;
      MatchingGame g = market(kind, seed + 1200, eps);
      auto run = solve(g, identity_order(g.men), eps);
      auto report = verify_profile(g, run.profile, eps);
      CHECK(report.green());
      for (const auto& r : report.cne_residuals) {
        CHECK(r.man_gain >= -1e-9);
        CHECK(r.woman_gain >= -1e-9);
      }
    }
}
