#include "doctest.h"
#include "matchgame/appendix.hpp"
#include "matchgame/transfers.hpp"
#include "test_support.hpp"

#include <numeric>

using namespace matchgame;
using testing_support::Rng;

namespace {

MatchingGame random_transfer_market(Rng& rng, std::size_t men, std::size_t women) {
  MatchingGame g;
  g.men = men;
  g.women = women;
  for (std::size_t k = 0; k < men * women; ++k)
    g.games.emplace_back(TransferGame{double(rng.integer(-10, 10)), double(rng.integer(-10, 10))});
  for (std::size_t i = 0; i < men; ++i) g.irp_men.push_back(rng.integer(-5, 0));
  for (std::size_t j = 0; j < women; ++j) g.irp_women.push_back(rng.integer(-5, 0));
  g.epsilon = 1;
  return g;
}

// Best own payoff over deviations of the paying side, scanned on a grid of
// transfer amounts with the partner kept at option - eps.
testing_support::Gains transfer_grid_gains(const TransferGame& game, const TransferPlay& play, double u_opt,
                                           double v_opt, double eps) {
  const Payoffs now = evaluate_payoffs(game, play);
  testing_support::Gains g{0, 0};
  for (int k = 0; k <= 4000; ++k) {
    const double amount = 0.01 * k;
    Payoffs man_dev = evaluate_payoffs(game, TransferPlay{amount, play.y});
    if (man_dev.v + eps >= v_opt) g.man = std::max(g.man, man_dev.u - now.u);
    Payoffs woman_dev = evaluate_payoffs(game, TransferPlay{play.x, amount});
    if (woman_dev.u + eps >= u_opt) g.woman = std::max(g.woman, woman_dev.v - now.v);
  }
  return g;
}

}  // namespace

TEST_CASE("appendix optimal proposals") {
  const MatchingGame g = appendix_market();
  const std::vector<double> nobody(3, 0.0);
  auto first = optimal_proposal(g, 0, nobody, 1);
  REQUIRE(first.woman);
  CHECK(*first.woman == 0);
  CHECK(first.play == TransferPlay{0, 68});
  CHECK(first.u == 151);

  // the printed value treats every woman as still at payoff 0
  auto second_printed = optimal_proposal(g, 2, nobody, 1);
  CHECK(*second_printed.woman == 0);
  CHECK(second_printed.u == 129);
  CHECK(second_printed.play == TransferPlay{0, 71});
  // after the first acceptance the first woman holds payoff 1
  auto second = optimal_proposal(g, 2, std::vector<double>{1, 0, 0}, 1);
  CHECK(*second.woman == 0);
  CHECK(second.u == 128);

  auto third = optimal_proposal(g, 1, std::vector<double>{26, 0, 0}, 1);
  CHECK(*third.woman == 0);
  CHECK(third.u == 135);
  CHECK(third.play == TransferPlay{0, 61});

  MatchingGame lonely;
  lonely.men = lonely.women = 1;
  lonely.games = {TransferGame{1, 1}};
  lonely.irp_men = {5};
  lonely.irp_women = {0};
  auto none = optimal_proposal(lonely, 0, std::vector<double>{0}, 1);
  CHECK_FALSE(none.woman);
  CHECK(none.u == 5);
}

TEST_CASE("appendix competitions") {
  const MatchingGame g = appendix_market();
  const std::vector<double> start{1, 0, 0};
  CHECK(reservation_price(g, 2, 0, start, 1) == 66);
  CHECK(reservation_price(g, 0, 0, start, 1) == 126);
  auto first = bid_and_settle(g, 2, 0, 0, 66, 126, start[0] + 1);
  CHECK(first.winner == 2);
  CHECK(first.loser == 0);
  CHECK(first.proposer_bid == 64);
  CHECK(first.incumbent_bid == 26);
  CHECK(first.deal.play == TransferPlay{0, 46});
  CHECK(first.deal.pay.u == 104);
  CHECK(first.deal.pay.v == 26);

  const std::vector<double> later{26, 0, 0};
  const double beta_i2 = reservation_price(g, 1, 0, later, 1);
  CHECK(beta_i2 == 84);
  CHECK(reservation_price(g, 2, 0, later, 1) == 66);
  auto second = bid_and_settle(g, 1, 2, 0, beta_i2, 66, 27);
  CHECK(second.winner == 1);
  CHECK(second.proposer_bid == 78);
  CHECK(second.incumbent_bid == 64);
  CHECK(second.deal.play == TransferPlay{0, 24});
  CHECK(second.deal.pay.u == 98);
}

TEST_CASE("equal bids keep the incumbent") {
  MatchingGame g;
  g.men = 2;
  g.women = 1;
  g.games = {TransferGame{5, 5}, TransferGame{5, 5}};
  g.irp_men = {0, 0};
  g.irp_women = {0};
  auto result = bid_and_settle(g, 0, 1, 0, 3, 3, 1);
  CHECK(result.winner == 1);
  CHECK(result.deal.pay.v == 7);
}

TEST_CASE("deferred acceptance on the appendix market") {
  const MatchingGame g = appendix_market();
  auto order = appendix_order();
  auto p = nash_stable_matching(g, order);
  CHECK(p.wife(0) == std::optional<std::size_t>(2));
  CHECK(p.wife(1) == std::optional<std::size_t>(0));
  CHECK(p.wife(2) == std::optional<std::size_t>(1));
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::get<TransferPlay>(p.play(i)) == TransferPlay{0, 0});

  MatchingGame lonely;
  lonely.men = lonely.women = 1;
  lonely.games = {TransferGame{4, -2}};
  lonely.irp_men = {0};
  lonely.irp_women = {-1};
  auto single = nash_stable_matching(lonely, std::vector<std::size_t>{0});
  CHECK_FALSE(single.wife(0));
}

TEST_CASE("deferred acceptance leaves no ordinal blocking pair") {
  Rng rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    MatchingGame g = random_transfer_market(rng, 1 + rng.integer(0, 4), 1 + rng.integer(0, 4));
    std::vector<std::size_t> order(g.men);
    std::iota(order.begin(), order.end(), 0);
    auto p = nash_stable_matching(g, order);
    check_profile(g, p);
    for (std::size_t i = 0; i < g.men; ++i) {
      CHECK(p.u(i) >= g.irp_men[i]);
      for (std::size_t j = 0; j < g.women; ++j) {
        if (p.wife(i) == std::optional<std::size_t>(j)) continue;
        const auto& game = std::get<TransferGame>(g.game(i, j));
        CHECK_FALSE((game.a > p.u(i) && game.b > p.v(j)));
      }
    }
    for (std::size_t j = 0; j < g.women; ++j) CHECK(p.v(j) >= g.irp_women[j]);
  }
}

TEST_CASE("transfer reduction examples") {
  CHECK(cne_transfer(TransferGame{49, 18}, 41, 0, TransferPlay{0, 17}) == TransferPlay{0, 0});
  auto reduced = cne_transfer(TransferGame{99, 28}, 89, 0, TransferPlay{0, 27});
  CHECK(reduced == TransferPlay{0, 0});
  auto pay = evaluate_payoffs(TransferGame{99, 28}, reduced);
  CHECK(pay.u == 99);
  CHECK(pay.v == 28);
  // already binding
  CHECK(cne_transfer(TransferGame{10, 10}, 14, 0, TransferPlay{0, 4}) == TransferPlay{0, 4});
  CHECK(cne_transfer(TransferGame{10, 10}, 12, 0, TransferPlay{0, 4}) == TransferPlay{0, 2});
  CHECK(cne_transfer(TransferGame{10, 10}, 0, 13, TransferPlay{5, 1}) == TransferPlay{3, 0});
}

TEST_CASE("transfer reduction conserves surplus, is idempotent and stable against deviations") {
  Rng rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    TransferGame game{double(rng.integer(-10, 10)), double(rng.integer(-10, 10))};
    TransferPlay play{double(rng.integer(0, 2)) * rng.integer(0, 8), double(rng.integer(0, 8))};
    const Payoffs before = evaluate_payoffs(game, play);
    const double eps = 0.5;
    // options the current play clears up to eps
    const double u_opt = before.u + rng.integer(-12, 0) * 0.5 + eps;
    const double v_opt = before.v + rng.integer(-12, 0) * 0.5 + eps;
    auto once = cne_transfer(game, u_opt, v_opt, play);
    auto twice = cne_transfer(game, u_opt, v_opt, once);
    CHECK(once == twice);
    const Payoffs after = evaluate_payoffs(game, once);
    CHECK(after.u + after.v == doctest::Approx(game.a + game.b));
    CHECK(after.u + eps >= u_opt - 1e-9);
    CHECK(after.v + eps >= v_opt - 1e-9);
    auto gains = transfer_grid_gains(game, once, u_opt, v_opt, eps);
    CHECK(gains.man <= eps + 1e-9);
    CHECK(gains.woman <= eps + 1e-9);
  }
}
