#pragma once

#include "matchgame/core.hpp"

#include <optional>
#include <span>
#include <vector>

namespace matchgame {

// Only the net transfer y - x matters.  Proposer-zero form: the man pays
// nothing unless his payoff must drop below his base utility.
TransferPlay transfer_for_man_payoff(const TransferGame& game, double u);

// The man's best deal when the woman must receive at least `woman_floor`:
// she gets exactly the floor.
struct TransferDeal {
  TransferPlay play;
  Payoffs pay;
};
TransferDeal deal_at_woman_level(const TransferGame& game, double woman_floor);

// Proposal of man i against the women's current payoffs: the partner
// maximizing a + b - v_j - eps, or nullopt for the empty player when every
// such value falls below his IRP.  `excluded` drops one woman from the scan.
struct TransferProposal {
  std::optional<std::size_t> woman;
  TransferPlay play;
  double u = 0;
};
TransferProposal optimal_proposal(const MatchingGame& g, std::size_t i, std::span<const double> women_payoffs,
                                  double eps, std::optional<std::size_t> excluded = std::nullopt);

// Value of man i's best alternative to woman j, the empty player included.
double reservation_price(const MatchingGame& g, std::size_t i, std::size_t j, std::span<const double> women_payoffs,
                         double eps);

// Woman's best payoff a + b - reservation when the man keeps `reservation`.
double transfer_bid(const TransferGame& game, double reservation);

struct CompetitionResult {
  std::size_t winner = 0;
  std::size_t loser = 0;
  double proposer_bid = 0;
  double incumbent_bid = 0;
  TransferDeal deal;  // winner's settled agreement
};

// Proposer i against incumbent i_prime for woman j.  The higher bid wins
// (ties keep the incumbent) and settles the woman at the loser's bid, but
// never below `woman_floor`.
CompetitionResult bid_and_settle(const MatchingGame& g, std::size_t i, std::size_t i_prime, std::size_t j,
                                 double beta_i, double beta_i_prime, double woman_floor);

// Men-proposing deferred acceptance on the ordinal preferences of the base
// utilities, zero transfers.  Proposals must strictly beat the woman's
// current payoff and the man's IRP.
MatchingProfile nash_stable_matching(const MatchingGame& g, std::span<const std::size_t> order);

// Lowers the paying side's transfer until the partner sits at his or her
// outside option; transfers never increase.
TransferPlay cne_transfer(const TransferGame& game, double u_eps, double v_eps, const TransferPlay& current);

}  // namespace matchgame
