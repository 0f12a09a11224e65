#include "matchgame/transfers.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace matchgame {

namespace {

const TransferGame& transfer_game(const MatchingGame& g, std::size_t i, std::size_t j) {
  const auto* game = std::get_if<TransferGame>(&g.game(i, j));
  if (!game) throw ContractViolation("couple does not play a transfer game");
  return *game;
}

void require_sizes(const MatchingGame& g, std::size_t i, std::span<const double> women_payoffs) {
  if (i >= g.men) throw ContractViolation("man index out of range");
  if (women_payoffs.size() != g.women) throw ContractViolation("one payoff per woman required");
}

}  // namespace

TransferPlay transfer_for_man_payoff(const TransferGame& game, double u) {
  if (u >= game.a) return {0, u - game.a};
  return {game.a - u, 0};
}

TransferDeal deal_at_woman_level(const TransferGame& game, double woman_floor) {
  const double u = game.a + game.b - woman_floor;
  return {transfer_for_man_payoff(game, u), {u, woman_floor}};
}

TransferProposal optimal_proposal(const MatchingGame& g, std::size_t i, std::span<const double> women_payoffs,
                                  double eps, std::optional<std::size_t> excluded) {
  require_sizes(g, i, women_payoffs);
  TransferProposal best{std::nullopt, {}, -std::numeric_limits<double>::infinity()};
  for (std::size_t j = 0; j < g.women; ++j) {
    if (excluded && *excluded == j) continue;
    const auto& game = transfer_game(g, i, j);
    const double u = game.a + game.b - women_payoffs[j] - eps;
    if (u > best.u) best = {j, transfer_for_man_payoff(game, u), u};
  }
  if (!best.woman || best.u < g.irp_men[i]) return {std::nullopt, {}, g.irp_men[i]};
  return best;
}

double reservation_price(const MatchingGame& g, std::size_t i, std::size_t j, std::span<const double> women_payoffs,
                         double eps) {
  auto alternative = optimal_proposal(g, i, women_payoffs, eps, j);
  return std::max(alternative.u, g.irp_men[i]);
}

double transfer_bid(const TransferGame& game, double reservation) { return game.a + game.b - reservation; }

CompetitionResult bid_and_settle(const MatchingGame& g, std::size_t i, std::size_t i_prime, std::size_t j,
                                 double beta_i, double beta_i_prime, double woman_floor) {
  CompetitionResult out;
  out.proposer_bid = transfer_bid(transfer_game(g, i, j), beta_i);
  out.incumbent_bid = transfer_bid(transfer_game(g, i_prime, j), beta_i_prime);
  const bool proposer_wins = out.proposer_bid > out.incumbent_bid;
  out.winner = proposer_wins ? i : i_prime;
  out.loser = proposer_wins ? i_prime : i;
  const double level = std::max(proposer_wins ? out.incumbent_bid : out.proposer_bid, woman_floor);
  out.deal = deal_at_woman_level(transfer_game(g, out.winner, j), level);
  return out;
}

MatchingProfile nash_stable_matching(const MatchingGame& g, std::span<const std::size_t> order) {
  g.validate();
  if (g.kind() != GameClass::LinearTransfer && g.men * g.women > 0)
    throw ContractViolation("deferred acceptance needs a transfer market");
  MatchingProfile profile = MatchingProfile::unmatched(g);
  std::deque<std::size_t> queue(order.begin(), order.end());
  // next woman each man will consider, in his preference order
  std::vector<std::vector<std::size_t>> ranking(g.men);
  std::vector<std::size_t> next(g.men, 0);
  for (std::size_t i = 0; i < g.men; ++i) {
    auto& r = ranking[i];
    for (std::size_t j = 0; j < g.women; ++j)
      if (transfer_game(g, i, j).a > g.irp_men[i]) r.push_back(j);
    std::stable_sort(r.begin(), r.end(), [&](std::size_t x, std::size_t y) {
      return transfer_game(g, i, x).a > transfer_game(g, i, y).a;
    });
  }
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    while (next[i] < ranking[i].size()) {
      const std::size_t j = ranking[i][next[i]++];
      const auto& game = transfer_game(g, i, j);
      if (!(game.b > profile.v(j))) continue;
      auto rival = profile.husband(j);
      profile.match(g, i, j, TransferPlay{0, 0}, {game.a, game.b});
      if (rival) queue.push_back(*rival);
      break;
    }
  }
  return profile;
}

TransferPlay cne_transfer(const TransferGame& game, double u_eps, double v_eps, const TransferPlay& current) {
  if (current.x < 0 || current.y < 0) throw ContractViolation("transfers must be nonnegative");
  const double net = current.y - current.x;
  TransferPlay out = net >= 0 ? TransferPlay{0, net} : TransferPlay{-net, 0};
  if (out.y > 0) out.y = std::min(out.y, std::max(0.0, u_eps - game.a));
  if (out.x > 0) out.x = std::min(out.x, std::max(0.0, v_eps - game.b));
  return out;
}

}  // namespace matchgame
