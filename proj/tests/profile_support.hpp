#pragma once

// Random profiles and the exact-versus-grid comparison, shared by the verify
// suite and the acceptance run.

#include "matchgame/repeated.hpp"
#include "matchgame/verify.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>
#include <vector>

namespace testing_support {

using namespace matchgame;

// Random couples with random plays; ignores stability on purpose.
inline MatchingProfile random_profile(const MatchingGame& g, Rng& rng) {
  MatchingProfile p = MatchingProfile::unmatched(g);
  std::vector<std::size_t> women(g.women);
  std::iota(women.begin(), women.end(), 0);
  for (std::size_t k = women.size(); k > 1; --k) std::swap(women[k - 1], women[rng.integer(0, static_cast<int>(k) - 1)]);
  for (std::size_t i = 0; i < std::min(g.men, g.women); ++i) {
    if (rng.integer(0, 3) == 0) continue;
    const std::size_t j = women[i];
    const CoupleGame& game = g.game(i, j);
    StrategyAssignment play;
    if (const auto* tg = std::get_if<TransferGame>(&game)) {
      (void)tg;
      play = TransferPlay{static_cast<double>(rng.integer(0, 6)), static_cast<double>(rng.integer(0, 6))};
    } else if (const auto* rg = std::get_if<RepeatedGame>(&game)) {
      const auto s = static_cast<std::size_t>(rng.integer(0, static_cast<int>(rg->A.rows()) - 1));
      const auto t = static_cast<std::size_t>(rng.integer(0, static_cast<int>(rg->A.cols()) - 1));
      play = achieve_payoff(rg->A, rg->B, {rg->A(s, t), rg->B(s, t)});
    } else {
      const RealMatrix& A = std::holds_alternative<ZeroSumGame>(game) ? std::get<ZeroSumGame>(game).A
                                                                      : std::get<CompetitiveGame>(game).A;
      play = MixedPlay{rng.strategy(A.rows()), rng.strategy(A.cols())};
    }
    p.match(g, i, j, play, evaluate_payoffs(game, play));
  }
  return p;
}

struct Agreement {
  int disagreements = 0;
  int blocked = 0;
};

// Verdicts per pair: the exact test blocks beyond the grid slack but the grid
// misses it, or the grid finds a blocking pair the exact test rejects.
inline Agreement compare_with_grid(const MatchingGame& g, const MatchingProfile& p, double eps) {
  Agreement out;
  const auto report = external_stability(g, p, eps);
  const auto grid = brute_force_blocking(g, p, eps, 1e-2);
  auto key = [](const BlockingPair& b) {
    return std::tuple(b.man.is_empty, b.man.index, b.woman.is_empty, b.woman.index);
  };
  for (const auto& b : report.blocking_pairs) {
    ++out.blocked;
    const auto hit = std::find_if(grid.begin(), grid.end(), [&](const auto& x) { return key(x.pair) == key(b); });
    const double slack = b.man.is_empty || b.woman.is_empty ? 0 : grid_slack(g, b.man.index, b.woman.index, 1e-2);
    if (hit == grid.end() && b.margin > slack + kStabilityTolerance) ++out.disagreements;
  }
  for (const auto& x : grid) {
    const bool known = std::any_of(report.blocking_pairs.begin(), report.blocking_pairs.end(),
                                   [&](const auto& b) { return key(b) == key(x.pair); });
    if (!known) ++out.disagreements;
  }
  return out;
}

}  // namespace testing_support
