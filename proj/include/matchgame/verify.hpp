#pragma once

#include "matchgame/core.hpp"

#include <vector>

namespace matchgame {

inline constexpr double kStabilityTolerance = 1e-9;

// Unmatched pair that can both gain more than eps, or an agent whose IRP
// beats the payoff by more than eps (the partner is then the empty player).
// margin is the smaller of the two gains beyond eps at the witness.
struct BlockingPair {
  AgentId man;
  AgentId woman;
  Payoffs witness;
  double margin = 0;
};

// Gains beyond eps of the best participation-preserving deviation.
struct CoupleResidual {
  std::size_t man = 0;
  std::size_t woman = 0;
  double man_gain = 0;
  double woman_gain = 0;
};

struct StabilityReport {
  bool externally_stable = true;
  std::vector<BlockingPair> blocking_pairs;
  bool internally_stable = true;
  std::vector<CoupleResidual> cne_residuals;
  double eps = 0;
  double tolerance = kStabilityTolerance;

  bool green() const { return externally_stable && internally_stable; }
};

// Largest t such that some profile of the couple (i, j) gives both partners
// at least their payoffs in p plus eps plus t, with its witness.
struct PairMargin {
  double margin = 0;
  Payoffs witness;
};
PairMargin pair_margin(const MatchingGame& g, const MatchingProfile& p, std::size_t i, std::size_t j, double eps);

StabilityReport external_stability(const MatchingGame& g, const MatchingProfile& p, double eps);

// Outside options from the profile alone, without the engine's oracles.  A
// partner counts only when he or she can be lifted strictly past the
// current payoff plus eps.
OutsideOptions verified_outside_options(const MatchingGame& g, const MatchingProfile& p, std::size_t i, std::size_t j,
                                        double eps);

// Per couple: mixed plays against the two one-sided LPs, transfers in closed
// form, repeated couples by where their limit payoff sits in the feasible
// hull.  Only the internal fields are filled.
StabilityReport internal_stability(const MatchingGame& g, const MatchingProfile& p, double eps);

// Both checks in one report.
StabilityReport verify_profile(const MatchingGame& g, const MatchingProfile& p, double eps);

struct GridBlocking {
  BlockingPair pair;
  double slack = 0;  // how far the scan may undershoot the true margin
};

// Grid scan for blocking pairs: strategy pairs with one side pure and the
// other mixing two actions in steps of `resolution` (zero-sum and strictly
// competitive), mixtures of two cells of the stage game (repeated), or net
// transfers in steps of `resolution`.  Reports pairs whose scanned margin
// exceeds the tolerance, IRP violations included.
std::vector<GridBlocking> brute_force_blocking(const MatchingGame& g, const MatchingProfile& p, double eps,
                                               double resolution);

// Lipschitz slack of the scan for pair (i, j).
double grid_slack(const MatchingGame& g, std::size_t i, std::size_t j, double resolution);

}  // namespace matchgame
