#pragma once

#include "matchgame/core.hpp"

#include <optional>

namespace matchgame {

// Profile reaching a prescribed value of xAy; at least one side is pure.
struct LevelSolve {
  MixedStrategy x;
  MixedStrategy y;
  double achieved = 0;
};

// xAy = c.  nullopt when c < min A; c above max A is clamped to the first
// maximal entry.
std::optional<LevelSolve> solve_level(const RealMatrix& A, double c);

// Man's best profile when the woman needs -xAy >= v_floor + eps.
std::optional<LevelSolve> proposal_value(const RealMatrix& A, double v_floor, double eps);

struct Bid {
  double lambda = 0;  // woman's payoff
  MixedStrategy x;
  MixedStrategy y;
};

// Woman's best payoff -xAy when the man needs xAy >= reservation.
std::optional<Bid> bid(const RealMatrix& A, double reservation);

struct CneResult {
  MixedStrategy x;
  MixedStrategy y;
  double value = 0;  // xAy
};

// Constrained equilibrium for outside options u (the man needs
// xAy + eps >= u) and `upper` (the woman needs xAy <= upper + eps, i.e.
// upper = -her outside option).  The value is median{u - 2eps, w, upper + 2eps}
// with w the game value.  Throws NoFeasibleAgreement without a witness.
CneResult cne(const RealMatrix& A, double u, double upper, double eps);

// Same construction with the band median{u - margin, w, upper + margin}, for
// eps <= margin <= 2 eps.  margin = eps keeps both partners within eps of
// their outside options.
CneResult cne_with_margin(const RealMatrix& A, double u, double upper, double eps, double margin);

}  // namespace matchgame
