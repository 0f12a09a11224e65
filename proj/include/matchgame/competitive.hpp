#pragma once

#include "matchgame/core.hpp"
#include "matchgame/zerosum.hpp"

#include <optional>
#include <utility>

namespace matchgame {

// Which matrix is written in terms of the other.  AtoB: B = alpha A + offset;
// BtoA: A = alpha B + offset.
enum class MapDirection { AtoB, BtoA };

struct AffineMap {
  double alpha = 1;  // in (0, 1]
  double offset = 0;
  MapDirection direction = MapDirection::BtoA;
};

// Positive affine relation between A and B with scale at most 1, verified
// entrywise to 1e-9.  nullopt when none exists.
std::optional<AffineMap> detect_affine(const RealMatrix& A, const RealMatrix& B);

// Residual of the map applied to the source against the target.
double affine_residual(const AffineMap& map, const RealMatrix& A, const RealMatrix& B);

// The couple's loss matrix L = -B: the woman receives -xLy.
RealMatrix loss_matrix(const CompetitiveGame& game);

// Thresholds of the zero-sum game played in the map's source matrix.  The
// first entry bounds xMy from below for the man, the second from above for
// the woman (M the source matrix).  Here A is the man's matrix and B the loss
// matrix of the couple.
std::pair<double, double> transform_thresholds(const AffineMap& map, double irp_u, double irp_v);

// Same for outside options; the eps correction keeps the feasible sets and
// the constrained equilibria of both games identical.
std::pair<double, double> transform_outside_options(const AffineMap& map, double u, double v, double eps);

// Constrained equilibrium of the game (A, -L) for outside options (u, v) in
// the couple's own units.  value is the man's payoff xAy.
CneResult cne_competitive(const RealMatrix& A, const RealMatrix& L, double u, double v, double eps);

// Same with the participation band widened by `margin` in the source game.
CneResult cne_competitive_with_margin(const RealMatrix& A, const RealMatrix& L, double u, double v, double eps,
                                      double margin);

}  // namespace matchgame
