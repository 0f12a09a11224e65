#pragma once

#include "matchgame/core.hpp"
#include "matchgame/linprog.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace matchgame {

using PayoffPair = std::pair<Rational, Rational>;

// A point of the feasible payoff hull with its weights over the cells (s, t),
// row-major.
struct HullPoint {
  Rational u;
  Rational v;
  std::vector<Rational> weights;
};

enum class Priority { ManFirst, WomanFirst };

// Lexicographic optimum over co{(A(s,t), B(s,t))} restricted to U >= floor_u
// and V >= floor_v: ManFirst maximizes U then V, WomanFirst V then U.
// nullopt when the restricted set is empty.
std::optional<HullPoint> hull_optimum(const RationalMatrix& A, const RationalMatrix& B, Priority priority,
                                      const std::optional<Rational>& floor_u, const std::optional<Rational>& floor_v);

// Man's best payoff over the hull with V >= floor_v (ties: best V).
std::optional<HullPoint> best_in_hull(const RationalMatrix& A, const RationalMatrix& B, const Rational& floor_v);

bool in_hull(const RationalMatrix& A, const RationalMatrix& B, const PayoffPair& point);

// Cells in lexicographic (s, t) order, each repeated weight * lcm(denominators)
// stages.
std::vector<ScheduleRun> schedule_from_weights(std::size_t cols, const std::vector<Rational>& weights);

// Pure cyclic schedule whose average is exactly `target`.  Among the
// representations the one with the smallest largest weight is used.  Throws
// ContractViolation when the target lies outside the hull.
RepeatedStrategy achieve_payoff(const RationalMatrix& A, const RationalMatrix& B, const PayoffPair& target);

ExactPunishmentLevels punishment_levels(const RationalMatrix& A, const RationalMatrix& B);

// Constrained equilibrium of the repeated couple for outside options (u, v).
// Throws NoFeasibleAgreement when no feasible payoff clears both options
// minus eps.
RepeatedStrategy cne_repeated(const RationalMatrix& A, const RationalMatrix& B, const Rational& u, const Rational& v,
                              const Rational& eps);

// Deviation of one agent: from stage `start` on (0-based) the deviator plays
// `actions` cyclically instead of the schedule.
struct ScriptedDeviation {
  Side deviator = Side::Man;
  std::uint64_t start = 0;
  std::vector<std::size_t> actions;
};

// Exact expected average payoffs over the first K stages.  Once the
// deviator leaves the schedule the partner switches to the punishment, if
// any, for the rest of the play.
PayoffPair simulate(const RepeatedGame& game, const RepeatedStrategy& sigma, std::uint64_t K,
                    const std::optional<ScriptedDeviation>& deviation = std::nullopt);

}  // namespace matchgame
