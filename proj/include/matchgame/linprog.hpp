#pragma once

#include "matchgame/core.hpp"
#include "matchgame/matrix.hpp"
#include "matchgame/rational.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace matchgame {

enum class Relation { LessEq, GreaterEq, Equal };
enum class Sense { Maximize, Minimize };
enum class LpStatus { Optimal, Infeasible, Unbounded };
enum class LpMode { Float, Rational };

template <class T>
struct LinearConstraintT {
  std::vector<T> coeffs;
  Relation relation = Relation::LessEq;
  T rhs{};
};

// Dense LP.  Variables default to the bounds [0, +inf); a missing bound is
// infinite.
template <class T>
struct LinearProgramT {
  Sense sense = Sense::Maximize;
  std::vector<T> objective;
  std::vector<LinearConstraintT<T>> constraints;
  std::vector<std::optional<T>> lower;
  std::vector<std::optional<T>> upper;

  LinearProgramT() = default;
  LinearProgramT(Sense s, std::vector<T> c)
      : sense(s), objective(std::move(c)), lower(objective.size(), T{0}), upper(objective.size()) {}

  std::size_t variables() const { return objective.size(); }
  void add(std::vector<T> coeffs, Relation rel, T rhs) {
    constraints.push_back({std::move(coeffs), rel, std::move(rhs)});
  }
  void make_free(std::size_t k) {
    lower[k].reset();
    upper[k].reset();
  }
};

using LinearProgram = LinearProgramT<double>;
using RationalProgram = LinearProgramT<Rational>;

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> point;
  double value = 0;
  std::optional<std::vector<Rational>> exact_point;
  std::optional<Rational> exact_value;

  bool optimal() const { return status == LpStatus::Optimal; }
};

// Two-phase dense simplex with Bland's rule.  Rational mode converts the
// coefficients exactly and pivots in exact arithmetic.
LpSolution solve(const LinearProgram& lp, LpMode mode = LpMode::Float);
LpSolution solve(const RationalProgram& lp);

struct GameValue {
  double value = 0;
  MixedStrategy x;  // maximin strategy of the row player
  MixedStrategy y;  // minimax strategy of the column player
};

// Value and optimal strategies of the zero-sum game where the row player
// receives xAy.
GameValue game_value(const RealMatrix& A);

struct PunishmentLevels {
  double alpha = 0;  // min_y max_x xAy
  double beta = 0;   // min_x max_y xBy
  MixedStrategy hold_man;    // woman's strategy holding the man to alpha
  MixedStrategy hold_woman;  // man's strategy holding the woman to beta
};

PunishmentLevels minmax_levels(const RealMatrix& A, const RealMatrix& B);

struct ExactPunishmentLevels {
  Rational alpha;
  Rational beta;
  std::vector<Rational> hold_man;
  std::vector<Rational> hold_woman;
};

ExactPunishmentLevels minmax_levels(const RationalMatrix& A, const RationalMatrix& B);

}  // namespace matchgame
