#include "matchgame/zerosum.hpp"

#include "matchgame/linprog.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace matchgame {

namespace {

double level_tolerance(double c) { return 1e-12 * std::max(1.0, std::fabs(c)); }

// Two-point mixture of pure actions lo and hi with value c on the line
// between a_lo and a_hi.
MixedStrategy mix_to_level(std::size_t size, std::size_t lo, double a_lo, std::size_t hi, double a_hi, double c) {
  if (a_hi == a_lo || lo == hi) return MixedStrategy::pure(size, lo);
  double lambda = std::clamp((c - a_lo) / (a_hi - a_lo), 0.0, 1.0);
  std::vector<double> w(size, 0.0);
  w[lo] += 1 - lambda;
  w[hi] += lambda;
  return MixedStrategy(std::move(w));
}

// Man's side of the construction: the game value lies strictly below c and
// c is reachable.  Returns a profile with value c where the man's best pure
// reply also earns exactly c.
std::pair<MixedStrategy, MixedStrategy> raise_to(const RealMatrix& A, double c, const MixedStrategy& y_star) {
  const std::size_t rows = A.rows(), cols = A.cols();

  // one single-constraint LP per column: max x.A[:, t] over the simplex
  std::optional<std::size_t> row, col;
  for (std::size_t t = 0; t < cols && !col; ++t) {
    std::vector<double> objective(rows);
    for (std::size_t s = 0; s < rows; ++s) objective[s] = A(s, t);
    LinearProgram lp(Sense::Maximize, objective);
    lp.add(std::vector<double>(rows, 1.0), Relation::Equal, 1.0);
    auto sol = solve(lp);
    if (!sol.optimal() || sol.value < c - level_tolerance(c)) continue;
    std::size_t s0 = static_cast<std::size_t>(
        std::max_element(sol.point.begin(), sol.point.end()) - sol.point.begin());
    if (A(s0, t) < c - level_tolerance(c)) s0 = static_cast<std::size_t>(
        std::max_element(objective.begin(), objective.end()) - objective.begin());
    row = s0;
    col = t;
  }
  if (!row) throw NoFeasibleAgreement("target level above every column maximum");

  // the row's minimum is at most the game value, hence below c
  std::size_t low = 0;
  while (low < cols && A(*row, low) > c + level_tolerance(c)) ++low;
  if (low == cols) throw NoFeasibleAgreement("target level not bracketed by the row");
  MixedStrategy y0 = mix_to_level(cols, low, A(*row, low), *col, A(*row, *col), c);

  // largest tau where some pure row still earns c against (1-tau) y0 + tau y*
  auto at_start = times_column(A, y0);
  auto at_end = times_column(A, y_star);
  double tau = -1;
  std::size_t best_row = *row;
  for (std::size_t s = 0; s < rows; ++s) {
    double f0 = at_start[s], f1 = at_end[s];
    if (f0 == f1) continue;
    double root = (f0 - c) / (f0 - f1);
    if (root < 0 || root > 1) continue;
    if (root > tau) {
      tau = root;
      best_row = s;
    }
  }
  if (tau < 0) {
    tau = 0;
    best_row = *row;
  }
  return {MixedStrategy::pure(rows, best_row), MixedStrategy::blend(y0, y_star, tau)};
}

}  // namespace

std::optional<LevelSolve> solve_level(const RealMatrix& A, double c) {
  if (A.empty()) throw ContractViolation("level solve on an empty matrix");
  const std::size_t rows = A.rows(), cols = A.cols();
  const double lo = A.min(), hi = A.max();
  if (c < lo - level_tolerance(c)) return std::nullopt;
  if (c >= hi) {
    for (std::size_t s = 0; s < rows; ++s)
      for (std::size_t t = 0; t < cols; ++t)
        if (A(s, t) == hi) return LevelSolve{MixedStrategy::pure(rows, s), MixedStrategy::pure(cols, t), hi};
  }
  c = std::max(c, lo);

  // a row holding entries on both sides of c: pure row, mixed columns
  for (std::size_t s = 0; s < rows; ++s) {
    std::optional<std::size_t> below, above;
    for (std::size_t t = 0; t < cols; ++t) {
      if (!below && A(s, t) <= c) below = t;
      if (!above && A(s, t) >= c) above = t;
    }
    if (below && above) {
      LevelSolve out{MixedStrategy::pure(rows, s), mix_to_level(cols, *below, A(s, *below), *above, A(s, *above), c), 0};
      out.achieved = bilinear(A, out.x, out.y);
      return out;
    }
  }
  // every row lies strictly on one side: mix two rows in the first column
  std::size_t below = 0, above = 0;
  while (A(below, 0) > c) ++below;
  while (A(above, 0) < c) ++above;
  LevelSolve out{mix_to_level(rows, below, A(below, 0), above, A(above, 0), c), MixedStrategy::pure(cols, 0), 0};
  out.achieved = bilinear(A, out.x, out.y);
  return out;
}

std::optional<LevelSolve> proposal_value(const RealMatrix& A, double v_floor, double eps) {
  return solve_level(A, -(v_floor + eps));
}

std::optional<Bid> bid(const RealMatrix& A, double reservation) {
  if (reservation > A.max() + level_tolerance(reservation)) return std::nullopt;
  auto level = solve_level(A, std::max(reservation, A.min()));
  if (!level) return std::nullopt;
  return Bid{0.0 - level->achieved, level->x, level->y};
}

CneResult cne(const RealMatrix& A, double u, double upper, double eps) {
  return cne_with_margin(A, u, upper, eps, 2 * eps);
}

CneResult cne_with_margin(const RealMatrix& A, double u, double upper, double eps, double margin) {
  if (A.empty()) throw ContractViolation("constrained equilibrium of an empty matrix");
  if (!(eps > 0)) throw ContractViolation("eps must be positive");
  if (margin < eps - level_tolerance(eps) || margin > 2 * eps + level_tolerance(eps))
    throw ContractViolation("margin must lie in [eps, 2 eps]");
  const double lo = std::max(u - eps, A.min());
  const double hi = std::min(upper + eps, A.max());
  if (lo > hi + level_tolerance(hi))
    throw NoFeasibleAgreement("no profile satisfies both outside options (band [" + std::to_string(lo) + ", " +
                              std::to_string(hi) + "])");

  GameValue g = game_value(A);
  const double man_target = u - margin;
  const double woman_target = upper + margin;
  if (g.value < man_target) {
    auto [x, y] = raise_to(A, man_target, g.y);
    return {x, y, bilinear(A, x, y)};
  }
  if (g.value > woman_target) {
    // the woman's side is the man's side of the game -A^T
    auto [y, x] = raise_to(negated(A.transposed()), -woman_target, g.x);
    return {x, y, bilinear(A, x, y)};
  }
  return {g.x, g.y, bilinear(A, g.x, g.y)};
}

}  // namespace matchgame
