#pragma once

// Brute-force oracles and seeded generators shared by the test suites.  The
// oracles deliberately avoid the library's LP and level-set code paths.

#include "matchgame/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <vector>

namespace testing_support {

using matchgame::MixedStrategy;
using matchgame::RealMatrix;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  int integer(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return lo + static_cast<int>(draw % span);
  }
  double real(double lo, double hi) {
    double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
  }
  RealMatrix matrix(std::size_t rows, std::size_t cols, int lo, int hi) {
    RealMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = integer(lo, hi);
    return m;
  }
  MixedStrategy strategy(std::size_t n) {
    std::vector<double> w(n);
    double total = 0;
    for (auto& x : w) total += (x = real(0.0, 1.0));
    for (auto& x : w) x /= total;
    return MixedStrategy(w);
  }

 private:
  std::mt19937_64 engine_;
};

// All points of the simplex over n actions whose weights are multiples of
// 1/steps.
inline std::vector<MixedStrategy> simplex_grid(std::size_t n, int steps) {
  std::vector<MixedStrategy> out;
  std::vector<int> parts(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t k, int left) {
    if (k + 1 == n) {
      parts[k] = left;
      std::vector<double> w(n);
      for (std::size_t i = 0; i < n; ++i) w[i] = static_cast<double>(parts[i]) / steps;
      out.emplace_back(w);
      return;
    }
    for (int p = 0; p <= left; ++p) {
      parts[k] = p;
      rec(k + 1, left - p);
    }
  };
  rec(0, steps);
  return out;
}

// max over x in the grid of min over pure columns: lower value of the game
inline double grid_maximin(const RealMatrix& A, int steps) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& x : simplex_grid(A.rows(), steps)) {
    auto cols = matchgame::row_times(x, A);
    best = std::max(best, *std::min_element(cols.begin(), cols.end()));
  }
  return best;
}

// min over y in the grid of max over pure rows: upper value of the game
inline double grid_minimax(const RealMatrix& A, int steps) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& y : simplex_grid(A.cols(), steps)) {
    auto rows = matchgame::times_column(A, y);
    best = std::min(best, *std::max_element(rows.begin(), rows.end()));
  }
  return best;
}

// Maximum of u over the convex hull of `points` subject to v >= floor, by
// enumerating hull candidates: feasible points and floor crossings of every
// segment.
inline std::optional<double> hull_max_u(const std::vector<std::pair<double, double>>& points, double floor) {
  std::optional<double> best;
  auto take = [&](double u) { best = best ? std::max(*best, u) : u; };
  for (const auto& p : points)
    if (p.second >= floor) take(p.first);
  for (const auto& p : points)
    for (const auto& q : points) {
      if ((p.second - floor) * (q.second - floor) >= 0 || p.second == q.second) continue;
      double t = (floor - p.second) / (q.second - p.second);
      take(p.first + t * (q.first - p.first));
    }
  return best;
}

// max obj.x over the simplex subject to cons.x <= bound, by vertex
// enumeration: pure actions and two-action mixtures on the boundary.
inline std::optional<double> constrained_best(const std::vector<double>& obj, const std::vector<double>& cons,
                                              double bound) {
  std::optional<double> best;
  auto take = [&](double v) { best = best ? std::max(*best, v) : v; };
  const std::size_t n = obj.size();
  for (std::size_t a = 0; a < n; ++a)
    if (cons[a] <= bound) take(obj[a]);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (cons[a] <= bound || cons[b] >= bound) continue;
      double t = (cons[a] - bound) / (cons[a] - cons[b]);
      take((1 - t) * obj[a] + t * obj[b]);
    }
  return best;
}

// Deviation gains in a bi-matrix couple (man payoff A, woman payoff B) when
// each partner must keep the other at or above outside option - eps.
struct Gains {
  double man;
  double woman;
};

inline Gains exact_gains(const RealMatrix& A, const RealMatrix& B, const MixedStrategy& x, const MixedStrategy& y,
                         double u_opt, double v_opt, double eps) {
  const double u = matchgame::bilinear(A, x, y), v = matchgame::bilinear(B, x, y);
  auto a_col = matchgame::times_column(A, y);
  auto b_col = matchgame::times_column(B, y);
  std::vector<double> neg_b(b_col.size());
  for (std::size_t k = 0; k < b_col.size(); ++k) neg_b[k] = -b_col[k];
  auto man = constrained_best(a_col, neg_b, eps - v_opt);
  auto b_row = matchgame::row_times(x, B);
  auto a_row = matchgame::row_times(x, A);
  std::vector<double> neg_a(a_row.size());
  for (std::size_t k = 0; k < a_row.size(); ++k) neg_a[k] = -a_row[k];
  auto woman = constrained_best(b_row, neg_a, eps - u_opt);
  const double none = -std::numeric_limits<double>::infinity();
  return {man ? *man - u : none, woman ? *woman - v : none};
}

// Same gains scanned over a simplex grid of the deviator's strategies.
inline Gains grid_gains(const RealMatrix& A, const RealMatrix& B, const MixedStrategy& x, const MixedStrategy& y,
                        double u_opt, double v_opt, double eps, int steps) {
  const double u = matchgame::bilinear(A, x, y), v = matchgame::bilinear(B, x, y);
  const double none = -std::numeric_limits<double>::infinity();
  Gains g{none, none};
  auto a_col = matchgame::times_column(A, y), b_col = matchgame::times_column(B, y);
  for (const auto& dev : simplex_grid(A.rows(), steps)) {
    double mine = 0, theirs = 0;
    for (std::size_t s = 0; s < A.rows(); ++s) {
      mine += dev[s] * a_col[s];
      theirs += dev[s] * b_col[s];
    }
    if (theirs + eps >= v_opt) g.man = std::max(g.man, mine - u);
  }
  auto a_row = matchgame::row_times(x, A), b_row = matchgame::row_times(x, B);
  for (const auto& dev : simplex_grid(A.cols(), steps)) {
    double mine = 0, theirs = 0;
    for (std::size_t t = 0; t < A.cols(); ++t) {
      mine += dev[t] * b_row[t];
      theirs += dev[t] * a_row[t];
    }
    if (theirs + eps >= u_opt) g.woman = std::max(g.woman, mine - v);
  }
  return g;
}

}  // namespace testing_support
