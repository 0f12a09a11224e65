#include "matchgame/verify.hpp"

#include "matchgame/linprog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace matchgame {

namespace {

constexpr double kNone = -std::numeric_limits<double>::infinity();

using PayoffCells = std::vector<std::pair<double, double>>;

// (U, V) of every pure profile of a matrix couple.
PayoffCells payoff_cells(const CoupleGame& game) {
  PayoffCells out;
  auto push = [&](const RealMatrix& A, const RealMatrix& B) {
    for (std::size_t k = 0; k < A.values().size(); ++k) out.emplace_back(A.values()[k], B.values()[k]);
  };
  if (const auto* zs = std::get_if<ZeroSumGame>(&game)) push(zs->A, negated(zs->A));
  else if (const auto* sc = std::get_if<CompetitiveGame>(&game)) push(sc->A, sc->B);
  else if (const auto* rg = std::get_if<RepeatedGame>(&game)) push(to_real(rg->A), to_real(rg->B));
  else throw ContractViolation("transfer couples have no payoff cells");
  return out;
}

std::pair<RealMatrix, RealMatrix> bimatrix(const CoupleGame& game) {
  if (const auto* zs = std::get_if<ZeroSumGame>(&game)) return {zs->A, negated(zs->A)};
  if (const auto* sc = std::get_if<CompetitiveGame>(&game)) return {sc->A, sc->B};
  throw ContractViolation("couple does not play a one-shot matrix game");
}

// max over s in [0, 1] of min(U - a, V - b) along the segment p -> q
PairMargin segment_margin(std::pair<double, double> p, std::pair<double, double> q, double a, double b) {
  auto at = [&](double s) {
    const double u = p.first + s * (q.first - p.first), v = p.second + s * (q.second - p.second);
    return PairMargin{std::min(u - a, v - b), {u, v}};
  };
  PairMargin best = at(0);
  auto consider = [&](double s) {
    auto m = at(s);
    if (m.margin > best.margin) best = m;
  };
  consider(1);
  // where both gaps are equal
  const double slope = (q.first - p.first) - (q.second - p.second);
  if (slope != 0) {
    const double s = ((a - p.first) - (b - p.second)) / slope;
    if (s > 0 && s < 1) consider(s);
  }
  return best;
}

// Max-margin LP over the hull of the cells: t free, weights on the simplex.
PairMargin hull_margin(const PayoffCells& cells, double a, double b) {
  const std::size_t n = cells.size();
  std::vector<double> objective(n + 1, 0.0);
  objective[n] = 1;
  LinearProgram lp(Sense::Maximize, objective);
  lp.make_free(n);
  std::vector<double> ones(n + 1, 1.0), us(n + 1), vs(n + 1);
  ones[n] = 0;
  for (std::size_t k = 0; k < n; ++k) {
    us[k] = cells[k].first;
    vs[k] = cells[k].second;
  }
  us[n] = vs[n] = -1;
  lp.add(ones, Relation::Equal, 1);
  lp.add(us, Relation::GreaterEq, a);
  lp.add(vs, Relation::GreaterEq, b);
  auto sol = solve(lp, LpMode::Rational);
  if (!sol.optimal()) throw ContractViolation("max-margin program failed");
  Payoffs w{0, 0};
  for (std::size_t k = 0; k < n; ++k) {
    w.u += sol.point[k] * cells[k].first;
    w.v += sol.point[k] * cells[k].second;
  }
  return {sol.value, w};
}

// max of U over the hull subject to V >= floor (or the roles swapped)
std::optional<double> hull_best(const PayoffCells& cells, double floor, bool for_man) {
  const std::size_t n = cells.size();
  std::vector<double> own(n), other(n);
  for (std::size_t k = 0; k < n; ++k) {
    own[k] = for_man ? cells[k].first : cells[k].second;
    other[k] = for_man ? cells[k].second : cells[k].first;
  }
  LinearProgram lp(Sense::Maximize, own);
  lp.add(std::vector<double>(n, 1.0), Relation::Equal, 1);
  lp.add(other, Relation::GreaterEq, floor);
  auto sol = solve(lp, LpMode::Rational);
  if (!sol.optimal()) return std::nullopt;
  return sol.value;
}

// Best payoff of one partner of (i, j) when the other needs more than
// `floor`; nullopt when the other cannot get past it.
std::optional<double> best_payoff(const MatchingGame& g, std::size_t i, std::size_t j, double floor, bool for_man) {
  const CoupleGame& game = g.game(i, j);
  if (const auto* tg = std::get_if<TransferGame>(&game)) return tg->a + tg->b - floor;
  const PayoffCells cells = payoff_cells(game);
  const bool reachable = std::any_of(cells.begin(), cells.end(), [&](const auto& c) {
    return (for_man ? c.second : c.first) > floor + kStabilityTolerance;
  });
  if (!reachable) return std::nullopt;
  return hull_best(cells, floor, for_man);
}

// max obj.x over the simplex subject to cons.x >= floor
std::optional<double> one_sided_best(const std::vector<double>& obj, const std::vector<double>& cons, double floor) {
  LinearProgram lp(Sense::Maximize, obj);
  lp.add(std::vector<double>(obj.size(), 1.0), Relation::Equal, 1);
  lp.add(cons, Relation::GreaterEq, floor);
  auto sol = solve(lp);
  if (!sol.optimal()) return std::nullopt;
  return sol.value;
}

double beyond(double gain, double eps) { return std::max(0.0, gain - eps); }

CoupleResidual matrix_residual(const RealMatrix& A, const RealMatrix& B, const MixedPlay& play,
                               const OutsideOptions& opts, double eps) {
  const double u = bilinear(A, play.x, play.y), v = bilinear(B, play.x, play.y);
  CoupleResidual r;
  if (auto best = one_sided_best(times_column(A, play.y), times_column(B, play.y), opts.v_eps - eps))
    r.man_gain = beyond(*best - u, eps);
  if (auto best = one_sided_best(row_times(play.x, B), row_times(play.x, A), opts.u_eps - eps))
    r.woman_gain = beyond(*best - v, eps);
  return r;
}

CoupleResidual transfer_residual(const TransferGame& game, const TransferPlay& play, const OutsideOptions& opts,
                                 double eps) {
  // each side can cut its payment until the partner sits at option - eps
  const double man_pays = std::max(0.0, opts.v_eps - eps - game.b + play.y);
  const double woman_pays = std::max(0.0, opts.u_eps - eps - game.a + play.x);
  CoupleResidual r;
  r.man_gain = beyond(play.x - man_pays, eps);
  r.woman_gain = beyond(play.y - woman_pays, eps);
  return r;
}

// Shortfalls of the limit payoff against the uniform-equilibrium
// characterization of constrained equilibria.
CoupleResidual repeated_residual(const RepeatedGame& game, const RepeatedStrategy& sigma, const OutsideOptions& opts,
                                 double eps) {
  const PayoffCells cells = payoff_cells(game);
  const auto levels = minmax_levels(to_real(game.A), to_real(game.B));
  const double u = to_double(sigma.limit_payoff.first), v = to_double(sigma.limit_payoff.second);
  const double u_floor = opts.u_eps - eps, v_floor = opts.v_eps - eps;
  const double inf = std::numeric_limits<double>::infinity();

  // max of one coordinate over the hull above both floors.  Floors travel
  // through float LPs, so an empty set is retried with the tolerance.
  auto frontier = [&](bool for_man, double floor_u, double floor_v) -> std::optional<double> {
    const std::size_t n = cells.size();
    std::vector<double> own(n), us(n), vs(n);
    for (std::size_t k = 0; k < n; ++k) {
      us[k] = cells[k].first;
      vs[k] = cells[k].second;
      own[k] = for_man ? us[k] : vs[k];
    }
    for (double slack : {0.0, kStabilityTolerance}) {
      LinearProgram lp(Sense::Maximize, own);
      lp.add(std::vector<double>(n, 1.0), Relation::Equal, 1);
      lp.add(us, Relation::GreaterEq, floor_u - slack);
      lp.add(vs, Relation::GreaterEq, floor_v - slack);
      if (auto sol = solve(lp, LpMode::Rational); sol.optimal()) return sol.value;
    }
    return std::nullopt;
  };

  CoupleResidual r;
  const double lo_u = std::max(levels.alpha, u_floor), lo_v = std::max(levels.beta, v_floor);
  if (frontier(true, lo_u, lo_v)) {
    // uniform equilibrium payoffs clearing both options exist
    r.man_gain = std::max(0.0, lo_u - u);
    r.woman_gain = std::max(0.0, lo_v - v);
    return r;
  }
  // one-sided: the agent who cannot be punished is pushed to the frontier
  // of the feasible set
  const bool woman_pushed = u_floor + kStabilityTolerance >= levels.alpha;
  auto best = frontier(!woman_pushed, u_floor, v_floor);
  if (!best) return {0, 0, inf, inf};
  r.man_gain = std::max(0.0, u_floor - u);
  r.woman_gain = std::max(0.0, v_floor - v);
  if (woman_pushed) r.woman_gain = std::max(r.woman_gain, *best - v);
  else r.man_gain = std::max(r.man_gain, *best - u);
  return r;
}

// Pairs with an empty player: staying single beats the payoff by more
// than eps.
std::vector<BlockingPair> irp_violations(const MatchingGame& g, const MatchingProfile& p, double eps) {
  std::vector<BlockingPair> out;
  for (std::size_t i = 0; i < g.men; ++i)
    if (const double gap = g.irp_men[i] - p.u(i) - eps; gap > kStabilityTolerance)
      out.push_back({AgentId::man(i), AgentId::empty(Side::Woman), {g.irp_men[i], 0}, gap});
  for (std::size_t j = 0; j < g.women; ++j)
    if (const double gap = g.irp_women[j] - p.v(j) - eps; gap > kStabilityTolerance)
      out.push_back({AgentId::empty(Side::Man), AgentId::woman(j), {0, g.irp_women[j]}, gap});
  return out;
}

}  // namespace

PairMargin pair_margin(const MatchingGame& g, const MatchingProfile& p, std::size_t i, std::size_t j, double eps) {
  const double a = p.u(i) + eps, b = p.v(j) + eps;
  const CoupleGame& game = g.game(i, j);
  if (const auto* tg = std::get_if<TransferGame>(&game)) {
    const double m = (tg->a + tg->b - a - b) / 2;
    return {m, {a + m, b + m}};
  }
  if (std::holds_alternative<RepeatedGame>(game)) return hull_margin(payoff_cells(game), a, b);
  // one-shot strictly competitive payoffs fill the segment between the
  // man's worst and best cells
  const PayoffCells cells = payoff_cells(game);
  auto by_u = [](const auto& x, const auto& y) { return x.first < y.first; };
  const auto lo = *std::min_element(cells.begin(), cells.end(), by_u);
  const auto hi = *std::max_element(cells.begin(), cells.end(), by_u);
  return segment_margin(lo, hi, a, b);
}

StabilityReport external_stability(const MatchingGame& g, const MatchingProfile& p, double eps) {
  g.validate();
  check_profile(g, p);
  StabilityReport report;
  report.eps = eps;
  report.blocking_pairs = irp_violations(g, p, eps);
  for (std::size_t i = 0; i < g.men; ++i)
    for (std::size_t j = 0; j < g.women; ++j) {
      if (p.wife(i) == std::optional<std::size_t>(j)) continue;
      auto m = pair_margin(g, p, i, j, eps);
      if (m.margin > kStabilityTolerance)
        report.blocking_pairs.push_back({AgentId::man(i), AgentId::woman(j), m.witness, m.margin});
    }
  report.externally_stable = report.blocking_pairs.empty();
  return report;
}

OutsideOptions verified_outside_options(const MatchingGame& g, const MatchingProfile& p, std::size_t i, std::size_t j,
                                        double eps) {
  OutsideOptions out{g.irp_men[i], g.irp_women[j]};
  for (std::size_t k = 0; k < g.women; ++k) {
    if (k == j) continue;
    if (auto u = best_payoff(g, i, k, p.v(k) + eps, true)) out.u_eps = std::max(out.u_eps, *u);
  }
  for (std::size_t k = 0; k < g.men; ++k) {
    if (k == i) continue;
    if (auto v = best_payoff(g, k, j, p.u(k) + eps, false)) out.v_eps = std::max(out.v_eps, *v);
  }
  return out;
}

StabilityReport internal_stability(const MatchingGame& g, const MatchingProfile& p, double eps) {
  g.validate();
  check_profile(g, p);
  StabilityReport report;
  report.eps = eps;
  for (auto [i, j] : p.couples()) {
    const OutsideOptions opts = verified_outside_options(g, p, i, j, eps);
    const CoupleGame& game = g.game(i, j);
    const StrategyAssignment& play = p.play(i);
    CoupleResidual r;
    if (const auto* tg = std::get_if<TransferGame>(&game)) {
      r = transfer_residual(*tg, std::get<TransferPlay>(play), opts, eps);
    } else if (const auto* rg = std::get_if<RepeatedGame>(&game)) {
      r = repeated_residual(*rg, std::get<RepeatedStrategy>(play), opts, eps);
    } else {
      auto [A, B] = bimatrix(game);
      r = matrix_residual(A, B, std::get<MixedPlay>(play), opts, eps);
    }
    r.man = i;
    r.woman = j;
    if (r.man_gain > kStabilityTolerance || r.woman_gain > kStabilityTolerance) report.internally_stable = false;
    report.cne_residuals.push_back(r);
  }
  return report;
}

StabilityReport verify_profile(const MatchingGame& g, const MatchingProfile& p, double eps) {
  StabilityReport report = external_stability(g, p, eps);
  StabilityReport internal = internal_stability(g, p, eps);
  report.internally_stable = internal.internally_stable;
  report.cne_residuals = std::move(internal.cne_residuals);
  return report;
}

double grid_slack(const MatchingGame& g, std::size_t i, std::size_t j, double resolution) {
  const CoupleGame& game = g.game(i, j);
  if (std::holds_alternative<TransferGame>(game)) return resolution / 2;
  double span = 0;
  const PayoffCells cells = payoff_cells(game);
  for (const auto& [u1, v1] : cells)
    for (const auto& [u2, v2] : cells) span = std::max({span, std::fabs(u1 - u2), std::fabs(v1 - v2)});
  return span * resolution / 2;
}

std::vector<GridBlocking> brute_force_blocking(const MatchingGame& g, const MatchingProfile& p, double eps,
                                               double resolution) {
  if (!(resolution > 0) || resolution > 1) throw ContractViolation("grid resolution must lie in (0, 1]");
  g.validate();
  check_profile(g, p);
  std::vector<GridBlocking> out;
  for (const auto& b : irp_violations(g, p, eps)) out.push_back({b, 0});

  const auto steps = static_cast<long>(std::ceil(1 / resolution - 1e-9));
  for (std::size_t i = 0; i < g.men; ++i)
    for (std::size_t j = 0; j < g.women; ++j) {
      if (p.wife(i) == std::optional<std::size_t>(j)) continue;
      const double a = p.u(i) + eps, b = p.v(j) + eps;
      BlockingPair best{AgentId::man(i), AgentId::woman(j), {0, 0}, kNone};
      auto consider = [&](double u, double v) {
        const double m = std::min(u - a, v - b);
        if (m > best.margin) best = {AgentId::man(i), AgentId::woman(j), {u, v}, m};
      };
      auto mix = [&](std::pair<double, double> x, std::pair<double, double> y) {
        for (long k = 0; k <= steps; ++k) {
          const double w = std::min(1.0, static_cast<double>(k) / steps);
          consider((1 - w) * x.first + w * y.first, (1 - w) * x.second + w * y.second);
        }
      };
      const CoupleGame& game = g.game(i, j);
      if (const auto* tg = std::get_if<TransferGame>(&game)) {
        const double reach =
            std::fabs(tg->a) + std::fabs(tg->b) + std::fabs(p.u(i)) + std::fabs(p.v(j)) + 2 * eps + 1;
        const auto count = static_cast<long>(std::ceil(2 * reach / resolution));
        for (long k = 0; k <= count; ++k) {
          const double net = -reach + k * resolution;  // paid by the woman to the man
          consider(tg->a + net, tg->b - net);
        }
      } else if (std::holds_alternative<RepeatedGame>(game)) {
        const PayoffCells cells = payoff_cells(game);
        for (std::size_t c = 0; c < cells.size(); ++c)
          for (std::size_t d = c; d < cells.size(); ++d) mix(cells[c], cells[d]);
      } else {
        // one side pure, the other mixing two actions
        auto [A, B] = bimatrix(game);
        auto cell = [&](std::size_t s, std::size_t t) { return std::pair{A(s, t), B(s, t)}; };
        for (std::size_t t = 0; t < A.cols(); ++t)
          for (std::size_t s = 0; s < A.rows(); ++s)
            for (std::size_t s2 = s; s2 < A.rows(); ++s2) mix(cell(s, t), cell(s2, t));
        for (std::size_t s = 0; s < A.rows(); ++s)
          for (std::size_t t = 0; t < A.cols(); ++t)
            for (std::size_t t2 = t + 1; t2 < A.cols(); ++t2) mix(cell(s, t), cell(s, t2));
      }
      if (best.margin > kStabilityTolerance) out.push_back({best, grid_slack(g, i, j, resolution)});
    }
  return out;
}

}  // namespace matchgame
