#include "matchgame/repeated.hpp"

#include <algorithm>
#include <numeric>

namespace matchgame {

namespace {

void require_stage_game(const RationalMatrix& A, const RationalMatrix& B) {
  if (A.empty() || !same_shape(A, B)) throw ContractViolation("stage game needs non-empty matrices of equal shape");
}

// Columns: one weight per cell.  Rows of the returned program: the simplex
// equality only.
RationalProgram cell_program(const RationalMatrix& A, Sense sense, std::vector<Rational> objective) {
  const std::size_t n = A.rows() * A.cols();
  objective.resize(n);
  RationalProgram lp(sense, std::move(objective));
  lp.add(std::vector<Rational>(n, Rational(1)), Relation::Equal, Rational(1));
  return lp;
}

std::vector<Rational> cells(const RationalMatrix& m) { return {m.values().begin(), m.values().end()}; }

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational total = 0;
  for (std::size_t k = 0; k < a.size(); ++k) total += a[k] * b[k];
  return total;
}

BigInt lcm(const BigInt& a, const BigInt& b) { return a / boost::multiprecision::gcd(a, b) * b; }

}  // namespace

std::optional<HullPoint> hull_optimum(const RationalMatrix& A, const RationalMatrix& B, Priority priority,
                                      const std::optional<Rational>& floor_u, const std::optional<Rational>& floor_v) {
  require_stage_game(A, B);
  const auto a = cells(A), b = cells(B);
  const auto& first = priority == Priority::ManFirst ? a : b;
  const auto& second = priority == Priority::ManFirst ? b : a;

  auto base = [&](const std::vector<Rational>& objective) {
    RationalProgram lp = cell_program(A, Sense::Maximize, objective);
    if (floor_u) lp.add(a, Relation::GreaterEq, *floor_u);
    if (floor_v) lp.add(b, Relation::GreaterEq, *floor_v);
    return lp;
  };

  RationalProgram stage_one = base(first);
  auto top = solve(stage_one);
  if (!top.optimal()) return std::nullopt;
  RationalProgram stage_two = base(second);
  stage_two.add(first, Relation::GreaterEq, *top.exact_value);
  auto tie = solve(stage_two);
  if (!tie.optimal()) throw ContractViolation("lexicographic hull optimum lost feasibility");
  HullPoint out{dot(a, *tie.exact_point), dot(b, *tie.exact_point), *tie.exact_point};
  return out;
}

std::optional<HullPoint> best_in_hull(const RationalMatrix& A, const RationalMatrix& B, const Rational& floor_v) {
  return hull_optimum(A, B, Priority::ManFirst, std::nullopt, floor_v);
}

bool in_hull(const RationalMatrix& A, const RationalMatrix& B, const PayoffPair& point) {
  require_stage_game(A, B);
  RationalProgram lp = cell_program(A, Sense::Maximize, {});
  lp.add(cells(A), Relation::Equal, point.first);
  lp.add(cells(B), Relation::Equal, point.second);
  return solve(lp).optimal();
}

std::vector<ScheduleRun> schedule_from_weights(std::size_t cols, const std::vector<Rational>& weights) {
  if (cols == 0 || weights.empty() || weights.size() % cols != 0)
    throw ContractViolation("weights do not cover a stage game");
  Rational total = 0;
  BigInt period = 1;
  for (const auto& w : weights) {
    if (w < 0) throw ContractViolation("negative schedule weight");
    total += w;
    period = lcm(period, denominator(w));
  }
  if (total != 1) throw ContractViolation("schedule weights must sum to one");
  std::vector<ScheduleRun> out;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] == 0) continue;
    BigInt count = numerator(weights[k]) * (period / denominator(weights[k]));
    out.push_back({k / cols, k % cols, count});
  }
  return out;
}

RepeatedStrategy achieve_payoff(const RationalMatrix& A, const RationalMatrix& B, const PayoffPair& target) {
  require_stage_game(A, B);
  const std::size_t n = A.rows() * A.cols();
  // weights plus one bound z on all of them; minimize z
  std::vector<Rational> objective(n + 1, Rational(0));
  objective[n] = 1;
  RationalProgram lp(Sense::Minimize, objective);
  auto extend = [&](std::vector<Rational> row, Rational last) {
    row.push_back(last);
    return row;
  };
  lp.add(extend(std::vector<Rational>(n, Rational(1)), 0), Relation::Equal, Rational(1));
  lp.add(extend(cells(A), 0), Relation::Equal, target.first);
  lp.add(extend(cells(B), 0), Relation::Equal, target.second);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<Rational> row(n + 1, Rational(0));
    row[k] = 1;
    row[n] = -1;
    lp.add(std::move(row), Relation::LessEq, Rational(0));
  }
  auto sol = solve(lp);
  if (!sol.optimal())
    throw ContractViolation("payoff outside feasible set: (" + to_string(target.first) + ", " +
                            to_string(target.second) + ")");
  std::vector<Rational> weights(sol.exact_point->begin(), sol.exact_point->begin() + static_cast<std::ptrdiff_t>(n));
  RepeatedStrategy out;
  out.schedule = schedule_from_weights(A.cols(), weights);
  out.limit_payoff = target;
  return out;
}

ExactPunishmentLevels punishment_levels(const RationalMatrix& A, const RationalMatrix& B) {
  return minmax_levels(A, B);
}

RepeatedStrategy cne_repeated(const RationalMatrix& A, const RationalMatrix& B, const Rational& u, const Rational& v,
                              const Rational& eps) {
  require_stage_game(A, B);
  if (eps <= 0) throw ContractViolation("eps must be positive");
  const Rational u_floor = u - eps, v_floor = v - eps;
  if (!hull_optimum(A, B, Priority::ManFirst, u_floor, v_floor))
    throw NoFeasibleAgreement("no feasible payoff clears both outside options (" + to_string(u) + ", " +
                              to_string(v) + ")");
  const auto levels = punishment_levels(A, B);

  // uniform equilibrium payoffs the couple accepts
  if (auto both = hull_optimum(A, B, Priority::ManFirst, std::max(levels.alpha, u_floor),
                               std::max(levels.beta, v_floor))) {
    RepeatedStrategy out = achieve_payoff(A, B, {both->u, both->v});
    out.punish_man = levels.hold_man;
    out.punish_woman = levels.hold_woman;
    return out;
  }

  RepeatedStrategy out;
  if (u_floor >= levels.alpha) {
    // the woman cannot be held to her punishment level: push her as high as
    // the man's option allows and ignore her deviations
    auto top = *hull_optimum(A, B, Priority::WomanFirst, u_floor, v_floor);
    PayoffPair target{top.u, top.v};
    if (PayoffPair shifted{top.u, top.v + eps}; in_hull(A, B, shifted)) target = shifted;
    out = achieve_payoff(A, B, target);
    out.punish_man = levels.hold_man;
  } else {
    auto top = *hull_optimum(A, B, Priority::ManFirst, u_floor, v_floor);
    PayoffPair target{top.u, top.v};
    if (PayoffPair shifted{top.u + eps, top.v}; in_hull(A, B, shifted)) target = shifted;
    out = achieve_payoff(A, B, target);
    out.punish_woman = levels.hold_woman;
  }
  return out;
}

PayoffPair simulate(const RepeatedGame& game, const RepeatedStrategy& sigma, std::uint64_t K,
                    const std::optional<ScriptedDeviation>& deviation) {
  const auto& A = game.A;
  const auto& B = game.B;
  require_stage_game(A, B);
  if (K == 0) throw ContractViolation("simulation needs at least one stage");
  if (sigma.schedule.empty()) throw ContractViolation("empty repeated schedule");
  if (deviation && deviation->actions.empty()) throw ContractViolation("deviation script without actions");
  const std::size_t deviator_actions = deviation && deviation->deviator == Side::Woman ? A.cols() : A.rows();
  if (deviation)
    for (auto a : deviation->actions)
      if (a >= deviator_actions) throw ContractViolation("deviation action outside the stage game");

  // run lengths beyond K never matter
  std::vector<std::uint64_t> lengths;
  for (const auto& run : sigma.schedule) {
    if (run.s >= A.rows() || run.t >= A.cols() || run.count <= 0)
      throw ContractViolation("schedule run outside the stage game");
    lengths.push_back(run.count > BigInt(K) ? K : static_cast<std::uint64_t>(run.count));
  }

  std::vector<std::uint64_t> on_path(A.rows() * A.cols(), 0);
  std::vector<std::uint64_t> punished(deviator_actions, 0);
  bool punishing = false;
  std::size_t run = 0;
  std::uint64_t used = 0;
  for (std::uint64_t k = 0; k < K; ++k) {
    std::size_t s = sigma.schedule[run].s, t = sigma.schedule[run].t;
    if (++used == lengths[run]) {
      used = 0;
      run = (run + 1) % lengths.size();
    }
    if (!deviation || k < deviation->start) {
      ++on_path[s * A.cols() + t];
      continue;
    }
    std::size_t a = deviation->actions[(k - deviation->start) % deviation->actions.size()];
    if (punishing) {
      ++punished[a];
      continue;
    }
    bool man = deviation->deviator == Side::Man;
    bool departs = man ? a != s : a != t;
    if (man) s = a;
    else t = a;
    ++on_path[s * A.cols() + t];
    if (departs) punishing = man ? sigma.punish_man.has_value() : sigma.punish_woman.has_value();
  }

  Rational total_u = 0, total_v = 0;
  for (std::size_t c = 0; c < on_path.size(); ++c) {
    if (on_path[c] == 0) continue;
    total_u += A.values()[c] * on_path[c];
    total_v += B.values()[c] * on_path[c];
  }
  for (std::size_t a = 0; a < punished.size(); ++a) {
    if (punished[a] == 0) continue;
    Rational stage_u = 0, stage_v = 0;
    if (deviation->deviator == Side::Man) {
      const auto& hold = *sigma.punish_man;
      for (std::size_t t = 0; t < A.cols(); ++t) {
        stage_u += A(a, t) * hold[t];
        stage_v += B(a, t) * hold[t];
      }
    } else {
      const auto& hold = *sigma.punish_woman;
      for (std::size_t s = 0; s < A.rows(); ++s) {
        stage_u += A(s, a) * hold[s];
        stage_v += B(s, a) * hold[s];
      }
    }
    total_u += stage_u * punished[a];
    total_v += stage_v * punished[a];
  }
  return {total_u / K, total_v / K};
}

}  // namespace matchgame
