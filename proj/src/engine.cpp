#include "matchgame/engine.hpp"

#include "matchgame/competitive.hpp"
#include "matchgame/repeated.hpp"
#include "matchgame/transfers.hpp"
#include "matchgame/zerosum.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace matchgame {

namespace {

constexpr double kPayoffTolerance = 1e-9;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

class ZeroSumOracle final : public CoupleOracle {
 public:
  ZeroSumOracle(const MatchingGame& g, double eps) : g_(g), eps_(eps) {}

  std::optional<Offer> best_for_man(std::size_t i, std::size_t j, double woman_floor) const override {
    auto level = solve_level(matrix(i, j), -woman_floor);
    if (!level) return std::nullopt;
    return offer(level->x, level->y, level->achieved);
  }

  std::optional<Offer> best_for_woman(std::size_t i, std::size_t j, double man_floor) const override {
    const RealMatrix& A = matrix(i, j);
    if (man_floor > A.max() + kPayoffTolerance) return std::nullopt;
    auto level = solve_level(A, std::max(man_floor, A.min()));
    return offer(level->x, level->y, level->achieved);
  }

  Offer cne(std::size_t i, std::size_t j, const OutsideOptions& options, const StrategyAssignment&,
            const Payoffs&) const override {
    auto r = cne_with_margin(matrix(i, j), options.u_eps, -options.v_eps, eps_, eps_);
    return offer(r.x, r.y, r.value);
  }

  double payoff_span(std::size_t i, std::size_t j) const override {
    return matrix(i, j).max() - matrix(i, j).min();
  }

  double peak(std::size_t i, std::size_t j, Side side) const override {
    return side == Side::Man ? matrix(i, j).max() : -matrix(i, j).min();
  }

  double woman_best(std::size_t i, std::size_t j) const override { return -matrix(i, j).min(); }

 private:
  const RealMatrix& matrix(std::size_t i, std::size_t j) const { return std::get<ZeroSumGame>(g_.game(i, j)).A; }
  static Offer offer(const MixedStrategy& x, const MixedStrategy& y, double value) {
    return {MixedPlay{x, y}, {value, -value}};
  }

  const MatchingGame& g_;
  double eps_;
};

class CompetitiveOracle final : public CoupleOracle {
 public:
  CompetitiveOracle(const MatchingGame& g, double eps) : g_(g), eps_(eps) {
    losses_.reserve(g.games.size());
    for (const auto& cg : g.games) {
      const auto& game = std::get<CompetitiveGame>(cg);
      losses_.push_back(loss_matrix(game));
      if (!detect_affine(game.A, losses_.back()))
        throw ContractViolation("couple game is not strictly competitive");
    }
  }

  std::optional<Offer> best_for_man(std::size_t i, std::size_t j, double woman_floor) const override {
    // the man's payoff rises with the loss, so take the largest loss she accepts
    auto level = solve_level(loss(i, j), -woman_floor);
    if (!level) return std::nullopt;
    return offer(i, j, level->x, level->y);
  }

  std::optional<Offer> best_for_woman(std::size_t i, std::size_t j, double man_floor) const override {
    const RealMatrix& A = game(i, j).A;
    if (man_floor > A.max() + kPayoffTolerance) return std::nullopt;
    auto level = solve_level(A, std::max(man_floor, A.min()));
    return offer(i, j, level->x, level->y);
  }

  Offer cne(std::size_t i, std::size_t j, const OutsideOptions& options, const StrategyAssignment&,
            const Payoffs&) const override {
    auto r = cne_competitive_with_margin(game(i, j).A, loss(i, j), options.u_eps, options.v_eps, eps_, eps_);
    return offer(i, j, r.x, r.y);
  }

  double payoff_span(std::size_t i, std::size_t j) const override {
    const auto& cg = game(i, j);
    return std::max(cg.A.max() - cg.A.min(), cg.B.max() - cg.B.min());
  }

  double peak(std::size_t i, std::size_t j, Side side) const override {
    return side == Side::Man ? game(i, j).A.max() : game(i, j).B.max();
  }

  double woman_best(std::size_t i, std::size_t j) const override { return game(i, j).B.max(); }

 private:
  const CompetitiveGame& game(std::size_t i, std::size_t j) const { return std::get<CompetitiveGame>(g_.game(i, j)); }
  const RealMatrix& loss(std::size_t i, std::size_t j) const { return losses_[i * g_.women + j]; }
  Offer offer(std::size_t i, std::size_t j, const MixedStrategy& x, const MixedStrategy& y) const {
    return {MixedPlay{x, y}, {bilinear(game(i, j).A, x, y), bilinear(game(i, j).B, x, y)}};
  }

  const MatchingGame& g_;
  double eps_;
  std::vector<RealMatrix> losses_;
};

class RepeatedOracle final : public CoupleOracle {
 public:
  RepeatedOracle(const MatchingGame& g, double eps) : g_(g), eps_(snap_rational(eps)) {}

  std::optional<Offer> best_for_man(std::size_t i, std::size_t j, double woman_floor) const override {
    const auto& game = stage(i, j);
    auto top = best_in_hull(game.A, game.B, snap_rational(woman_floor));
    if (!top) return std::nullopt;
    return offer(achieve_payoff(game.A, game.B, {top->u, top->v}));
  }

  std::optional<Offer> best_for_woman(std::size_t i, std::size_t j, double man_floor) const override {
    const auto& game = stage(i, j);
    auto top = hull_optimum(game.A, game.B, Priority::WomanFirst, snap_rational(man_floor), std::nullopt);
    if (!top) return std::nullopt;
    return offer(achieve_payoff(game.A, game.B, {top->u, top->v}));
  }

  Offer cne(std::size_t i, std::size_t j, const OutsideOptions& options, const StrategyAssignment& current,
            const Payoffs&) const override {
    const auto& game = stage(i, j);
    const Rational u = snap_rational(options.u_eps), v = snap_rational(options.v_eps);
    // a current schedule the couple still accepts only needs its threats
    if (const auto* sigma = std::get_if<RepeatedStrategy>(&current)) {
      const auto levels = punishment_levels(game.A, game.B);
      const auto& [cu, cv] = sigma->limit_payoff;
      if (cu >= std::max<Rational>(levels.alpha, u - eps_) && cv >= std::max<Rational>(levels.beta, v - eps_)) {
        RepeatedStrategy kept = *sigma;
        kept.punish_man = levels.hold_man;
        kept.punish_woman = levels.hold_woman;
        return offer(std::move(kept));
      }
    }
    return offer(cne_repeated(game.A, game.B, u, v, eps_));
  }

  double payoff_span(std::size_t i, std::size_t j) const override {
    const auto& game = stage(i, j);
    return to_double(std::max(game.A.max() - game.A.min(), game.B.max() - game.B.min()));
  }

  double peak(std::size_t i, std::size_t j, Side side) const override {
    return to_double(side == Side::Man ? stage(i, j).A.max() : stage(i, j).B.max());
  }

  double woman_best(std::size_t i, std::size_t j) const override { return to_double(stage(i, j).B.max()); }

 private:
  const RepeatedGame& stage(std::size_t i, std::size_t j) const { return std::get<RepeatedGame>(g_.game(i, j)); }
  static Offer offer(RepeatedStrategy sigma) {
    Payoffs pay{to_double(sigma.limit_payoff.first), to_double(sigma.limit_payoff.second)};
    return {std::move(sigma), pay};
  }

  const MatchingGame& g_;
  Rational eps_;
};

class TransferOracle final : public CoupleOracle {
 public:
  explicit TransferOracle(const MatchingGame& g) : g_(g) {}

  std::optional<Offer> best_for_man(std::size_t i, std::size_t j, double woman_floor) const override {
    auto deal = deal_at_woman_level(game(i, j), woman_floor);
    return Offer{deal.play, deal.pay};
  }

  std::optional<Offer> best_for_woman(std::size_t i, std::size_t j, double man_floor) const override {
    const auto& tg = game(i, j);
    return Offer{transfer_for_man_payoff(tg, man_floor), {man_floor, transfer_bid(tg, man_floor)}};
  }

  Offer cne(std::size_t i, std::size_t j, const OutsideOptions& options, const StrategyAssignment& current,
            const Payoffs&) const override {
    const auto& tg = game(i, j);
    const auto* play = std::get_if<TransferPlay>(&current);
    TransferPlay out = cne_transfer(tg, options.u_eps, options.v_eps, play ? *play : TransferPlay{});
    return {out, evaluate_payoffs(tg, out)};
  }

  double payoff_span(std::size_t i, std::size_t j) const override {
    const auto& tg = game(i, j);
    return std::max(0.0, tg.a + tg.b - g_.irp_men[i] - g_.irp_women[j]);
  }

  double peak(std::size_t, std::size_t, Side) const override { return std::numeric_limits<double>::infinity(); }

  double woman_best(std::size_t i, std::size_t j) const override { return transfer_bid(game(i, j), g_.irp_men[i]); }

 private:
  const TransferGame& game(std::size_t i, std::size_t j) const { return std::get<TransferGame>(g_.game(i, j)); }

  const MatchingGame& g_;
};

// Man i's best value over the women other than `excluded`, at least his IRP.
double best_alternative(const MatchingGame& g, const CoupleOracle& oracle, const MatchingProfile& p, std::size_t i,
                        std::optional<std::size_t> excluded, double eps) {
  double best = g.irp_men[i];
  for (std::size_t j = 0; j < g.women; ++j) {
    if (excluded && *excluded == j) continue;
    if (auto o = oracle.best_for_man(i, j, p.v(j) + eps)) best = std::max(best, o->pay.u);
  }
  return best;
}

std::size_t turn_bound(const MatchingGame& g, const CoupleOracle& oracle, double eps) {
  std::size_t total = g.men;
  for (std::size_t j = 0; j < g.women; ++j) {
    double gain = 0;
    for (std::size_t i = 0; i < g.men; ++i) gain = std::max(gain, oracle.woman_best(i, j) - g.irp_women[j]);
    total += static_cast<std::size_t>(std::floor(gain / eps + 1e-9));
  }
  return total;
}

}  // namespace

std::unique_ptr<CoupleOracle> make_oracle(const MatchingGame& g, double eps) {
  g.validate();
  if (!(eps > 0) || !std::isfinite(eps)) throw ContractViolation("eps must be positive");
  switch (g.kind()) {
    case GameClass::ZeroSum:
      return std::make_unique<ZeroSumOracle>(g, eps);
    case GameClass::StrictlyCompetitive:
      return std::make_unique<CompetitiveOracle>(g, eps);
    case GameClass::Repeated:
      return std::make_unique<RepeatedOracle>(g, eps);
    case GameClass::LinearTransfer:
      return std::make_unique<TransferOracle>(g);
  }
  throw ContractViolation("unknown game class");
}

MatchingProfile replay(const MatchingGame& g, const EngineTrace& trace) {
  MatchingProfile p = MatchingProfile::unmatched(g);
  auto require = [&](std::size_t i, std::size_t j) {
    if (i >= g.men || j >= g.women) throw ContractViolation("trace names an agent outside the market");
  };
  for (const auto& event : trace.events) {
    std::visit(Overloaded{[&](const AcceptEvent& e) {
                            require(e.man, e.woman);
                            p.match(g, e.man, e.woman, e.play, e.pay);
                          },
                          [&](const SettleEvent& e) {
                            require(e.winner, e.woman);
                            p.match(g, e.winner, e.woman, e.play, e.pay);
                          },
                          [&](const GoSingleEvent& e) {
                            if (e.man >= g.men) throw ContractViolation("trace names an agent outside the market");
                            p.make_single(g, e.man);
                          },
                          [&](const CoupleUpdateEvent& e) {
                            require(e.man, e.woman);
                            p.match(g, e.man, e.woman, e.play, e.after);
                          },
                          [](const auto&) {}},
               event);
  }
  return p;
}

double max_woman_gain(const MatchingGame& g, const CoupleOracle& oracle) {
  // the empty man leaves every woman at her IRP, so the gain is never negative
  double worst = 0;
  for (std::size_t j = 0; j < g.women; ++j)
    for (std::size_t i = 0; i < g.men; ++i) worst = std::max(worst, oracle.woman_best(i, j) - g.irp_women[j]);
  return worst;
}

std::size_t proposal_cap(const MatchingGame& g, double eps) {
  auto oracle = make_oracle(g, eps);
  return static_cast<std::size_t>(std::ceil(max_woman_gain(g, *oracle) / eps - 1e-9));
}

std::size_t proposal_turn_bound(const MatchingGame& g, double eps) {
  auto oracle = make_oracle(g, eps);
  return turn_bound(g, *oracle, eps);
}

std::size_t sweep_cap(const MatchingGame& g, const MatchingProfile& p, double eps) {
  auto oracle = make_oracle(g, eps);
  double span = 0;
  for (auto [i, j] : p.couples()) span = std::max(span, oracle->payoff_span(i, j));
  return static_cast<std::size_t>(std::ceil(span / eps - 1e-9)) + 2;
}

ProposalRun propose_dispose(const MatchingGame& g, std::span<const std::size_t> order, double eps) {
  auto oracle = make_oracle(g, eps);
  if (order.size() != g.men) throw ContractViolation("proposal order must list every man once");
  std::vector<bool> seen(g.men, false);
  for (auto i : order) {
    if (i >= g.men || seen[i]) throw ContractViolation("proposal order must list every man once");
    seen[i] = true;
  }

  ProposalRun run{MatchingProfile::unmatched(g), {}};
  auto& p = run.profile;
  auto& trace = run.trace;
  const std::size_t limit = turn_bound(g, *oracle, eps);
  std::deque<std::size_t> queue(order.begin(), order.end());

  while (!queue.empty()) {
    if (++trace.iterations > limit)
      throw ConvergenceError("propose-dispose exceeded " + std::to_string(limit) + " turns", trace);
    const std::size_t i = queue.front();
    queue.pop_front();

    std::optional<std::size_t> target;
    std::optional<Offer> proposal;
    for (std::size_t j = 0; j < g.women; ++j) {
      auto o = oracle->best_for_man(i, j, p.v(j) + eps);
      if (o && (!proposal || o->pay.u > proposal->pay.u)) {
        target = j;
        proposal = std::move(o);
      }
    }
    if (!proposal || proposal->pay.u < g.irp_men[i]) {
      trace.events.push_back(ProposeEvent{i, std::nullopt, g.irp_men[i]});
      trace.events.push_back(GoSingleEvent{i});
      p.make_single(g, i);
      continue;
    }
    const std::size_t j = *target;
    trace.events.push_back(ProposeEvent{i, j, proposal->pay.u});

    auto incumbent = p.husband(j);
    if (!incumbent) {
      p.match(g, i, j, proposal->play, proposal->pay);
      trace.events.push_back(AcceptEvent{i, j, proposal->play, proposal->pay});
      continue;
    }

    const std::size_t rival = *incumbent;
    CompeteEvent compete{i, rival, j, best_alternative(g, *oracle, p, i, j, eps),
                         best_alternative(g, *oracle, p, rival, j, eps), std::nullopt, std::nullopt};
    if (auto b = oracle->best_for_woman(i, j, compete.proposer_reservation)) compete.proposer_bid = b->pay.v;
    if (auto b = oracle->best_for_woman(rival, j, compete.incumbent_reservation)) compete.incumbent_bid = b->pay.v;
    trace.events.push_back(compete);

    const bool proposer_wins =
        compete.proposer_bid && (!compete.incumbent_bid || *compete.proposer_bid > *compete.incumbent_bid);
    const std::size_t winner = proposer_wins ? i : rival;
    const std::size_t loser = proposer_wins ? rival : i;
    const auto& losing_bid = proposer_wins ? compete.incumbent_bid : compete.proposer_bid;
    const double level = std::max(losing_bid.value_or(-std::numeric_limits<double>::infinity()), p.v(j) + eps);
    auto settled = oracle->best_for_man(winner, j, level);
    if (!settled) throw ContractViolation("winning bid cannot be settled");
    p.match(g, winner, j, settled->play, settled->pay);
    trace.events.push_back(SettleEvent{winner, loser, j, level, settled->play, settled->pay});
    queue.push_back(loser);
  }
  return run;
}

OutsideOptions outside_options(const MatchingGame& g, const CoupleOracle& oracle, const MatchingProfile& p,
                               std::size_t i, std::size_t j, double eps) {
  OutsideOptions out{g.irp_men[i], g.irp_women[j]};
  for (std::size_t k = 0; k < g.women; ++k) {
    const double floor = p.v(k) + eps;
    if (k == j || !(oracle.peak(i, k, Side::Woman) > floor + kPayoffTolerance)) continue;
    if (auto o = oracle.best_for_man(i, k, floor)) out.u_eps = std::max(out.u_eps, o->pay.u);
  }
  for (std::size_t k = 0; k < g.men; ++k) {
    const double floor = p.u(k) + eps;
    if (k == i || !(oracle.peak(k, j, Side::Man) > floor + kPayoffTolerance)) continue;
    if (auto o = oracle.best_for_woman(k, j, floor)) out.v_eps = std::max(out.v_eps, o->pay.v);
  }
  return out;
}

OutsideOptions outside_options(const MatchingGame& g, const MatchingProfile& p, std::size_t i, std::size_t j,
                               double eps) {
  auto oracle = make_oracle(g, eps);
  return outside_options(g, *oracle, p, i, j, eps);
}

ProposalRun stabilize(const MatchingGame& g, MatchingProfile p, double eps, StabilizeOptions options,
                      EngineTrace trace) {
  auto oracle = make_oracle(g, eps);
  check_profile(g, p);
  const std::size_t cap = options.max_sweeps.value_or(sweep_cap(g, p, eps));
  const std::size_t first_sweep = trace.sweeps;
  for (;;) {
    if (trace.sweeps - first_sweep >= cap)
      throw ConvergenceError("profile modification did not settle within " + std::to_string(cap) + " sweeps", trace);
    const std::size_t sweep = ++trace.sweeps;
    bool changed = false;
    for (auto [i, j] : p.couples()) {
      const OutsideOptions opts = outside_options(g, *oracle, p, i, j, eps);
      const Payoffs before{p.u(i), p.v(j)};
      Offer next = oracle->cne(i, j, opts, p.play(i), before);
      if (std::fabs(next.pay.u - before.u) > kPayoffTolerance || std::fabs(next.pay.v - before.v) > kPayoffTolerance)
        changed = true;
      trace.events.push_back(CoupleUpdateEvent{i, j, sweep, opts, before, next.pay, next.play});
      p.match(g, i, j, std::move(next.play), next.pay);
    }
    if (!changed) break;
  }
  return {std::move(p), std::move(trace)};
}

ProposalRun solve(const MatchingGame& g, std::span<const std::size_t> order, double eps) {
  auto first = propose_dispose(g, order, eps);
  return stabilize(g, std::move(first.profile), eps, {}, std::move(first.trace));
}

}  // namespace matchgame
