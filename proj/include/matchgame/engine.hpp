#pragma once

#include "matchgame/core.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

namespace matchgame {

struct Offer {
  StrategyAssignment play;
  Payoffs pay;
};

// Per-couple subproblems of both algorithms for one game class.
class CoupleOracle {
 public:
  virtual ~CoupleOracle() = default;
  // max U subject to V >= woman_floor; nullopt when no profile reaches the floor
  virtual std::optional<Offer> best_for_man(std::size_t i, std::size_t j, double woman_floor) const = 0;
  // max V subject to U >= man_floor
  virtual std::optional<Offer> best_for_woman(std::size_t i, std::size_t j, double man_floor) const = 0;
  // constrained equilibrium for the given outside options
  virtual Offer cne(std::size_t i, std::size_t j, const OutsideOptions& options, const StrategyAssignment& current,
                    const Payoffs& current_pay) const = 0;
  // largest payoff difference either partner can see in the couple's game
  virtual double payoff_span(std::size_t i, std::size_t j) const = 0;
  // largest payoff `side` can get in the couple's game (infinite with
  // transfers)
  virtual double peak(std::size_t i, std::size_t j, Side side) const = 0;
  // woman's largest payoff in the couple; with transfers, while the man
  // keeps his IRP
  virtual double woman_best(std::size_t i, std::size_t j) const = 0;
};

// Validates the market (strict competitiveness included) and builds the
// oracle of its class.  The game must outlive the oracle.
std::unique_ptr<CoupleOracle> make_oracle(const MatchingGame& g, double eps);

struct ProposeEvent {
  std::size_t man = 0;
  std::optional<std::size_t> woman;  // nullopt: the empty player
  double value = 0;
};
struct AcceptEvent {
  std::size_t man = 0;
  std::size_t woman = 0;
  StrategyAssignment play;
  Payoffs pay;
};
struct CompeteEvent {
  std::size_t proposer = 0;
  std::size_t incumbent = 0;
  std::size_t woman = 0;
  double proposer_reservation = 0;
  double incumbent_reservation = 0;
  std::optional<double> proposer_bid;  // nullopt: cannot bid
  std::optional<double> incumbent_bid;
};
struct SettleEvent {
  std::size_t winner = 0;
  std::size_t loser = 0;
  std::size_t woman = 0;
  double level = 0;
  StrategyAssignment play;
  Payoffs pay;
};
struct GoSingleEvent {
  std::size_t man = 0;
};
struct CoupleUpdateEvent {
  std::size_t man = 0;
  std::size_t woman = 0;
  std::size_t sweep = 0;
  OutsideOptions options;
  Payoffs before;
  Payoffs after;
  StrategyAssignment play;
};

using TraceEvent = std::variant<ProposeEvent, AcceptEvent, CompeteEvent, SettleEvent, GoSingleEvent, CoupleUpdateEvent>;

struct EngineTrace {
  std::vector<TraceEvent> events;
  std::size_t iterations = 0;  // proposer turns of propose-dispose
  std::size_t sweeps = 0;      // full passes of the profile modification
};

// Rebuilds the profile recorded by a trace, starting from everyone single.
MatchingProfile replay(const MatchingGame& g, const EngineTrace& trace);

// Largest gap between a woman's best payoff and her IRP.
double max_woman_gain(const MatchingGame& g, const CoupleOracle& oracle);
// ceil(max_woman_gain / eps)
std::size_t proposal_cap(const MatchingGame& g, double eps);
// Turns propose-dispose can take: every turn lifts one woman by at least
// eps or sends one man to the empty player for good, so the sum over women
// of floor(gain_j / eps) plus the number of men.
std::size_t proposal_turn_bound(const MatchingGame& g, double eps);
// ceil(largest couple span / eps) + 2 over the couples of p
std::size_t sweep_cap(const MatchingGame& g, const MatchingProfile& p, double eps);

struct ProposalRun {
  MatchingProfile profile;
  EngineTrace trace;
};

// Propose-dispose with a FIFO queue of men seeded by `order` (a permutation).
ProposalRun propose_dispose(const MatchingGame& g, std::span<const std::size_t> order, double eps);

// An alternative partner counts only when some profile lifts him or her
// strictly above the current payoff plus eps (by more than 1e-9); the value
// is then the best payoff over the closed constraint set.
OutsideOptions outside_options(const MatchingGame& g, const CoupleOracle& oracle, const MatchingProfile& p,
                               std::size_t i, std::size_t j, double eps);
OutsideOptions outside_options(const MatchingGame& g, const MatchingProfile& p, std::size_t i, std::size_t j,
                               double eps);

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, EngineTrace trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const EngineTrace& trace() const { return trace_; }

 private:
  EngineTrace trace_;
};

struct StabilizeOptions {
  // default: sweep_cap of the input profile
  std::optional<std::size_t> max_sweeps;
};

// Sweeps the couples in ascending man order, replacing each play by the
// oracle's constrained equilibrium, until a sweep moves no payoff by more
// than 1e-9.  Appends to `trace` when given.
ProposalRun stabilize(const MatchingGame& g, MatchingProfile p, double eps, StabilizeOptions options = {},
                      EngineTrace trace = {});

// propose_dispose followed by stabilize, one trace for both.
ProposalRun solve(const MatchingGame& g, std::span<const std::size_t> order, double eps);

}  // namespace matchgame
