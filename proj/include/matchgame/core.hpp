#pragma once

#include "matchgame/errors.hpp"
#include "matchgame/matrix.hpp"
#include "matchgame/rational.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace matchgame {

enum class Side { Man, Woman };

struct AgentId {
  Side side = Side::Man;
  std::size_t index = 0;
  bool is_empty = false;

  static AgentId man(std::size_t i) { return {Side::Man, i, false}; }
  static AgentId woman(std::size_t j) { return {Side::Woman, j, false}; }
  static AgentId empty(Side side) { return {side, 0, true}; }
  bool operator==(const AgentId&) const = default;
};

// Point of the probability simplex over a finite pure-action set.
class MixedStrategy {
 public:
  MixedStrategy() = default;
  explicit MixedStrategy(std::vector<double> weights);

  static MixedStrategy pure(std::size_t size, std::size_t action);
  static MixedStrategy uniform(std::size_t size);
  // (1 - t) * a + t * b
  static MixedStrategy blend(const MixedStrategy& a, const MixedStrategy& b, double t);

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t k) const { return weights_[k]; }
  std::span<const double> weights() const { return weights_; }
  // index of the single action with weight 1, if the strategy is pure
  std::optional<std::size_t> pure_action() const;
  bool operator==(const MixedStrategy&) const = default;

 private:
  std::vector<double> weights_;
};

double bilinear(const RealMatrix& m, const MixedStrategy& x, const MixedStrategy& y);
// x^T m, one entry per column
std::vector<double> row_times(const MixedStrategy& x, const RealMatrix& m);
// m y, one entry per row
std::vector<double> times_column(const RealMatrix& m, const MixedStrategy& y);

struct ZeroSumGame {
  RealMatrix A;  // man's payoff; the woman receives -xAy
};

struct CompetitiveGame {
  RealMatrix A;  // man's payoff
  RealMatrix B;  // woman's payoff; -B must be a positive affine variant of A
};

struct RepeatedGame {
  RationalMatrix A;
  RationalMatrix B;
};

struct TransferGame {
  double a = 0;  // man's base utility
  double b = 0;  // woman's base utility
};

using CoupleGame = std::variant<ZeroSumGame, CompetitiveGame, RepeatedGame, TransferGame>;

enum class GameClass { ZeroSum, StrictlyCompetitive, Repeated, LinearTransfer };

GameClass class_of(const CoupleGame& game);
const char* class_name(GameClass kind);
std::optional<GameClass> parse_class_name(std::string_view name);

// One stretch of a cyclic schedule: (s, t) played `count` consecutive stages.
struct ScheduleRun {
  std::size_t s = 0;
  std::size_t t = 0;
  BigInt count = 1;
  bool operator==(const ScheduleRun&) const = default;
};

// Cyclic pure-action schedule plus trigger punishments.  A punishment holds
// the punisher's minmax strategy; an absent punishment means deviations of
// that agent are ignored.
struct RepeatedStrategy {
  std::vector<ScheduleRun> schedule;
  std::pair<Rational, Rational> limit_payoff;
  std::optional<std::vector<Rational>> punish_man;    // woman's column strategy
  std::optional<std::vector<Rational>> punish_woman;  // man's row strategy

  BigInt period() const;
  bool operator==(const RepeatedStrategy&) const = default;
};

struct MixedPlay {
  MixedStrategy x;
  MixedStrategy y;
  bool operator==(const MixedPlay&) const = default;
};

struct TransferPlay {
  double x = 0;  // paid by the man to the woman
  double y = 0;  // paid by the woman to the man
  bool operator==(const TransferPlay&) const = default;
};

using StrategyAssignment = std::variant<MixedPlay, TransferPlay, RepeatedStrategy>;

struct Payoffs {
  double u = 0;
  double v = 0;
};

Payoffs evaluate_payoffs(const CoupleGame& game, const StrategyAssignment& play);

struct MatchingGame {
  std::size_t men = 0;
  std::size_t women = 0;
  std::vector<CoupleGame> games;  // row-major over (man, woman)
  std::vector<double> irp_men;
  std::vector<double> irp_women;
  double epsilon = 1;

  const CoupleGame& game(std::size_t i, std::size_t j) const { return games[i * women + j]; }
  // class shared by all couples; ZeroSum for an empty market
  GameClass kind() const;
  // throws ContractViolation on any broken invariant
  void validate() const;
};

class MatchingProfile {
 public:
  MatchingProfile() = default;
  // everyone single, payoffs at the IRPs
  static MatchingProfile unmatched(const MatchingGame& g);

  std::size_t men() const { return wife_.size(); }
  std::size_t women() const { return husband_.size(); }

  std::optional<std::size_t> wife(std::size_t i) const { return wife_[i]; }
  std::optional<std::size_t> husband(std::size_t j) const { return husband_[j]; }
  const StrategyAssignment& play(std::size_t i) const;

  double u(std::size_t i) const { return u_[i]; }
  double v(std::size_t j) const { return v_[j]; }
  std::span<const double> man_payoffs() const { return u_; }
  std::span<const double> woman_payoffs() const { return v_; }

  // Pair i with j.  Previous partners of either become single at their IRP.
  void match(const MatchingGame& g, std::size_t i, std::size_t j, StrategyAssignment play, Payoffs pay);
  void make_single(const MatchingGame& g, std::size_t i);

  // couples (i, j) in ascending man order
  std::vector<std::pair<std::size_t, std::size_t>> couples() const;

  bool operator==(const MatchingProfile&) const = default;

 private:
  std::vector<std::optional<std::size_t>> wife_;
  std::vector<std::optional<std::size_t>> husband_;
  std::vector<std::optional<StrategyAssignment>> play_;
  std::vector<double> u_;
  std::vector<double> v_;
};

// Payoffs recomputed from the assignments; single agents get their IRP.
std::pair<std::vector<double>, std::vector<double>> profile_payoffs(const MatchingGame& g,
                                                                    const MatchingProfile& p);

// Checks structure and that cached payoffs match recomputation within 1e-9.
void check_profile(const MatchingGame& g, const MatchingProfile& p);

struct OutsideOptions {
  double u_eps = 0;
  double v_eps = 0;
};

}  // namespace matchgame
