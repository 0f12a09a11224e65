#include "matchgame/core.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace matchgame {

namespace {

constexpr double kSimplexTolerance = 1e-12;
constexpr double kPayoffTolerance = 1e-9;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

std::pair<std::size_t, std::size_t> action_counts(const CoupleGame& game) {
  return std::visit(Overloaded{[](const ZeroSumGame& g) { return std::pair{g.A.rows(), g.A.cols()}; },
                               [](const CompetitiveGame& g) { return std::pair{g.A.rows(), g.A.cols()}; },
                               [](const RepeatedGame& g) { return std::pair{g.A.rows(), g.A.cols()}; },
                               [](const TransferGame&) { return std::pair<std::size_t, std::size_t>{1, 1}; }},
                    game);
}

}  // namespace

MixedStrategy::MixedStrategy(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw ContractViolation("mixed strategy over an empty action set");
  double total = 0;
  for (double w : weights_) {
    if (!(w >= 0)) throw ContractViolation("negative probability in mixed strategy");
    total += w;
  }
  if (std::fabs(total - 1) > kSimplexTolerance * static_cast<double>(weights_.size()))
    throw ContractViolation("mixed strategy weights sum to " + std::to_string(total));
}

MixedStrategy MixedStrategy::pure(std::size_t size, std::size_t action) {
  std::vector<double> w(size, 0.0);
  w.at(action) = 1.0;
  return MixedStrategy(std::move(w));
}

MixedStrategy MixedStrategy::uniform(std::size_t size) {
  return MixedStrategy(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

MixedStrategy MixedStrategy::blend(const MixedStrategy& a, const MixedStrategy& b, double t) {
  if (a.size() != b.size()) throw ContractViolation("blending strategies of different sizes");
  std::vector<double> w(a.size());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = (1 - t) * a[k] + t * b[k];
  double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  return MixedStrategy(std::move(w));
}

std::optional<std::size_t> MixedStrategy::pure_action() const {
  for (std::size_t k = 0; k < weights_.size(); ++k)
    if (weights_[k] == 1.0) return k;
  return std::nullopt;
}

double bilinear(const RealMatrix& m, const MixedStrategy& x, const MixedStrategy& y) {
  if (x.size() != m.rows() || y.size() != m.cols())
    throw ContractViolation("strategy sizes do not match the payoff matrix");
  double total = 0;
  for (std::size_t s = 0; s < m.rows(); ++s) {
    if (x[s] == 0) continue;
    double row = 0;
    for (std::size_t t = 0; t < m.cols(); ++t) row += m(s, t) * y[t];
    total += x[s] * row;
  }
  return total;
}

std::vector<double> row_times(const MixedStrategy& x, const RealMatrix& m) {
  std::vector<double> out(m.cols(), 0.0);
  for (std::size_t s = 0; s < m.rows(); ++s)
    for (std::size_t t = 0; t < m.cols(); ++t) out[t] += x[s] * m(s, t);
  return out;
}

std::vector<double> times_column(const RealMatrix& m, const MixedStrategy& y) {
  std::vector<double> out(m.rows(), 0.0);
  for (std::size_t s = 0; s < m.rows(); ++s)
    for (std::size_t t = 0; t < m.cols(); ++t) out[s] += m(s, t) * y[t];
  return out;
}

GameClass class_of(const CoupleGame& game) {
  return std::visit(Overloaded{[](const ZeroSumGame&) { return GameClass::ZeroSum; },
                               [](const CompetitiveGame&) { return GameClass::StrictlyCompetitive; },
                               [](const RepeatedGame&) { return GameClass::Repeated; },
                               [](const TransferGame&) { return GameClass::LinearTransfer; }},
                    game);
}

const char* class_name(GameClass kind) {
  switch (kind) {
    case GameClass::ZeroSum: return "zerosum";
    case GameClass::StrictlyCompetitive: return "competitive";
    case GameClass::Repeated: return "repeated";
    case GameClass::LinearTransfer: return "transfer";
  }
  return "unknown";
}

std::optional<GameClass> parse_class_name(std::string_view name) {
  for (auto kind : {GameClass::ZeroSum, GameClass::StrictlyCompetitive, GameClass::Repeated,
                    GameClass::LinearTransfer})
    if (name == class_name(kind)) return kind;
  return std::nullopt;
}

BigInt RepeatedStrategy::period() const {
  BigInt n = 0;
  for (const auto& run : schedule) n += run.count;
  return n;
}

Payoffs evaluate_payoffs(const CoupleGame& game, const StrategyAssignment& play) {
  auto mismatch = [] { return ContractViolation("strategy assignment does not fit the couple game"); };
  return std::visit(
      Overloaded{
          [&](const ZeroSumGame& g) -> Payoffs {
            const auto* p = std::get_if<MixedPlay>(&play);
            if (!p) throw mismatch();
            double u = bilinear(g.A, p->x, p->y);
            return {u, -u};
          },
          [&](const CompetitiveGame& g) -> Payoffs {
            const auto* p = std::get_if<MixedPlay>(&play);
            if (!p) throw mismatch();
            return {bilinear(g.A, p->x, p->y), bilinear(g.B, p->x, p->y)};
          },
          [&](const RepeatedGame& g) -> Payoffs {
            const auto* p = std::get_if<RepeatedStrategy>(&play);
            if (!p) throw mismatch();
            if (p->schedule.empty()) throw ContractViolation("empty repeated schedule");
            Rational su = 0, sv = 0;
            BigInt n = 0;
            for (const auto& run : p->schedule) {
              if (run.s >= g.A.rows() || run.t >= g.A.cols() || run.count <= 0)
                throw ContractViolation("schedule run outside the stage game");
              su += g.A(run.s, run.t) * Rational(run.count);
              sv += g.B(run.s, run.t) * Rational(run.count);
              n += run.count;
            }
            return {to_double(su / Rational(n)), to_double(sv / Rational(n))};
          },
          [&](const TransferGame& g) -> Payoffs {
            const auto* p = std::get_if<TransferPlay>(&play);
            if (!p) throw mismatch();
            if (p->x < 0 || p->y < 0) throw ContractViolation("negative transfer");
            return {g.a - p->x + p->y, g.b + p->x - p->y};
          }},
      game);
}

GameClass MatchingGame::kind() const {
  if (games.empty()) return GameClass::ZeroSum;
  return class_of(games.front());
}

void MatchingGame::validate() const {
  if (!(epsilon > 0) || !std::isfinite(epsilon)) throw ContractViolation("epsilon must be positive");
  if (games.size() != men * women) throw ContractViolation("games table must cover every couple");
  if (irp_men.size() != men || irp_women.size() != women)
    throw ContractViolation("one IRP per agent is required");
  for (double r : irp_men)
    if (!std::isfinite(r)) throw ContractViolation("non-finite IRP");
  for (double r : irp_women)
    if (!std::isfinite(r)) throw ContractViolation("non-finite IRP");
  if (games.empty()) return;
  GameClass k = kind();
  for (std::size_t i = 0; i < men; ++i) {
    for (std::size_t j = 0; j < women; ++j) {
      const CoupleGame& cg = game(i, j);
      if (class_of(cg) != k) throw ContractViolation("all couples must play the same game class");
      // man i has the same action set with every partner, likewise woman j
      auto check_shape = [&](std::size_t r, std::size_t c) {
        if (r == 0 || c == 0) throw ContractViolation("empty payoff matrix");
        if (r != action_counts(game(i, 0)).first || c != action_counts(game(0, j)).second)
          throw ContractViolation("couple (" + std::to_string(i) + "," + std::to_string(j) +
                                  ") has inconsistent action counts");
      };
      std::visit(Overloaded{[&](const ZeroSumGame& g) { check_shape(g.A.rows(), g.A.cols()); },
                            [&](const CompetitiveGame& g) {
                              check_shape(g.A.rows(), g.A.cols());
                              if (!same_shape(g.A, g.B)) throw ContractViolation("A and B shapes differ");
                            },
                            [&](const RepeatedGame& g) {
                              check_shape(g.A.rows(), g.A.cols());
                              if (!same_shape(g.A, g.B)) throw ContractViolation("A and B shapes differ");
                            },
                            [&](const TransferGame& g) {
                              if (!std::isfinite(g.a) || !std::isfinite(g.b))
                                throw ContractViolation("non-finite transfer base utility");
                            }},
                 cg);
    }
  }
}

MatchingProfile MatchingProfile::unmatched(const MatchingGame& g) {
  MatchingProfile p;
  p.wife_.assign(g.men, std::nullopt);
  p.husband_.assign(g.women, std::nullopt);
  p.play_.assign(g.men, std::nullopt);
  p.u_ = g.irp_men;
  p.v_ = g.irp_women;
  return p;
}

const StrategyAssignment& MatchingProfile::play(std::size_t i) const {
  if (!play_[i]) throw ContractViolation("man " + std::to_string(i) + " is single");
  return *play_[i];
}

void MatchingProfile::match(const MatchingGame& g, std::size_t i, std::size_t j, StrategyAssignment play,
                            Payoffs pay) {
  if (auto old = wife_[i]; old && *old != j) {
    husband_[*old] = std::nullopt;
    v_[*old] = g.irp_women[*old];
  }
  if (auto old = husband_[j]; old && *old != i) make_single(g, *old);
  wife_[i] = j;
  husband_[j] = i;
  play_[i] = std::move(play);
  u_[i] = pay.u;
  v_[j] = pay.v;
}

void MatchingProfile::make_single(const MatchingGame& g, std::size_t i) {
  if (auto j = wife_[i]) {
    husband_[*j] = std::nullopt;
    v_[*j] = g.irp_women[*j];
  }
  wife_[i] = std::nullopt;
  play_[i] = std::nullopt;
  u_[i] = g.irp_men[i];
}

std::vector<std::pair<std::size_t, std::size_t>> MatchingProfile::couples() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < wife_.size(); ++i)
    if (wife_[i]) out.emplace_back(i, *wife_[i]);
  return out;
}

std::pair<std::vector<double>, std::vector<double>> profile_payoffs(const MatchingGame& g,
                                                                    const MatchingProfile& p) {
  std::vector<double> u = g.irp_men;
  std::vector<double> v = g.irp_women;
  for (auto [i, j] : p.couples()) {
    Payoffs pay = evaluate_payoffs(g.game(i, j), p.play(i));
    u[i] = pay.u;
    v[j] = pay.v;
  }
  return {u, v};
}

void check_profile(const MatchingGame& g, const MatchingProfile& p) {
  if (p.men() != g.men || p.women() != g.women) throw ContractViolation("profile size does not match game");
  for (std::size_t i = 0; i < g.men; ++i) {
    if (auto j = p.wife(i)) {
      if (*j >= g.women || p.husband(*j) != i) throw ContractViolation("matching is not one-to-one");
    }
  }
  for (std::size_t j = 0; j < g.women; ++j) {
    if (auto i = p.husband(j)) {
      if (*i >= g.men || p.wife(*i) != j) throw ContractViolation("matching is not one-to-one");
    }
  }
  auto [u, v] = profile_payoffs(g, p);
  for (std::size_t i = 0; i < g.men; ++i)
    if (std::fabs(u[i] - p.u(i)) > kPayoffTolerance)
      throw ContractViolation("cached payoff of man " + std::to_string(i) + " drifted");
  for (std::size_t j = 0; j < g.women; ++j)
    if (std::fabs(v[j] - p.v(j)) > kPayoffTolerance)
      throw ContractViolation("cached payoff of woman " + std::to_string(j) + " drifted");
}

}  // namespace matchgame
