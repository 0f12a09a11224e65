#include "matchgame/generator.hpp"

#include <limits>
#include <random>

namespace matchgame {

namespace {

// Uniform integer by rejection, so draws do not depend on the standard
// library's distribution code.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : engine_(seed) {}
  long integer(long lo, long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t top = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = top - top % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + static_cast<long>(x % span);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

MatchingGame generate_market(const GeneratorConfig& config) {
  if (config.actions == 0) throw ContractViolation("agents need at least one action");
  if (config.entry_lo > config.entry_hi) throw ContractViolation("empty entry range");
  if (config.irp_lo > 0) throw ContractViolation("IRP lower bound must not exceed 0");
  Draw draw(config.seed);
  MatchingGame g;
  g.men = config.men;
  g.women = config.women;
  g.epsilon = config.epsilon;
  const auto max_actions = static_cast<long>(config.actions);
  std::vector<std::size_t> rows(g.men), cols(g.women);
  for (auto& r : rows) r = static_cast<std::size_t>(draw.integer(1, max_actions));
  for (auto& c : cols) c = static_cast<std::size_t>(draw.integer(1, max_actions));
  for (std::size_t i = 0; i < g.men; ++i) g.irp_men.push_back(static_cast<double>(draw.integer(config.irp_lo, 0)));
  for (std::size_t j = 0; j < g.women; ++j)
    g.irp_women.push_back(static_cast<double>(draw.integer(config.irp_lo, 0)));

  auto entries = [&](std::size_t r, std::size_t c) {
    RealMatrix m(r, c);
    for (std::size_t s = 0; s < r; ++s)
      for (std::size_t t = 0; t < c; ++t) m(s, t) = static_cast<double>(draw.integer(config.entry_lo, config.entry_hi));
    return m;
  };
  for (std::size_t i = 0; i < g.men; ++i)
    for (std::size_t j = 0; j < g.women; ++j) {
      switch (config.kind) {
        case GameClass::ZeroSum:
          g.games.emplace_back(ZeroSumGame{entries(rows[i], cols[j])});
          break;
        case GameClass::StrictlyCompetitive: {
          RealMatrix A = entries(rows[i], cols[j]);
          static constexpr double kScales[] = {0.5, 1.0, 2.0};
          const double scale = kScales[draw.integer(0, 2)];
          const double shift = static_cast<double>(draw.integer(-5, 5));
          RealMatrix B = A.map([&](double a) { return -(scale * a + shift); });
          g.games.emplace_back(CompetitiveGame{std::move(A), std::move(B)});
          break;
        }
        case GameClass::Repeated: {
          auto to_rational = [](double x) { return Rational(static_cast<long>(x)); };
          RealMatrix A = entries(rows[i], cols[j]);
          RealMatrix B = entries(rows[i], cols[j]);
          g.games.emplace_back(RepeatedGame{A.map(to_rational), B.map(to_rational)});
          break;
        }
        case GameClass::LinearTransfer: {
          const auto a = static_cast<double>(draw.integer(config.entry_lo, config.entry_hi));
          const auto b = static_cast<double>(draw.integer(config.entry_lo, config.entry_hi));
          g.games.emplace_back(TransferGame{a, b});
          break;
        }
      }
    }
  g.validate();
  return g;
}

}  // namespace matchgame
