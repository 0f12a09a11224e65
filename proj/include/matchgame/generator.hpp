#pragma once

#include "matchgame/core.hpp"

#include <cstdint>
#include <string>

namespace matchgame {

inline constexpr const char* kGeneratorVersion = "matchgen-1";

struct GeneratorConfig {
  GameClass kind = GameClass::ZeroSum;
  std::size_t men = 3;
  std::size_t women = 3;
  std::size_t actions = 2;  // most actions per agent; each agent draws 1..actions
  int entry_lo = -10;
  int entry_hi = 10;
  int irp_lo = -5;  // IRPs are integers in [irp_lo, 0]
  double epsilon = 1;
  std::uint64_t seed = 0;
};

// Random market with integer payoff entries.  Strictly competitive couples
// take B = -(lambda A + mu) with lambda in {1/2, 1, 2} and integer mu in
// [-5, 5].  The same seed and config always give the same market.
MatchingGame generate_market(const GeneratorConfig& config);

}  // namespace matchgame
