#pragma once

#include "matchgame/core.hpp"

#include <string>
#include <vector>

namespace matchgame {

// Three men, three women with linear transfers, zero IRPs and eps = 1.
MatchingGame appendix_market();

// Proposer queue (i1, i3, i2).
std::vector<std::size_t> appendix_order();

struct AppendixCheck {
  std::string name;
  double expected = 0;
  double actual = 0;
  bool ok() const { return expected == actual; }
};

// Runs both algorithms and deferred acceptance on the built-in market and
// compares every logged number against the stored reference run.  Exact
// comparison; agents are 1-based in the names.
std::vector<AppendixCheck> appendix_checks();

}  // namespace matchgame
