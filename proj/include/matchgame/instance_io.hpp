#pragma once

#include "matchgame/core.hpp"
#include "matchgame/engine.hpp"
#include "matchgame/verify.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace matchgame {

// Every document starts with {"format": "matchgame-<kind>", "version": 1}.
inline constexpr int kFileVersion = 1;

struct InstanceFile {
  MatchingGame game;
  std::optional<std::vector<std::size_t>> order;  // proposer queue
  std::optional<std::uint64_t> seed;
  std::optional<std::string> generator;  // version tag of the generator that wrote the file
};

// Parsers throw ParseError carrying the line and column of the offending
// value.  Well-formed documents that describe an invalid market or profile
// throw ContractViolation.
//
// Repeated-class entries are integers or [numerator, denominator] pairs
// (strings allowed for big integers); floats are rejected there.
InstanceFile parse_instance(std::string_view text);
std::string emit_instance(const InstanceFile& file);

MatchingProfile parse_profile(std::string_view text, const MatchingGame& g);
std::string emit_profile(const MatchingGame& g, const MatchingProfile& p);

EngineTrace parse_trace(std::string_view text);
std::string emit_trace(const EngineTrace& trace);

std::string emit_report(const StabilityReport& report);

// Whole file as text; std::runtime_error when it cannot be read.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace matchgame
