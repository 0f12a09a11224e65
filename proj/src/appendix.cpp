#include "matchgame/appendix.hpp"

#include "matchgame/engine.hpp"
#include "matchgame/transfers.hpp"
#include "matchgame/verify.hpp"

#include <limits>

namespace matchgame {

MatchingGame appendix_market() {
  constexpr double a[3][3] = {{83, 85, 99}, {74, 13, 15}, {58, 49, 54}};
  constexpr double b[3][3] = {{69, 6, 28}, {88, 2, 70}, {72, 18, 9}};
  MatchingGame g;
  g.men = g.women = 3;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) g.games.emplace_back(TransferGame{a[i][j], b[i][j]});
  g.irp_men.assign(3, 0.0);
  g.irp_women.assign(3, 0.0);
  g.epsilon = 1;
  return g;
}

std::vector<std::size_t> appendix_order() { return {0, 2, 1}; }

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::string agent(const char* side, std::size_t k) { return side + std::to_string(k + 1); }

// (man, woman, value) per proposal, then the two competitions
struct Proposal {
  std::size_t man, woman;
  double value;
};
constexpr Proposal kProposals[] = {{0, 0, 151}, {2, 0, 128}, {1, 0, 135}, {0, 2, 126}, {2, 1, 66}};

struct Competition {
  std::size_t proposer, incumbent;
  double proposer_reservation, incumbent_reservation, proposer_bid, incumbent_bid, level;
};
constexpr Competition kCompetitions[] = {{2, 0, 66, 126, 64, 26, 26}, {1, 2, 84, 66, 78, 64, 64}};

// wife of each man, the woman's transfer to her husband, final payoffs
constexpr std::size_t kWives[] = {2, 0, 1};
constexpr double kTransfers[] = {24, 17, 27};  // by woman
constexpr double kMen[] = {126, 98, 66};
constexpr double kWomen[] = {64, 1, 1};
constexpr double kOptions[] = {89, 83, 65};  // by man
constexpr double kStableMen[] = {99, 74, 49};
constexpr double kStableWomen[] = {88, 18, 28};

void add_matching(std::vector<AppendixCheck>& out, const std::string& stage, const MatchingProfile& p) {
  for (std::size_t i = 0; i < 3; ++i) {
    const auto wife = p.wife(i);
    out.push_back({stage + ".wife_of_" + agent("i", i), double(kWives[i] + 1), wife ? double(*wife + 1) : kMissing});
  }
}

// transfer paid by woman j to her husband, and the man's payment to her
void add_transfers(std::vector<AppendixCheck>& out, const std::string& stage, const MatchingProfile& p,
                   const double* expected_from_women) {
  for (std::size_t j = 0; j < 3; ++j) {
    const auto husband = p.husband(j);
    const TransferPlay play = husband ? std::get<TransferPlay>(p.play(*husband)) : TransferPlay{kMissing, kMissing};
    out.push_back({stage + ".transfer_from_" + agent("j", j), expected_from_women ? expected_from_women[j] : 0, play.y});
    out.push_back({stage + ".transfer_to_" + agent("j", j), 0, play.x});
  }
}

void add_payoffs(std::vector<AppendixCheck>& out, const std::string& stage, const MatchingProfile& p,
                 const double* men, const double* women) {
  for (std::size_t i = 0; i < 3; ++i) out.push_back({stage + ".u_" + agent("i", i), men[i], p.u(i)});
  for (std::size_t j = 0; j < 3; ++j) out.push_back({stage + ".v_" + agent("j", j), women[j], p.v(j)});
}

}  // namespace

std::vector<AppendixCheck> appendix_checks() {
  const MatchingGame g = appendix_market();
  const auto order = appendix_order();
  std::vector<AppendixCheck> out;

  auto first = propose_dispose(g, order, 1);
  out.push_back({"propose.iterations", 5, double(first.trace.iterations)});
  std::size_t proposal = 0, competition = 0;
  for (const auto& event : first.trace.events) {
    if (const auto* e = std::get_if<ProposeEvent>(&event)) {
      if (proposal >= std::size(kProposals)) {
        out.push_back({"propose.extra_turn", 0, 1});
        continue;
      }
      const auto& want = kProposals[proposal];
      const std::string name = "propose.turn" + std::to_string(++proposal);
      out.push_back({name + ".man", double(want.man + 1), double(e->man + 1)});
      out.push_back({name + ".woman", double(want.woman + 1), e->woman ? double(*e->woman + 1) : 0});
      out.push_back({name + ".value", want.value, e->value});
    } else if (const auto* c = std::get_if<CompeteEvent>(&event)) {
      if (competition >= std::size(kCompetitions)) {
        out.push_back({"compete.extra", 0, 1});
        continue;
      }
      const auto& want = kCompetitions[competition];
      const std::string name = "compete" + std::to_string(++competition);
      out.push_back({name + ".proposer", double(want.proposer + 1), double(c->proposer + 1)});
      out.push_back({name + ".incumbent", double(want.incumbent + 1), double(c->incumbent + 1)});
      out.push_back({name + ".proposer_reservation", want.proposer_reservation, c->proposer_reservation});
      out.push_back({name + ".incumbent_reservation", want.incumbent_reservation, c->incumbent_reservation});
      out.push_back({name + ".proposer_bid", want.proposer_bid, c->proposer_bid.value_or(kMissing)});
      out.push_back({name + ".incumbent_bid", want.incumbent_bid, c->incumbent_bid.value_or(kMissing)});
    } else if (const auto* s = std::get_if<SettleEvent>(&event)) {
      if (competition == 0 || competition > std::size(kCompetitions)) continue;
      out.push_back({"compete" + std::to_string(competition) + ".level", kCompetitions[competition - 1].level,
                     s->level});
    }
  }
  out.push_back({"propose.turns", double(std::size(kProposals)), double(proposal)});

  const MatchingProfile& p = first.profile;
  add_matching(out, "propose", p);
  add_transfers(out, "propose", p, kTransfers);
  add_payoffs(out, "propose", p, kMen, kWomen);
  out.push_back({"propose.externally_stable", 1, external_stability(g, p, 1).externally_stable ? 1.0 : 0.0});
  for (auto [i, j] : p.couples())
    out.push_back({"options.u_" + agent("i", i), kOptions[i], outside_options(g, p, i, j, 1).u_eps});

  auto second = stabilize(g, p, 1);
  add_matching(out, "stabilize", second.profile);
  add_transfers(out, "stabilize", second.profile, nullptr);
  add_payoffs(out, "stabilize", second.profile, kStableMen, kStableWomen);
  out.push_back({"stabilize.green", 1, verify_profile(g, second.profile, 1).green() ? 1.0 : 0.0});

  const MatchingProfile da = nash_stable_matching(g, order);
  add_matching(out, "deferred", da);
  add_transfers(out, "deferred", da, nullptr);
  return out;
}

}  // namespace matchgame
