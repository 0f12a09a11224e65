// matchgame: solve, verify, generate and benchmark matching-game instances.
//
// Exit codes: 0 success (green report, matching replay, appendix match),
// 1 completed but not green / mismatch / runtime failure, 2 malformed input
// file or usage error, 3 contract violation.

#include "matchgame/appendix.hpp"
#include "matchgame/engine.hpp"
#include "matchgame/generator.hpp"
#include "matchgame/instance_io.hpp"
#include "matchgame/verify.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <iostream>
#include <numeric>

using namespace matchgame;

namespace {

enum Exit { kGreen = 0, kNotGreen = 1, kMalformed = 2, kContract = 3 };

std::vector<std::size_t> default_order(const InstanceFile& file, const std::vector<std::size_t>& flag) {
  if (!flag.empty()) return flag;
  if (file.order) return *file.order;
  std::vector<std::size_t> order(file.game.men);
  std::iota(order.begin(), order.end(), 0);
  return order;
}

InstanceFile load_instance(const std::string& path) {
  try {
    return parse_instance(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " + e.what(),
                     e.line(), e.column());
  }
}

template <class F>
auto with_path(const std::string& path, F parse) {
  try {
    return parse(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " + e.what(),
                     e.line(), e.column());
  }
}

// shortest text that reads back as the same double
std::string number(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

void print_profile(const MatchingProfile& p) {
  std::cout << "side\tagent\tpartner\tpayoff\n";
  for (std::size_t i = 0; i < p.men(); ++i) {
    const auto wife = p.wife(i);
    std::cout << "man\t" << i << '\t' << (wife ? std::to_string(*wife) : "-") << '\t' << number(p.u(i)) << '\n';
  }
  for (std::size_t j = 0; j < p.women(); ++j) {
    const auto husband = p.husband(j);
    std::cout << "woman\t" << j << '\t' << (husband ? std::to_string(*husband) : "-") << '\t' << number(p.v(j))
              << '\n';
  }
}

std::string agent(const AgentId& a) { return a.is_empty ? "-" : std::to_string(a.index); }

void print_report(const StabilityReport& r) {
  std::cout << "check\tman\twoman\tvalue\n";
  for (const auto& b : r.blocking_pairs)
    std::cout << "blocking\t" << agent(b.man) << '\t' << agent(b.woman) << '\t' << number(b.margin) << '\n';
  for (const auto& c : r.cne_residuals) {
    std::cout << "man_gain\t" << c.man << '\t' << c.woman << '\t' << number(c.man_gain) << '\n';
    std::cout << "woman_gain\t" << c.man << '\t' << c.woman << '\t' << number(c.woman_gain) << '\n';
  }
  std::cout << "externally_stable\t-\t-\t" << r.externally_stable << '\n';
  std::cout << "internally_stable\t-\t-\t" << r.internally_stable << '\n';
}

struct SolveArgs {
  std::string instance;
  std::optional<double> eps;
  std::vector<std::size_t> order;
  std::string out, report, trace;
};

int cmd_solve(const SolveArgs& a) {
  const InstanceFile file = load_instance(a.instance);
  const double eps = a.eps.value_or(file.game.epsilon);
  const auto order = default_order(file, a.order);
  auto run = solve(file.game, order, eps);
  const StabilityReport report = verify_profile(file.game, run.profile, eps);
  if (!a.out.empty()) write_text_file(a.out, emit_profile(file.game, run.profile));
  if (!a.report.empty()) write_text_file(a.report, emit_report(report));
  if (!a.trace.empty()) write_text_file(a.trace, emit_trace(run.trace));
  print_profile(run.profile);
  return report.green() ? kGreen : kNotGreen;
}

struct VerifyArgs {
  std::string instance, profile;
  std::optional<double> eps;
  std::string report;
};

int cmd_verify(const VerifyArgs& a) {
  const InstanceFile file = load_instance(a.instance);
  const MatchingProfile p =
      with_path(a.profile, [&](const std::string& text) { return parse_profile(text, file.game); });
  const StabilityReport report = verify_profile(file.game, p, a.eps.value_or(file.game.epsilon));
  if (!a.report.empty()) write_text_file(a.report, emit_report(report));
  print_report(report);
  return report.green() ? kGreen : kNotGreen;
}

struct GenArgs {
  std::string kind = "zerosum";
  GeneratorConfig config;
  std::vector<int> entry_range{-10, 10};
  bool with_order = false;
  std::string out;
};

int cmd_gen(GenArgs a) {
  const auto kind = parse_class_name(a.kind);
  if (!kind) throw ContractViolation("unknown class '" + a.kind + "'");
  if (a.entry_range.size() != 2) throw ContractViolation("--entry-range takes lo,hi");
  a.config.kind = *kind;
  a.config.entry_lo = a.entry_range[0];
  a.config.entry_hi = a.entry_range[1];
  InstanceFile file;
  file.game = generate_market(a.config);
  file.seed = a.config.seed;
  file.generator = kGeneratorVersion;
  if (a.with_order) {
    std::vector<std::size_t> order(file.game.men);
    std::iota(order.begin(), order.end(), 0);
    file.order = order;
  }
  const std::string text = emit_instance(file);
  if (a.out.empty()) std::cout << text;
  else write_text_file(a.out, text);
  return kGreen;
}

struct BenchArgs {
  std::vector<std::string> kinds{"zerosum"};
  std::vector<double> eps_list{1.0, 0.25};
  std::uint64_t seeds = 50;
  std::uint64_t first_seed = 0;
  std::size_t men = 4, women = 4, actions = 3;
};

int cmd_bench(const BenchArgs& a) {
  std::cout << "class\teps\tseeds\titer_mean\titer_max\tvmax_cap_max\tover_vmax_cap\tturn_bound_max\tover_turn_bound"
               "\tsweeps_mean\tsweeps_max\tsweep_cap_max\tover_sweep_cap\tgreen\n";
  bool all_green = true;
  for (const auto& name : a.kinds) {
    const auto kind = parse_class_name(name);
    if (!kind) throw ContractViolation("unknown class '" + name + "'");
    for (double eps : a.eps_list) {
      std::size_t iter_sum = 0, iter_max = 0, cap_max = 0, over_cap = 0, bound_max = 0, over_bound = 0;
      std::size_t sweep_sum = 0, sweep_max = 0, scap_max = 0, over_scap = 0, green = 0;
      for (std::uint64_t s = 0; s < a.seeds; ++s) {
        GeneratorConfig cfg;
        cfg.kind = *kind;
        cfg.men = a.men;
        cfg.women = a.women;
        cfg.actions = a.actions;
        cfg.epsilon = eps;
        cfg.seed = a.first_seed + s;
        const MatchingGame g = generate_market(cfg);
        std::vector<std::size_t> order(g.men);
        std::iota(order.begin(), order.end(), 0);
        auto first = propose_dispose(g, order, eps);
        const std::size_t cap = proposal_cap(g, eps), bound = proposal_turn_bound(g, eps);
        const std::size_t scap = sweep_cap(g, first.profile, eps);
        auto second = stabilize(g, first.profile, eps);
        const std::size_t it = first.trace.iterations, sw = second.trace.sweeps;
        iter_sum += it;
        iter_max = std::max(iter_max, it);
        cap_max = std::max(cap_max, cap);
        bound_max = std::max(bound_max, bound);
        over_cap += it > cap;
        over_bound += it > bound;
        sweep_sum += sw;
        sweep_max = std::max(sweep_max, sw);
        scap_max = std::max(scap_max, scap);
        over_scap += sw > scap;
        green += verify_profile(g, second.profile, eps).green();
      }
      const double n = a.seeds == 0 ? 1.0 : double(a.seeds);
      std::cout << name << '\t' << number(eps) << '\t' << a.seeds << '\t' << number(iter_sum / n) << '\t' << iter_max
                << '\t' << cap_max << '\t' << over_cap << '\t' << bound_max << '\t' << over_bound << '\t'
                << number(sweep_sum / n) << '\t' << sweep_max << '\t' << scap_max << '\t' << over_scap << '\t'
                << green << '\n';
      all_green = all_green && green == a.seeds;
    }
  }
  return all_green ? kGreen : kNotGreen;
}

int cmd_appendix() {
  std::cout << "check\texpected\tactual\tok\n";
  bool ok = true;
  for (const auto& c : appendix_checks()) {
    std::cout << c.name << '\t' << number(c.expected) << '\t' << number(c.actual) << '\t' << (c.ok() ? 1 : 0) << '\n';
    ok = ok && c.ok();
  }
  return ok ? kGreen : kNotGreen;
}

struct ReplayArgs {
  std::string instance, trace, profile, out;
};

int cmd_replay(const ReplayArgs& a) {
  const InstanceFile file = load_instance(a.instance);
  const EngineTrace trace = with_path(a.trace, [](const std::string& text) { return parse_trace(text); });
  const MatchingProfile p = replay(file.game, trace);
  check_profile(file.game, p);
  if (!a.out.empty()) write_text_file(a.out, emit_profile(file.game, p));
  print_profile(p);
  if (a.profile.empty()) return kGreen;
  const MatchingProfile expected =
      with_path(a.profile, [&](const std::string& text) { return parse_profile(text, file.game); });
  if (expected == p) return kGreen;
  std::cerr << "replayed profile differs from " << a.profile << '\n';
  return kNotGreen;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stable allocations of bi-matrix matching games"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "run propose-dispose and the stabilizing sweeps");
  solve_cmd->add_option("instance", solve_args.instance, "instance file")->required();
  solve_cmd->add_option("--eps", solve_args.eps, "approximation margin (default: the instance's)");
  solve_cmd->add_option("--order", solve_args.order, "proposer queue, comma separated")->delimiter(',');
  solve_cmd->add_option("--out", solve_args.out, "write the profile here");
  solve_cmd->add_option("--report", solve_args.report, "write the stability report here");
  solve_cmd->add_option("--trace", solve_args.trace, "write the event log here");

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "check a profile for external and internal stability");
  verify_cmd->add_option("instance", verify_args.instance, "instance file")->required();
  verify_cmd->add_option("profile", verify_args.profile, "profile file")->required();
  verify_cmd->add_option("--eps", verify_args.eps, "approximation margin (default: the instance's)");
  verify_cmd->add_option("--report", verify_args.report, "write the stability report here");

  GenArgs gen_args;
  auto* gen_cmd = app.add_subcommand("gen", "write a seeded random instance");
  gen_cmd->add_option("--class", gen_args.kind, "zerosum, competitive, repeated or transfer");
  gen_cmd->add_option("--men", gen_args.config.men);
  gen_cmd->add_option("--women", gen_args.config.women);
  gen_cmd->add_option("--actions", gen_args.config.actions, "most pure actions per agent");
  gen_cmd->add_option("--entry-range", gen_args.entry_range, "lo,hi for integer payoff entries")->delimiter(',');
  gen_cmd->add_option("--eps", gen_args.config.epsilon);
  gen_cmd->add_option("--seed", gen_args.config.seed);
  gen_cmd->add_flag("--with-order", gen_args.with_order, "store the identity proposer order");
  gen_cmd->add_option("--out", gen_args.out, "write here instead of stdout");

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "iteration and sweep counts against their caps");
  bench_cmd->add_option("--class", bench_args.kinds, "classes, comma separated")->delimiter(',');
  bench_cmd->add_option("--eps-list", bench_args.eps_list, "margins, comma separated")->delimiter(',');
  bench_cmd->add_option("--seeds", bench_args.seeds, "instances per class and margin");
  bench_cmd->add_option("--first-seed", bench_args.first_seed);
  bench_cmd->add_option("--men", bench_args.men);
  bench_cmd->add_option("--women", bench_args.women);
  bench_cmd->add_option("--actions", bench_args.actions);

  auto* appendix_cmd = app.add_subcommand("appendix", "rerun the built-in transfer example and diff every number");

  ReplayArgs replay_args;
  auto* replay_cmd = app.add_subcommand("replay", "rebuild the final profile from an event log");
  replay_cmd->add_option("instance", replay_args.instance, "instance file")->required();
  replay_cmd->add_option("trace", replay_args.trace, "trace file")->required();
  replay_cmd->add_option("--profile", replay_args.profile, "compare against this profile");
  replay_cmd->add_option("--out", replay_args.out, "write the rebuilt profile here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kMalformed;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve_args);
    if (*verify_cmd) return cmd_verify(verify_args);
    if (*gen_cmd) return cmd_gen(gen_args);
    if (*bench_cmd) return cmd_bench(bench_args);
    if (*appendix_cmd) return cmd_appendix();
    if (*replay_cmd) return cmd_replay(replay_args);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kMalformed;
  } catch (const ContractViolation& e) {
    std::cerr << "contract violation: " << e.what() << '\n';
    return kContract;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNotGreen;
  }
  return kNotGreen;
}
