#include "matchgame/appendix.hpp"
#include "matchgame/engine.hpp"
#include "matchgame/generator.hpp"
#include "matchgame/instance_io.hpp"
#include "matchgame/linprog.hpp"
#include "matchgame/verify.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <numeric>

namespace py = pybind11;
using namespace matchgame;

namespace {

struct SolveResult {
  MatchingGame game;
  MatchingProfile profile;
  EngineTrace trace;
  StabilityReport report;

  std::vector<std::pair<std::size_t, std::size_t>> couples() const { return profile.couples(); }
  std::vector<double> men_payoffs() const { return {profile.man_payoffs().begin(), profile.man_payoffs().end()}; }
  std::vector<double> women_payoffs() const {
    return {profile.woman_payoffs().begin(), profile.woman_payoffs().end()};
  }
};

std::vector<std::size_t> order_or_default(const InstanceFile& file, const std::optional<std::vector<std::size_t>>& order) {
  if (order) return *order;
  if (file.order) return *file.order;
  std::vector<std::size_t> out(file.game.men);
  std::iota(out.begin(), out.end(), 0);
  return out;
}

RealMatrix to_matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows[0].empty()) throw ContractViolation("empty matrix");
  RealMatrix m(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols()) throw ContractViolation("ragged matrix");
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

}  // namespace

PYBIND11_MODULE(_matchgame, m) {
  m.doc() = "Stable allocations of bi-matrix matching games";

  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);
  py::register_exception<NoFeasibleAgreement>(m, "NoFeasibleAgreement", PyExc_RuntimeError);
  // ParseError carries line and column attributes
  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> parse_error;
  parse_error.call_once_and_store_result(
      [&]() { return py::exception<ParseError>(m, "ParseError", PyExc_ValueError); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParseError& e) {
      const py::object& type = parse_error.get_stored();
      py::object err = type(e.what());
      err.attr("line") = e.line();
      err.attr("column") = e.column();
      PyErr_SetObject(type.ptr(), err.ptr());
    }
  });

  py::class_<InstanceFile>(m, "Instance")
      .def_property_readonly("men", [](const InstanceFile& f) { return f.game.men; })
      .def_property_readonly("women", [](const InstanceFile& f) { return f.game.women; })
      .def_property_readonly("epsilon", [](const InstanceFile& f) { return f.game.epsilon; })
      .def_property_readonly("kind", [](const InstanceFile& f) { return std::string(class_name(f.game.kind())); })
      .def_readonly("order", &InstanceFile::order)
      .def_readonly("seed", &InstanceFile::seed)
      .def("to_json", [](const InstanceFile& f) { return emit_instance(f); });

  m.def("parse_instance", [](const std::string& text) { return parse_instance(text); }, py::arg("text"));
  m.def("appendix_instance", [] {
    InstanceFile f;
    f.game = appendix_market();
    f.order = appendix_order();
    return f;
  });

  m.def(
      "generate",
      [](const std::string& kind, std::size_t men, std::size_t women, std::size_t actions, std::uint64_t seed,
         double eps, int entry_lo, int entry_hi) {
        auto parsed = parse_class_name(kind);
        if (!parsed) throw ContractViolation("unknown class '" + kind + "'");
        GeneratorConfig cfg;
        cfg.kind = *parsed;
        cfg.men = men;
        cfg.women = women;
        cfg.actions = actions;
        cfg.seed = seed;
        cfg.epsilon = eps;
        cfg.entry_lo = entry_lo;
        cfg.entry_hi = entry_hi;
        InstanceFile f;
        f.game = generate_market(cfg);
        f.seed = seed;
        f.generator = kGeneratorVersion;
        return f;
      },
      py::arg("kind"), py::arg("men") = 3, py::arg("women") = 3, py::arg("actions") = 2, py::arg("seed") = 0,
      py::arg("eps") = 1.0, py::arg("entry_lo") = -10, py::arg("entry_hi") = 10);

  py::class_<SolveResult>(m, "SolveResult")
      .def_property_readonly("green", [](const SolveResult& r) { return r.report.green(); })
      .def_property_readonly("iterations", [](const SolveResult& r) { return r.trace.iterations; })
      .def_property_readonly("sweeps", [](const SolveResult& r) { return r.trace.sweeps; })
      .def_property_readonly("couples", &SolveResult::couples)
      .def_property_readonly("men_payoffs", &SolveResult::men_payoffs)
      .def_property_readonly("women_payoffs", &SolveResult::women_payoffs)
      .def("profile_json", [](const SolveResult& r) { return emit_profile(r.game, r.profile); })
      .def("trace_json", [](const SolveResult& r) { return emit_trace(r.trace); })
      .def("report_json", [](const SolveResult& r) { return emit_report(r.report); });

  m.def(
      "solve",
      [](const InstanceFile& f, std::optional<std::vector<std::size_t>> order, std::optional<double> eps) {
        py::gil_scoped_release release;
        const double margin = eps.value_or(f.game.epsilon);
        auto run = solve(f.game, order_or_default(f, order), margin);
        SolveResult r{f.game, run.profile, run.trace, verify_profile(f.game, run.profile, margin)};
        return r;
      },
      py::arg("instance"), py::arg("order") = std::nullopt, py::arg("eps") = std::nullopt);

  m.def(
      "verify",
      [](const InstanceFile& f, const std::string& profile, std::optional<double> eps) {
        const MatchingProfile p = parse_profile(profile, f.game);
        return emit_report(verify_profile(f.game, p, eps.value_or(f.game.epsilon)));
      },
      py::arg("instance"), py::arg("profile"), py::arg("eps") = std::nullopt);

  m.def(
      "replay",
      [](const InstanceFile& f, const std::string& trace) { return emit_profile(f.game, replay(f.game, parse_trace(trace))); },
      py::arg("instance"), py::arg("trace"));

  m.def("appendix_checks", [] {
    std::vector<std::tuple<std::string, double, double>> out;
    for (const auto& c : appendix_checks()) out.emplace_back(c.name, c.expected, c.actual);
    return out;
  });

  m.def(
      "game_value", [](const std::vector<std::vector<double>>& A) { return game_value(to_matrix(A)).value; },
      py::arg("matrix"));

  m.attr("FILE_VERSION") = kFileVersion;
  m.attr("GENERATOR_VERSION") = kGeneratorVersion;
}
