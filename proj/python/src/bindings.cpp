#include "qsense/bounds.hpp"
#include "qsense/engineering.hpp"
#include "qsense/errors.hpp"
#include "qsense/ioncompile.hpp"
#include "qsense/optimize.hpp"
#include "qsense/protocols.hpp"
#include "qsense/serialize.hpp"
#include "qsense/version.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace py::literals;
using namespace qsense;

namespace {

ProbeState state_from_any(const py::object& o) {
  if (py::isinstance<ProbeState>(o)) return o.cast<ProbeState>();
  return ProbeState::normalized(o.cast<CVector>());
}

Spectrum spectrum_from_any(const py::object& o) {
  if (py::isinstance<Spectrum>(o)) return o.cast<Spectrum>();
  return Spectrum(o.cast<std::vector<double>>());
}

}  // namespace

PYBIND11_MODULE(_qsense, m) {
  m.doc() = "Bayesian frequency estimation with engineered spectra";
  m.attr("__version__") = kVersion;

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<Unsupported>(m, "Unsupported", PyExc_NotImplementedError);
  py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_ArithmeticError);

  // priors
  py::class_<Prior>(m, "Prior")
      .def_static("gaussian", &Prior::gaussian, py::arg("mean"), py::arg("sigma"))
      .def_static("uniform", &Prior::uniform, py::arg("lo"), py::arg("hi"))
      .def_static("grid", &Prior::grid_normalized, py::arg("points"), py::arg("weights"),
                  py::arg("bin_width") = std::nullopt)
      .def_static("load_csv", &load_grid_csv, py::arg("path"))
      .def_property_readonly("family", &Prior::family_name)
      .def_property_readonly("mean", &Prior::mean)
      .def_property_readonly("symmetric", &Prior::symmetric)
      .def("variance", [](const Prior& p) { return variance(p); })
      .def("entropy", [](const Prior& p) { return entropy(p); })
      .def("characteristic_function", [](const Prior& p, double s) { return characteristic_function(p, s); })
      .def("discretize", [](const Prior& p, int n) { return discretize(p, n); }, py::arg("points") = 4001)
      .def("__repr__", [](const Prior& p) { return "<Prior " + p.family_name() + ">"; });

  py::class_<Spectrum>(m, "Spectrum")
      .def(py::init<std::vector<double>>(), py::arg("lambdas"))
      .def_static("equally_gapped", &Spectrum::equally_gapped, py::arg("n"))
      .def_static("qubit", &Spectrum::qubit)
      .def_property_readonly("values", &Spectrum::values)
      .def("__len__", &Spectrum::size);

  py::class_<ProbeState>(m, "ProbeState")
      .def(py::init([](const CVector& c) { return ProbeState::normalized(c); }), py::arg("coeffs"))
      .def_static("flat", &ProbeState::flat, py::arg("n"))
      .def_static("sine", &ProbeState::sine, py::arg("n"))
      .def_property_readonly("coeffs", &ProbeState::coeffs)
      .def_property_readonly("weights", &ProbeState::weights)
      .def("__len__", &ProbeState::size);

  // estimation and bounds
  py::class_<MeasurementSolution>(m, "Measurement")
      .def_readonly("S", &MeasurementSolution::S)
      .def_readonly("estimators", &MeasurementSolution::estimators)
      .def_readonly("projectors", &MeasurementSolution::projectors);

  m.def(
      "optimal_mse",
      [](const Prior& p, const py::object& state, const py::object& spectrum, double t) {
        return optimal_mse(p, state_from_any(state), spectrum_from_any(spectrum), t);
      },
      py::arg("prior"), py::arg("state"), py::arg("spectrum"), py::arg("t"));
  m.def(
      "personick",
      [](const Prior& p, const py::object& state, const py::object& spectrum, double t) {
        return personick_solve(averaged_pair(p, state_from_any(state), spectrum_from_any(spectrum), t));
      },
      py::arg("prior"), py::arg("state"), py::arg("spectrum"), py::arg("t"),
      "Optimal measurement for the prior-averaged state.");
  m.def(
      "qfi", [](const py::object& s, const py::object& sp) { return qfi(state_from_any(s), spectrum_from_any(sp)); },
      py::arg("state"), py::arg("spectrum"));
  m.def(
      "bcrb",
      [](const Prior& p, const py::object& s, const py::object& sp, double t) {
        return bcrb(p, state_from_any(s), spectrum_from_any(sp), t);
      },
      py::arg("prior"), py::arg("state"), py::arg("spectrum"), py::arg("t"));
  m.def("entropic_bound", &entropic_bound, py::arg("prior"), py::arg("dim"));

  // optimization
  py::class_<OptResult>(m, "OptResult")
      .def_readonly("state", &OptResult::state)
      .def_readonly("t", &OptResult::t)
      .def_readonly("mse", &OptResult::mse)
      .def_readonly("measurement", &OptResult::solution)
      .def_readonly("converged", &OptResult::converged);
  m.def(
      "optimize_state",
      [](const Prior& p, const py::object& sp, double t, int restarts, unsigned seed) {
        OptOptions o;
        o.restarts = restarts;
        o.seed = seed;
        return optimize_state(p, spectrum_from_any(sp), t, o);
      },
      py::arg("prior"), py::arg("spectrum"), py::arg("t"), py::arg("restarts") = 8, py::arg("seed") = 0);
  m.def(
      "find_tmax",
      [](const Prior& p, const py::object& sp, const py::object& state) {
        std::optional<ProbeState> fixed;
        if (!state.is_none()) fixed = state_from_any(state);
        const TmaxResult r = find_tmax(p, spectrum_from_any(sp), fixed);
        return py::make_tuple(r.t_max, r.mse_min);
      },
      py::arg("prior"), py::arg("spectrum"), py::arg("state") = py::none(),
      "Returns (t_max, minimal mse).");
  m.def(
      "nlevel_sweep",
      [](const Prior& p, int n_min, int n_max, std::vector<double> t_grid, int threads) {
        SweepOptions o;
        o.n_min = n_min;
        o.n_max = n_max;
        o.t_grid = std::move(t_grid);
        o.threads = threads;
        const SweepTable s = nlevel_sweep(p, o);
        py::list rows, env, cross;
        for (const auto& r : s.rows) rows.append(py::make_tuple(r.n, r.t, r.mse));
        for (const auto& e : s.envelope) env.append(py::make_tuple(e.t, e.mse, e.best_n));
        for (double c : s.crossovers) cross.append(c);
        return py::dict("rows"_a = rows, "envelope"_a = env, "crossovers"_a = cross);
      },
      py::arg("prior"), py::arg("n_min") = 2, py::arg("n_max") = 9, py::arg("t_grid") = std::vector<double>{},
      py::arg("threads") = 0);

  // protocols
  m.def(
      "onthefly",
      [](const Prior& p, int steps, double tau) {
        OnTheFlyOptions o;
        o.steps = steps;
        o.tau = tau;
        return py::module_::import("json").attr("loads")(to_json(onthefly_run(p, o)).dump());
      },
      py::arg("prior"), py::arg("steps") = 6, py::arg("tau") = 0.0, "On-the-fly trace as a dict.");
  m.def("sequential_plan", [](double v0, double a, int steps) {
    const SequentialPlan s = sequential_plan(v0, a, steps);
    return py::dict("R"_a = s.R, "variances"_a = s.variances, "times"_a = s.times, "cumulative"_a = s.cumulative);
  }, py::arg("v0"), py::arg("A"), py::arg("steps"));
  m.def("sequential_optimum", [] {
    const auto o = sequential_optimize_A();
    return py::make_tuple(o.a_star, o.coefficient);
  }, "Returns (A*, asymptotic coefficient).");
  m.def(
      "two_qubit_study",
      [](const Prior& p) { return py::module_::import("json").attr("loads")(to_json(two_qubit_study(p)).dump()); },
      py::arg("prior"));

  // engineering
  m.def(
      "lift_round_trip",
      [](const py::object& targets, std::vector<double> amplitudes, double t, double omega) {
        const LiftSchedule s = plan_lift(spectrum_from_any(targets), amplitudes, t);
        return py::make_tuple(simulate_lift(s, omega), lift_closed_form(s, omega));
      },
      py::arg("targets"), py::arg("amplitudes"), py::arg("t"), py::arg("omega"),
      "Simulated and closed-form lifted states for a planned schedule.");
  m.def(
      "swap_spectrum", [](double x) { return swap_effective_spectrum(two_spin_base(), two_spin_pi_swap(x)).values(); },
      py::arg("x"));

  // ion compiler
  m.def(
      "compile_protocol",
      [](const py::object& sp, const py::object& state, double t, int cutoff, double b) {
        const Spectrum spec = spectrum_from_any(sp);
        const ProbeState st = state_from_any(state);
        const IonSchedule s = compile_protocol(spec, st, t, cutoff);
        return to_json(s, IonModel{spec, st, t, b, cutoff, std::nullopt}).dump();
      },
      py::arg("spectrum"), py::arg("state"), py::arg("t"), py::arg("cutoff"), py::arg("B"),
      "Pulse schedule as a JSON string.");
  m.def(
      "verify_schedule",
      [](const std::string& text) {
        const LoadedIonSchedule l = ion_schedule_from_json(Json::parse(text));
        const auto& s = l.schedule;
        const IonState fin = simulate_ion(s.pulses, l.model.b, s.t, IonState::basis(s.cutoff, IonLevel::kG, 1));
        const IonState ref = effective_ion_state(l.model.spectrum, l.model.state, l.model.b, s.t, s.cutoff);
        return (fin.amplitudes() - ref.amplitudes()).cwiseAbs().maxCoeff();
      },
      py::arg("schedule_json"), "Max deviation of a schedule from its effective model.");
  m.def("flip_pulse_count", [](int k, int n) { return compile_flip(k, n).size(); }, py::arg("k"), py::arg("n"));
}
