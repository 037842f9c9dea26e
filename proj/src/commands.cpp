#include "qsense/commands.hpp"

#include "qsense/bounds.hpp"
#include "qsense/config.hpp"
#include "qsense/engineering.hpp"
#include "qsense/ioncompile.hpp"
#include "qsense/optimize.hpp"
#include "qsense/protocols.hpp"
#include "qsense/serialize.hpp"
#include "qsense/version.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <ostream>

namespace qsense {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Context {
  RunConfig cfg;
  Prior prior = Prior::gaussian(0.0, 1.0);
  Provenance prov;
  std::filesystem::path out;
  int threads = 0;
  std::ostream& log;
};

std::string fmt(double x) { return format_double(x); }

void emit_csv(const Context& c, const std::string& name, const CsvTable& t) {
  write_text(c.out / name, t.render(c.prov));
  c.log << "wrote " << (c.out / name).string() << '\n';
}

void emit_json(const Context& c, const std::string& name, Json j) {
  j["provenance"] = {{"version", kVersion}, {"config", c.prov.config_hash}, {"seed", c.prov.seed}};
  write_text(c.out / name, j.dump(2) + "\n");
  c.log << "wrote " << (c.out / name).string() << '\n';
}

ProbeState state_by_name(const std::string& name, int n) {
  if (name == "flat") return ProbeState::flat(n);
  if (name == "sine") return ProbeState::sine(n);
  throw ConfigError("config: unknown state '" + name + "' (flat, sine)");
}

double bcrb_or_nan(const Prior& p, const ProbeState& s, const Spectrum& sp, double t) {
  try {
    return bcrb(p, s, sp, t);
  } catch (const Unsupported&) {
    return kNaN;
  }
}

OptOptions opt_options(const Context& c, const std::string& section) {
  OptOptions o;
  o.restarts = c.cfg.get_int(section, "restarts", 8);
  o.seed = c.prov.seed;
  if (o.restarts < 1) throw ConfigError("config: [" + section + "] restarts must be >= 1");
  return o;
}

// ------------------------------------------------------------- commands --

void cmd_bounds(Context& c) {
  const int n = c.cfg.get_int("bounds", "levels", 2);
  if (n < 1) throw ConfigError("config: [bounds] levels must be >= 1");
  const Spectrum spec = n == 1 ? Spectrum({0.0}) : Spectrum::equally_gapped(n);
  const ProbeState state = state_by_name(c.cfg.get_string("bounds", "state", "flat"), n);
  const double t_max = c.cfg.get_double("bounds", "t_max", 6.0 / std_dev(c.prior));
  const int points = c.cfg.get_int("bounds", "t_points", 61);
  if (points < 2 || !(t_max > 0.0)) throw ConfigError("config: [bounds] needs t_points >= 2 and t_max > 0");
  const double ent = entropic_bound(c.prior, n);
  CsvTable table({"t", "bcrb", "entropic_d", "mse"});
  for (int i = 0; i < points; ++i) {
    const double t = t_max * i / (points - 1);
    table.add_row({fmt(t), fmt(bcrb_or_nan(c.prior, state, spec, t)), fmt(ent),
                   fmt(optimal_mse(c.prior, state, spec, t))});
  }
  emit_csv(c, "bounds.csv", table);
  CsvTable dims({"d", "entropic"});
  for (int d = 1; d <= n; ++d) dims.add_row({std::to_string(d), fmt(entropic_bound(c.prior, d))});
  emit_csv(c, "entropic.csv", dims);
}

void cmd_qubit_opt(Context& c) {
  const int samples = c.cfg.get_int("qubit-opt", "scan_samples", 200);
  const ProbeState plus = ProbeState::flat(2);
  const Spectrum qubit = Spectrum::qubit();
  const TmaxResult r = find_tmax(c.prior, qubit, plus, {}, samples);
  const auto pair = averaged_pair(c.prior, plus, qubit, r.t_max);
  const auto sol = personick_solve(pair);
  Json j = {{"t_max", r.t_max}, {"mse", r.mse_min}, {"personick_gain", gain(pair, sol)},
            {"estimators", sol.absolute_estimators()}};
  try {
    j["closed_form_gain"] = qubit_general_solution(c.prior, r.t_max).gain;
  } catch (const NumericalFailure&) {
    j["closed_form_gain"] = nullptr;
  }
  const Prior grid = c.prior.family() == Prior::Family::kGrid ? c.prior : discretize(c.prior);
  const auto pair_grid = averaged_pair(grid, plus, qubit, r.t_max);
  j["oracle_mse"] = simulate_bayes(grid, plus, qubit, r.t_max, personick_solve(pair_grid)).mse;
  c.log << "t_max = " << fmt(r.t_max) << ", mse = " << fmt(r.mse_min) << '\n';
  emit_json(c, "qubit_opt.json", j);
}

void cmd_nlevel_sweep(Context& c) {
  SweepOptions o;
  o.n_min = c.cfg.get_int("nlevel-sweep", "n_min", 2);
  o.n_max = c.cfg.get_int("nlevel-sweep", "n_max", 9);
  const double t_max = c.cfg.get_double("nlevel-sweep", "t_max", 6.0 / std_dev(c.prior));
  const int points = c.cfg.get_int("nlevel-sweep", "t_points", 200);
  if (points < 2 || !(t_max > 0.0)) throw ConfigError("config: [nlevel-sweep] needs t_points >= 2 and t_max > 0");
  for (int i = 0; i < points; ++i) o.t_grid.push_back(t_max * i / (points - 1));
  o.threads = c.threads;
  o.opt = opt_options(c, "nlevel-sweep");
  const SweepTable s = nlevel_sweep(c.prior, o);

  CsvTable rows({"n", "t", "mse", "bound_entropic", "bound_bcrb", "converged"});
  for (const auto& r : s.rows)
    rows.add_row({std::to_string(r.n), fmt(r.t), fmt(r.mse), fmt(r.bound_entropic), fmt(r.bound_bcrb),
                  r.converged ? "1" : "0"});
  emit_csv(c, "nlevel_sweep.csv", rows);
  CsvTable env({"t", "mse", "best_n"});
  for (const auto& e : s.envelope) env.add_row({fmt(e.t), fmt(e.mse), std::to_string(e.best_n)});
  emit_csv(c, "nlevel_envelope.csv", env);
  CsvTable mins({"n", "t_min", "mse_min", "crossover_to_next"});
  for (std::size_t i = 0; i < s.minima.size(); ++i)
    mins.add_row({std::to_string(s.minima[i].n), fmt(s.minima[i].t), fmt(s.minima[i].mse),
                  fmt(i < s.crossovers.size() ? s.crossovers[i] : kNaN)});
  emit_csv(c, "nlevel_minima.csv", mins);
}

void cmd_onthefly(Context& c) {
  OnTheFlyOptions o;
  o.steps = c.cfg.get_int("onthefly", "steps", 6);
  o.tau = c.cfg.get_double("onthefly", "tau", 0.0);
  o.restarts = c.cfg.get_int("onthefly", "restarts", 8);
  o.seed = c.prov.seed;
  const ProtocolTrace trace = onthefly_run(c.prior, o);
  for (const auto& s : trace.steps) c.log << "step " << s.step << ": mse = " << fmt(s.mse) << '\n';
  if (trace.truncated) c.log << "truncated: " << trace.note << '\n';
  emit_csv(c, "onthefly.csv", trace_table(trace));
  emit_json(c, "onthefly.json", to_json(trace));
}

void cmd_sequential(Context& c) {
  const SequentialOptimum best = sequential_optimize_A();
  const double a = c.cfg.get_double("sequential", "A", best.a_star);
  const int steps = c.cfg.get_int("sequential", "steps", 10);
  const int sim = c.cfg.get_int("sequential", "simulate_steps", 2);
  const int grid_points = c.cfg.get_int("sequential", "grid_points", 4001);
  if (sim < 0 || sim > 12) throw ConfigError("config: [sequential] simulate_steps must lie in [0, 12]");
  const SequentialPlan plan = sequential_plan(variance(c.prior), a, steps);
  CsvTable t({"k", "variance", "time", "cumulative"});
  for (int k = 0; k <= steps; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    t.add_row({std::to_string(k), fmt(plan.variances[ku]), fmt(k < steps ? plan.times[ku] : kNaN),
               fmt(plan.cumulative[ku])});
  }
  emit_csv(c, "sequential.csv", t);
  Json j = {{"A_star", best.a_star}, {"coefficient", best.coefficient}, {"plan", to_json(plan)}};
  const Prior grid = c.prior.family() == Prior::Family::kGrid ? c.prior : discretize(c.prior, grid_points);
  const SequentialPlan short_plan = sequential_plan(variance(c.prior), a, sim);
  j["simulation"] = {{"steps", sim},
                     {"exact", sequential_simulate(grid, short_plan.times)},
                     {"gaussian_approximation", short_plan.variances.back()}};
  c.log << "A* = " << fmt(best.a_star) << ", coefficient = " << fmt(best.coefficient) << '\n';
  emit_json(c, "sequential.json", j);
}

void cmd_two_qubit(Context& c) {
  const TwoQubitReport r = two_qubit_study(c.prior, opt_options(c, "two-qubit"));
  c.log << "improvement ratio = " << fmt(r.ratio) << '\n';
  emit_json(c, "two_qubit.json", to_json(r));
}

struct Verification {
  double max_deviation = 0.0;
  double norm_defect = 0.0;
  double readout_deviation = 0.0;
};

Verification verify(const IonSchedule& s, const IonModel& m) {
  Verification v;
  const IonState init = IonState::basis(s.cutoff, IonLevel::kG, 1);
  const IonState fin = simulate_ion(s.pulses, m.b, s.t, init);
  const IonState ref = effective_ion_state(m.spectrum, m.state, m.b, s.t, s.cutoff);
  v.max_deviation = (fin.amplitudes() - ref.amplitudes()).cwiseAbs().maxCoeff();
  v.norm_defect = std::abs(fin.amplitudes().norm() - 1.0);
  const auto probs = readout_distribution(s.pulses, fin);
  const CVector motional = ref.sector(IonLevel::kE).head(static_cast<Eigen::Index>(m.state.size()));
  const CMatrix basis = m.readout_basis ? *m.readout_basis
                                        : CMatrix::Identity(motional.size(), motional.size()).eval();
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const double expected = std::norm(basis.col(static_cast<Eigen::Index>(k)).dot(motional));
    v.readout_deviation = std::max(v.readout_deviation, std::abs(probs[k] - expected));
  }
  return v;
}

void cmd_compile(Context& c) {
  const int n = c.cfg.get_int("compile", "levels", 3);
  const int cutoff = c.cfg.get_int("compile", "cutoff", n);
  const double t = c.cfg.get_double("compile", "t", 2.0);
  const double b = c.cfg.get_double("compile", "B", 0.4);
  if (n < 2) throw ConfigError("config: [compile] levels must be >= 2");
  const Spectrum spec = Spectrum::equally_gapped(n);
  const std::string state_name = c.cfg.get_string("compile", "state", "optimal");
  ProbeState state;
  std::optional<CMatrix> basis;
  const std::string readout = c.cfg.get_string("compile", "readout", "personick");
  // The ion accumulates B lambda t, which is the estimation phase at time 2t.
  const double t_est = 2.0 * t;
  if (state_name == "optimal") {
    OptOptions o;
    o.seed = c.prov.seed;
    state = optimize_state(c.prior, spec, t_est, o).state;
  } else {
    state = state_by_name(state_name, n);
  }
  if (readout == "personick") {
    const auto sol = personick_solve(averaged_pair(c.prior, state, spec, t_est));
    basis = hermitian_spectral(sol.S).eigenvectors;
  } else if (readout != "computational") {
    throw ConfigError("config: [compile] readout must be personick or computational");
  }
  CompileOptions co;
  co.flip.sigma_x_shortcut = c.cfg.get_bool("compile", "sigma_x_shortcut", false);
  co.readout_basis = basis;
  const IonSchedule s = compile_protocol(spec, state, t, cutoff, co);
  const IonModel model{spec, state, t, b, cutoff, basis};
  const Verification v = verify(s, model);
  c.log << "pulses = " << s.pulses.size() << ", max deviation = " << fmt(v.max_deviation) << '\n';
  Json j = to_json(s, model);
  const std::string name = c.cfg.get_string("compile", "output", "pulses.json");
  j["provenance"] = {{"version", kVersion}, {"config", c.prov.config_hash}, {"seed", c.prov.seed}};
  write_text(c.out / name, j.dump(2) + "\n");
  c.log << "wrote " << (c.out / name).string() << '\n';
}

void cmd_verify_pulses(Context& c) {
  const auto path = c.cfg.get_path("verify-pulses", "schedule");
  const double tol = c.cfg.get_double("verify-pulses", "tolerance", 1e-9);
  Json j;
  try {
    j = Json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("schedule: ") + e.what());
  }
  const LoadedIonSchedule loaded = ion_schedule_from_json(j);
  const Verification v = verify(loaded.schedule, loaded.model);
  const bool ok = v.max_deviation < tol && v.norm_defect < 1e-12 && v.readout_deviation < tol;
  c.log << "max deviation = " << fmt(v.max_deviation) << ", norm defect = " << fmt(v.norm_defect)
        << ", readout deviation = " << fmt(v.readout_deviation) << (ok ? " (ok)" : " (FAILED)") << '\n';
  emit_json(c, "verify_report.json",
            {{"schedule", path.filename().string()},
             {"pulses", loaded.schedule.pulses.size()},
             {"max_deviation", v.max_deviation},
             {"norm_defect", v.norm_defect},
             {"readout_deviation", v.readout_deviation},
             {"tolerance", tol},
             {"ok", ok}});
  if (!ok) throw NumericalFailure("compiled schedule deviates from the effective model");
}

const std::map<std::string, std::function<void(Context&)>>& table() {
  static const std::map<std::string, std::function<void(Context&)>> t{
      {"bounds", cmd_bounds},       {"qubit-opt", cmd_qubit_opt}, {"nlevel-sweep", cmd_nlevel_sweep},
      {"onthefly", cmd_onthefly},   {"sequential", cmd_sequential}, {"two-qubit", cmd_two_qubit},
      {"compile", cmd_compile},     {"verify-pulses", cmd_verify_pulses},
  };
  return t;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"bounds",     "qubit-opt", "nlevel-sweep", "onthefly",
                                              "sequential", "two-qubit", "compile",      "verify-pulses"};
  return names;
}

int run_command(const CommandArgs& args, std::ostream& log, std::ostream& err) {
  const auto it = table().find(args.command);
  if (it == table().end()) {
    err << "unknown command '" << args.command << "'\n";
    return kExitConfig;
  }
  try {
    Context c{args.config ? RunConfig::load(*args.config) : RunConfig(), Prior::gaussian(0.0, 1.0), {}, args.out_dir,
              0, log};
    c.prior = prior_from_config(c.cfg);
    const int cfg_seed = c.cfg.get_int("run", "seed", 0);
    if (cfg_seed < 0) throw ConfigError("config: [run] seed must be >= 0");
    c.prov.seed = args.seed.value_or(static_cast<unsigned>(cfg_seed));
    c.prov.config_hash = c.cfg.hash();
    c.threads = args.threads.value_or(c.cfg.get_int("run", "threads", 0));
    if (c.threads < 0) throw ConfigError("thread count must be >= 0");
    it->second(c);
    return kExitOk;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Unsupported& e) {
    err << "unsupported: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace qsense
