#include "qsense/serialize.hpp"

#include "qsense/errors.hpp"
#include "qsense/version.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qsense {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  const auto res = std::to_chars(buf, buf + sizeof(buf), h, 16);
  std::string s(buf, res.ptr);
  return std::string(16 - s.size(), '0') + s;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw InvalidArgument("csv row width differs from header");
  rows_.push_back(std::move(cells));
}

std::string CsvTable::render(const Provenance& p) const {
  std::ostringstream out;
  out << "# qsense " << kVersion << " config=" << p.config_hash << " seed=" << p.seed << '\n';
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write " + path.string());
  f << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot read " + path.string());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

namespace {

Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

cplx complex_from(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw InvalidArgument("complex numbers are [re, im] pairs");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

Json matrix_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_json(m(i, k)));
    rows.push_back(row);
  }
  return rows;
}

CMatrix matrix_from(const Json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  CMatrix m(rows, rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j.at(static_cast<std::size_t>(i));
    if (static_cast<Eigen::Index>(row.size()) != rows) throw InvalidArgument("matrix must be square");
    for (Eigen::Index k = 0; k < rows; ++k) m(i, k) = complex_from(row.at(static_cast<std::size_t>(k)));
  }
  return m;
}

}  // namespace

// ------------------------------------------------------------- lifting --

Json to_json(const LiftSchedule& s) {
  Json events = Json::array();
  for (const auto& e : s.events)
    events.push_back({{"j", e.branch}, {"k", e.k}, {"time", e.time}, {"angle", e.angle}, {"target", e.target}});
  return {{"total_time", s.total_time}, {"initial_angle", s.initial_angle}, {"events", events}};
}

LiftSchedule lift_schedule_from_json(const Json& j) {
  try {
    LiftSchedule s;
    s.total_time = j.at("total_time").get<double>();
    s.initial_angle = j.value("initial_angle", s.initial_angle);
    for (const auto& e : j.at("events")) {
      LiftEvent ev;
      ev.branch = e.at("j").get<int>();
      ev.k = e.at("k").get<int>();
      ev.time = e.at("time").get<double>();
      ev.angle = e.at("angle").get<double>();
      ev.target = e.value("target", -1);
      s.events.push_back(ev);
    }
    validate(s);
    return s;
  } catch (const nlohmann::json::exception& ex) {
    throw InvalidArgument(std::string("lift schedule json: ") + ex.what());
  }
}

// ------------------------------------------------------------- protocols --

Json to_json(const ProtocolTrace& trace) {
  Json steps = Json::array();
  for (const auto& s : trace.steps) {
    steps.push_back({{"step", s.step},
                     {"time", s.time},
                     {"spectrum", s.spectrum.values()},
                     {"weights", s.weights()},
                     {"phase_coefficients", s.phase_coefficients},
                     {"mse", s.mse},
                     {"angles", s.angles},
                     {"split_weights", s.split_weights}});
  }
  return {{"tau", trace.tau}, {"truncated", trace.truncated}, {"note", trace.note}, {"steps", steps}};
}

CsvTable trace_table(const ProtocolTrace& trace) {
  CsvTable t({"step", "time", "level_index", "weight", "phase_coefficient", "mse"});
  for (const auto& s : trace.steps) {
    const auto w = s.weights();
    for (std::size_t l = 0; l < w.size(); ++l)
      t.add_row({std::to_string(s.step), format_double(s.time), std::to_string(l), format_double(w[l]),
                 format_double(s.phase_coefficients[l]), format_double(s.mse)});
  }
  return t;
}

Json to_json(const SequentialPlan& p) {
  return {{"A", p.A}, {"R", p.R}, {"variances", p.variances}, {"times", p.times}, {"cumulative", p.cumulative}};
}

Json to_json(const TwoQubitReport& r) {
  return {{"free", {{"t", r.free_t}, {"mse", r.free_mse}}},
          {"lifted",
           {{"x", r.x},
            {"t", r.lifted_t},
            {"mse", r.lifted_mse},
            {"amplitudes", r.amplitudes},
            {"phase_coefficients", r.phase_coefficients},
            {"estimators", r.estimators},
            {"projector_amplitudes", r.projector_amplitudes},
            {"projector_phases", r.projector_phases}}},
          {"ratio", r.ratio},
          {"equally_gapped_t", r.equally_gapped_t},
          {"frozen", {{"times", r.frozen_times}, {"mse", r.frozen_mse}, {"spread", r.frozen_spread}}}};
}

// ------------------------------------------------------------- ion --

Json to_json(const IonPulse& p) {
  Json j = {{"time", p.time}, {"kind", to_string(p.kind)}, {"stage", to_string(p.stage)}, {"group", p.group}};
  switch (p.kind) {
    case PulseKind::kG:
    case PulseKind::kE:
      j["l"] = p.l;
      break;
    case PulseKind::kDetect:
      j["level"] = p.l;
      break;
    case PulseKind::kSideband:
      j["a"] = {to_string(p.level_a), p.j_a};
      j["b"] = {to_string(p.level_b), p.j_b};
      break;
    case PulseKind::kAuxUnitary:
      j["u"] = Json::array({complex_json(p.u[0]), complex_json(p.u[1]), complex_json(p.u[2]), complex_json(p.u[3])});
      break;
    case PulseKind::kXprime:
    case PulseKind::kSigmaX:
      break;
  }
  return j;
}

IonPulse ion_pulse_from_json(const Json& j) {
  IonPulse p;
  p.time = j.at("time").get<double>();
  p.kind = pulse_kind_from_string(j.at("kind").get<std::string>());
  p.stage = stage_from_string(j.at("stage").get<std::string>());
  p.group = j.value("group", std::string());
  switch (p.kind) {
    case PulseKind::kG:
    case PulseKind::kE:
      p.l = j.at("l").get<int>();
      break;
    case PulseKind::kDetect:
      p.l = j.at("level").get<int>();
      break;
    case PulseKind::kSideband:
      p.level_a = ion_level_from_string(j.at("a").at(0).get<std::string>());
      p.j_a = j.at("a").at(1).get<int>();
      p.level_b = ion_level_from_string(j.at("b").at(0).get<std::string>());
      p.j_b = j.at("b").at(1).get<int>();
      break;
    case PulseKind::kAuxUnitary:
      for (std::size_t i = 0; i < 4; ++i) p.u[i] = complex_from(j.at("u").at(i));
      break;
    case PulseKind::kXprime:
    case PulseKind::kSigmaX:
      break;
  }
  return p;
}

Json to_json(const IonSchedule& s, const IonModel& m) {
  Json state = Json::array();
  for (Eigen::Index i = 0; i < m.state.coeffs().size(); ++i) state.push_back(complex_json(m.state.coeffs()(i)));
  Json model = {{"spectrum", m.spectrum.values()}, {"state", state}, {"t", m.t}, {"B", m.b}, {"cutoff", m.cutoff}};
  if (m.readout_basis) model["readout_basis"] = matrix_json(*m.readout_basis);
  Json pulses = Json::array();
  for (const auto& p : s.pulses) pulses.push_back(to_json(p));
  return {{"format", "qsense-ion-schedule"}, {"version", kVersion}, {"cutoff", s.cutoff},
          {"t", s.t}, {"model", model}, {"pulses", pulses}};
}

LoadedIonSchedule ion_schedule_from_json(const Json& j) {
  try {
    LoadedIonSchedule out;
    out.schedule.cutoff = j.at("cutoff").get<int>();
    out.schedule.t = j.at("t").get<double>();
    for (const auto& p : j.at("pulses")) out.schedule.pulses.push_back(ion_pulse_from_json(p));
    const Json& m = j.at("model");
    out.model.spectrum = Spectrum(m.at("spectrum").get<std::vector<double>>());
    CVector c(static_cast<Eigen::Index>(m.at("state").size()));
    for (std::size_t i = 0; i < m.at("state").size(); ++i) c(static_cast<Eigen::Index>(i)) = complex_from(m.at("state").at(i));
    out.model.state = ProbeState::normalized(c);
    out.model.t = m.at("t").get<double>();
    out.model.b = m.at("B").get<double>();
    out.model.cutoff = m.at("cutoff").get<int>();
    if (m.contains("readout_basis")) out.model.readout_basis = matrix_from(m.at("readout_basis"));
    return out;
  } catch (const nlohmann::json::exception& ex) {
    throw InvalidArgument(std::string("pulse schedule json: ") + ex.what());
  }
}

}  // namespace qsense
