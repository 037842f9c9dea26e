#pragma once

#include "qsense/engineering.hpp"
#include "qsense/ioncompile.hpp"
#include "qsense/optimize.hpp"
#include "qsense/protocols.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace qsense {

using Json = nlohmann::ordered_json;

// Shortest round-trip decimal form of a double ("nan" for NaN).
std::string format_double(double x);

// 64-bit FNV-1a, stable across platforms; used for provenance lines.
std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t h);

struct Provenance {
  std::string config_hash;  // hex
  unsigned seed = 0;
};

// Comma-separated table whose first line is "# qsense <version> config=<hash> seed=<seed>".
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::vector<std::string> cells);
  std::string render(const Provenance& provenance) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

Json to_json(const LiftSchedule& schedule);
LiftSchedule lift_schedule_from_json(const Json& j);

Json to_json(const ProtocolTrace& trace);
// Columns: step, time, level_index, weight, phase_coefficient, mse.
CsvTable trace_table(const ProtocolTrace& trace);

Json to_json(const SequentialPlan& plan);

Json to_json(const TwoQubitReport& report);

Json to_json(const IonPulse& pulse);
IonPulse ion_pulse_from_json(const Json& j);

// Model parameters the schedule was compiled from.
struct IonModel {
  Spectrum spectrum;
  ProbeState state;
  double t = 0.0;
  double b = 0.0;
  int cutoff = 0;
  std::optional<CMatrix> readout_basis;
};

Json to_json(const IonSchedule& schedule, const IonModel& model);
struct LoadedIonSchedule {
  IonSchedule schedule;
  IonModel model;
};
LoadedIonSchedule ion_schedule_from_json(const Json& j);

}  // namespace qsense
