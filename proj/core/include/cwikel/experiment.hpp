#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cwikel/check.hpp"

namespace cwikel {

enum class ExperimentKind {
  Rearrange,
  Cover,
  Approx,
  Spectrum,
  Sweep,
  Counterexample,
  Equivalence,
  BsCount,
};

std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string& name);

/// Input fields are named (f, u, ...) and given either as a path to a .grid
/// file or as "profile:<name>" for a torus profile sampled at `resolution`
/// in dimension `d`.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Rearrange;
  std::string id;
  std::map<std::string, std::string> inputs;
  /// Sweep members, same syntax as inputs.
  std::vector<std::string> profiles;
  int n = 16;
  int N = 16;
  int d = 1;
  double L = 0.0;
  std::vector<int> ns;
  std::vector<int> Ns;
  double p = 1.0;
  std::vector<double> t;
  int resolution = 256;
  int cells_per_unit = 0;
  double tolerance = 1e-3;
  double slack = 0.05;
  int trials = 0;
  std::optional<std::uint64_t> seed;
  std::string output_dir;

  static ExperimentConfig from_json(const std::string& text);
  static ExperimentConfig load(const std::string& path);
  /// Canonical JSON; equal configs give equal strings.
  std::string to_json() const;
  /// ConfigError when a knob is outside its module's preconditions.
  void validate() const;
  bool randomized() const noexcept;
};

enum class PlotKind { None, RatioVsN, Growth, ErrorLaw };

struct Table {
  std::string name;      // file stem
  std::string extension = "csv";
  std::string content;
  PlotKind plot = PlotKind::None;

  std::string filename() const { return name + "." + extension; }
};

struct Report {
  std::string id;
  ExperimentKind kind = ExperimentKind::Rearrange;
  std::string inputs_digest;   // FNV-1a 64, hex
  std::vector<Table> tables;
  std::vector<InequalityCheck> checks;
  std::vector<std::string> warnings;
  double wall_clock_seconds = 0.0;

  bool passed() const noexcept;
  const Table* find_table(const std::string& name) const noexcept;
  std::string to_json() const;
};

std::uint64_t fnv1a64(const std::string& bytes, std::uint64_t seed = 1469598103934665603ull);

Report run(const ExperimentConfig& config);

/// Tables, report.json and plots into `dir` (created if missing).
void write_report(Report& report, const std::string& dir);

/// One SVG per plottable table, named <id>-<table>.svg. Tables without data
/// rows produce a warning instead of a file. Returns the written paths.
std::vector<std::string> emit_plots(Report& report, const std::string& dir);

}  // namespace cwikel
