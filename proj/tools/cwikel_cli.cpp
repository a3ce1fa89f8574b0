#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cwikel/error.hpp"
#include "cwikel/experiment.hpp"
#include "cwikel/io.hpp"
#include "cwikel/profiles.hpp"

namespace {

using cwikel::ExperimentConfig;
using cwikel::ExperimentKind;

// Where each subcommand writes its main table, keyed by the table name.
struct Outputs {
  std::vector<std::pair<std::string, std::string>> files;  // table name -> path
  std::string plots_dir;
  std::string report_dir;
};

void print_report(const cwikel::Report& r) {
  std::printf("%s [%s] digest %s, %.3f s\n", r.id.c_str(), cwikel::to_string(r.kind).c_str(),
              r.inputs_digest.c_str(), r.wall_clock_seconds);
  for (const auto& c : r.checks)
    std::printf("  %s  %s  lhs=%.10g rhs=%.10g slack=%g\n", c.verdict ? "PASS" : "FAIL", c.anchor.c_str(),
                c.lhs, c.rhs, c.slack);
  for (const auto& w : r.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
}

int execute(const ExperimentConfig& config, const Outputs& out) {
  cwikel::Report report = cwikel::run(config);
  for (const auto& [name, path] : out.files) {
    if (path.empty()) continue;
    const cwikel::Table* t = report.find_table(name);
    if (t == nullptr) continue;
    if (path == "-")
      std::cout << t->content;
    else
      cwikel::write_text(path, t->content);
  }
  if (!out.plots_dir.empty()) cwikel::emit_plots(report, out.plots_dir);
  const std::string dir = !out.report_dir.empty() ? out.report_dir : config.output_dir;
  if (!dir.empty()) cwikel::write_report(report, dir);
  print_report(report);
  return report.passed() ? 0 : 1;
}

// Shared knobs for inputs given as profile:<name> or box:<name>.
void add_field_knobs(CLI::App* app, ExperimentConfig& c) {
  app->add_option("--d", c.d, "dimension for profile inputs");
  app->add_option("--resolution", c.resolution, "cells per axis for profile inputs");
  app->add_option("--L", c.L, "box half width for box inputs");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cwikel estimate experiments on tori and boxes"};
  app.require_subcommand(1);

  ExperimentConfig c;
  Outputs out;
  std::string f_path, u_path, config_path;
  std::string out_path, plots_dir, operator_path;
  std::uint64_t seed = 0;
  std::string profile, box_profile;
  bool binary = false;

  auto* rearrange = app.add_subcommand("rearrange", "decreasing rearrangement and norms of a grid");
  rearrange->add_option("--input,--f", f_path, "grid file or profile:<name>")->required();
  rearrange->add_option("--out", out_path, "rearrangement CSV (- for stdout)");
  add_field_knobs(rearrange, c);

  auto* cover = app.add_subcommand("cover", "equal-J covering of the torus");
  cover->add_option("--input,--f", f_path, "grid file or profile:<name>")->required();
  cover->add_option("--n", c.n, "number of J budgets")->required();
  cover->add_option("--tolerance", c.tolerance, "relative J tolerance");
  cover->add_option("--out", out_path, "covering JSON");
  add_field_knobs(cover, c);

  auto* approx = app.add_subcommand("approx", "finite-rank approximation error");
  approx->add_option("--input,--f", f_path, "weight grid")->required();
  approx->add_option("--u", u_path, "function grid")->required();
  approx->add_option("--n", c.n, "single n");
  approx->add_option("--ns", c.ns, "list of n")->delimiter(',');
  approx->add_option("--tolerance", c.tolerance, "relative J tolerance");
  approx->add_option("--report", out_path, "error CSV");
  approx->add_option("--operator", operator_path, "operator JSON for the largest n");
  add_field_knobs(approx, c);

  auto* spectrum = app.add_subcommand("spectrum", "singular values of the Cwikel matrix");
  spectrum->add_option("--f,--input", f_path, "grid file or profile:<name>")->required();
  spectrum->add_option("--N", c.N, "Fourier cutoff")->required();
  spectrum->add_option("--p", c.p, "weak Schatten exponent");
  spectrum->add_option("--out", out_path, "spectrum CSV");
  add_field_knobs(spectrum, c);

  auto* sweep = app.add_subcommand("sweep", "Cwikel ratio against N");
  sweep->add_option("--profiles", c.profiles, "grid files or profile:<name>")->delimiter(',')->required();
  sweep->add_option("--Ns", c.Ns, "cutoffs")->delimiter(',')->required();
  sweep->add_option("--out", out_path, "sweep CSV");
  sweep->add_option("--plots", plots_dir, "SVG directory");
  add_field_knobs(sweep, c);

  auto* counter = app.add_subcommand("counterexample", "growth of the translated-ball family");
  counter->add_option("--d", c.d, "dimension");
  counter->add_option("--ns", c.ns, "family sizes")->delimiter(',')->required();
  counter->add_option("--N", c.N, "Fourier cutoff")->required();
  counter->add_option("--L", c.L, "box half width (default max n + 1)");
  counter->add_option("--cells-per-unit", c.cells_per_unit, "grid cells per unit length");
  counter->add_option("--out", out_path, "growth CSV");
  counter->add_option("--plots", plots_dir, "SVG directory");

  auto* equivalence = app.add_subcommand("equivalence", "inversion split norm against the R^d norm");
  equivalence->add_option("--f,--input", f_path, "box grid or box:<name>")->required();
  equivalence->add_option("--slack", c.slack, "relative quadrature slack");
  equivalence->add_option("--out", out_path, "result JSON");
  add_field_knobs(equivalence, c);

  auto* bs = app.add_subcommand("bs-count", "Birman-Schwinger eigenvalue counts");
  bs->add_option("--f,--input", f_path, "grid file; omit for random instances");
  bs->add_option("--t", c.t, "coupling values")->delimiter(',');
  bs->add_option("--N", c.N, "Fourier cutoff (upper bound for random instances)");
  bs->add_option("--trials", c.trials, "random instances");
  auto* seed_opt = bs->add_option("--seed", seed, "RNG seed");
  bs->add_option("--out", out_path, "counts CSV");
  add_field_knobs(bs, c);

  auto* report = app.add_subcommand("report", "run a JSON experiment config");
  report->add_option("--config", config_path, "config file")->required()->check(CLI::ExistingFile);
  report->add_option("--out-dir", out.report_dir, "output directory (overrides the config)");

  auto* generate = app.add_subcommand("generate", "write a named profile as a grid file");
  generate->add_option("--profile", profile, "torus profile name");
  generate->add_option("--box-profile", box_profile, "box profile name (needs --L)");
  generate->add_option("--out", out_path, "grid file")->required();
  generate->add_flag("--binary", binary, "binary payload");
  add_field_knobs(generate, c);

  for (auto* sub : {rearrange, cover, approx, spectrum, sweep, counter, equivalence, bs})
    sub->add_option("--report-dir", out.report_dir, "write all tables, plots and report.json here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (report->parsed()) {
      return execute(ExperimentConfig::load(config_path), out);
    }
    if (generate->parsed()) {
      if (profile.empty() == box_profile.empty())
        throw cwikel::Error(cwikel::ErrorKind::ConfigError, "give exactly one of --profile, --box-profile");
      const auto f = profile.empty() ? cwikel::box_profile(box_profile, c.d, c.L, c.resolution)
                                     : cwikel::torus_profile(profile, c.d, c.resolution);
      cwikel::write_grid(out_path, f, binary ? cwikel::GridEncoding::Binary : cwikel::GridEncoding::Csv);
      return 0;
    }

    if (!f_path.empty()) c.inputs["f"] = f_path;
    if (!u_path.empty()) c.inputs["u"] = u_path;
    out.plots_dir = plots_dir;
    if (rearrange->parsed()) {
      c.kind = ExperimentKind::Rearrange;
      out.files = {{"rearrangement", out_path.empty() ? "-" : out_path}};
    } else if (cover->parsed()) {
      c.kind = ExperimentKind::Cover;
      out.files = {{"covering", out_path}};
    } else if (approx->parsed()) {
      c.kind = ExperimentKind::Approx;
      out.files = {{"error-law", out_path.empty() ? "-" : out_path}, {"operator", operator_path}};
    } else if (spectrum->parsed()) {
      c.kind = ExperimentKind::Spectrum;
      out.files = {{"spectrum", out_path.empty() ? "-" : out_path}};
    } else if (sweep->parsed()) {
      c.kind = ExperimentKind::Sweep;
      out.files = {{"sweep", out_path.empty() ? "-" : out_path}};
    } else if (counter->parsed()) {
      c.kind = ExperimentKind::Counterexample;
      out.files = {{"growth", out_path.empty() ? "-" : out_path}};
    } else if (equivalence->parsed()) {
      c.kind = ExperimentKind::Equivalence;
      out.files = {{"equivalence", out_path.empty() ? "-" : out_path}};
    } else if (bs->parsed()) {
      c.kind = ExperimentKind::BsCount;
      if (seed_opt->count() > 0) c.seed = seed;
      out.files = {{"counts", out_path.empty() ? "-" : out_path}};
    }
    c.id = cwikel::to_string(c.kind);
    return execute(c, out);
  } catch (const cwikel::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
