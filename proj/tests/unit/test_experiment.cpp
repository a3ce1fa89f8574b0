#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "cwikel/error.hpp"
#include "cwikel/experiment.hpp"
#include "cwikel/io.hpp"
#include "cwikel/profiles.hpp"

using namespace cwikel;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("cwikel_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::InvalidInput;
}

}  // namespace

TEST(GridIo, CsvAndBinaryRoundTrip) {
  const auto dir = scratch("grid");
  const auto f = torus_profile("power", 2, 16);
  for (auto enc : {GridEncoding::Csv, GridEncoding::Binary}) {
    const auto path = (dir / (enc == GridEncoding::Csv ? "f.grid" : "fb.grid")).string();
    write_grid(path, f, enc);
    const auto g = read_grid(path);
    ASSERT_TRUE(g.same_grid(f));
    EXPECT_EQ(g.measure(), f.measure());
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_EQ(g[i], f[i]);
  }
  const auto b = box_profile("shell", 1, 3.0, 64);
  write_grid((dir / "b.grid").string(), b);
  const auto bb = read_grid((dir / "b.grid").string());
  EXPECT_EQ(bb.domain(), b.domain());
  EXPECT_EQ(bb.measure(), MeasureKind::Lebesgue);
}

TEST(GridIo, Errors) {
  const auto dir = scratch("grid_err");
  EXPECT_EQ(kind_of([&] { read_grid((dir / "missing.grid").string()); }), ErrorKind::IoError);
  write_text((dir / "bad.grid").string(), "{\"dim\":1,\"domain\":\"torus\",\"resolution\":4}\n1\n2\nx\n4\n");
  EXPECT_EQ(kind_of([&] { read_grid((dir / "bad.grid").string()); }), ErrorKind::IoError);
  write_text((dir / "hdr.grid").string(), "not json\n1\n");
  EXPECT_EQ(kind_of([&] { read_grid((dir / "hdr.grid").string()); }), ErrorKind::IoError);
}

TEST(StepFunctionIo, RoundTrip) {
  const auto g = StepFunction::from_atoms({{0.25, 3.0}, {0.5, 1.0}, {0.125, 0.5}});
  const auto h = parse_step_function_csv(step_function_csv(g));
  ASSERT_EQ(h.pieces(), g.pieces());
  for (std::size_t i = 0; i < g.pieces(); ++i) {
    EXPECT_DOUBLE_EQ(h.ends()[i], g.ends()[i]);
    EXPECT_DOUBLE_EQ(h.values()[i], g.values()[i]);
  }
}

TEST(CoveringIo, RoundTrip) {
  const auto f = torus_profile("two-bump", 1, 256);
  const auto cov = build_equal_j_covering(f, 6);
  const auto back = parse_covering_json(covering_json(cov));
  ASSERT_EQ(back.cubes.size(), cov.cubes.size());
  for (std::size_t k = 0; k < cov.cubes.size(); ++k) {
    EXPECT_DOUBLE_EQ(back.cubes[k].center[0], cov.cubes[k].center[0]);
    EXPECT_DOUBLE_EQ(back.cubes[k].side, cov.cubes[k].side);
    EXPECT_DOUBLE_EQ(back.j_values[k], cov.j_values[k]);
  }
  EXPECT_EQ(back.families, cov.families);
}

TEST(Config, ParsesAndValidates) {
  const auto c = ExperimentConfig::from_json(
      R"({"kind":"sweep","profiles":["profile:power"],"Ns":[4,8],"d":1,"resolution":256})");
  EXPECT_EQ(c.kind, ExperimentKind::Sweep);
  EXPECT_EQ(c.Ns.size(), 2u);
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(ExperimentConfig::from_json(c.to_json()).to_json(), c.to_json());

  EXPECT_EQ(kind_of([] { ExperimentConfig::from_json(R"({"kind":"spectrum","bogus":1})"); }),
            ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { ExperimentConfig::from_json(R"({"kind":"nope"})"); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { ExperimentConfig::from_json("[1,2"); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { ExperimentConfig::from_json(R"({"kind":"cover"})").validate(); }),
            ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { ExperimentConfig::from_json(R"({"kind":"bs-count","trials":3,"N":4})").validate(); }),
            ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] {
              ExperimentConfig::from_json(R"({"kind":"spectrum","inputs":{"f":"profile:constant"},"d":4})").validate();
            }),
            ErrorKind::ConfigError);
}

TEST(Run, SpectrumOfConstant) {
  ExperimentConfig c;
  c.kind = ExperimentKind::Spectrum;
  c.inputs["f"] = "profile:constant";
  c.d = 1;
  c.resolution = 16;
  c.N = 2;
  const auto r = run(c);
  ASSERT_NE(r.find_table("spectrum"), nullptr);
  EXPECT_NE(r.find_table("spectrum")->content.find("4,0.4472135955,2.2360679775"), std::string::npos);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.inputs_digest.size(), 16u);
}

TEST(Run, CoverSingleBudget) {
  ExperimentConfig c;
  c.kind = ExperimentKind::Cover;
  c.inputs["f"] = "profile:constant";
  c.d = 2;
  c.resolution = 16;
  c.n = 1;
  const auto r = run(c);
  EXPECT_TRUE(r.passed());
  const auto cov = parse_covering_json(r.find_table("covering")->content);
  EXPECT_EQ(cov.cubes.size(), 1u);
  for (const auto& check : r.checks) {
    EXPECT_FALSE(check.anchor.empty());
  }
}

TEST(Run, DeterministicTables) {
  ExperimentConfig c;
  c.kind = ExperimentKind::BsCount;
  c.d = 1;
  c.resolution = 64;
  c.N = 6;
  c.trials = 4;
  c.seed = 99;
  const auto a = run(c);
  const auto b = run(c);
  ASSERT_EQ(a.tables.size(), b.tables.size());
  for (std::size_t i = 0; i < a.tables.size(); ++i) EXPECT_EQ(a.tables[i].content, b.tables[i].content);
  EXPECT_EQ(a.inputs_digest, b.inputs_digest);
  c.seed = 100;
  EXPECT_NE(run(c).inputs_digest, a.inputs_digest);
}

TEST(Run, DigestCoversFileInputs) {
  const auto dir = scratch("digest");
  const auto path = (dir / "f.grid").string();
  write_grid(path, torus_profile("gaussian", 1, 32));
  ExperimentConfig c;
  c.kind = ExperimentKind::Rearrange;
  c.inputs["f"] = path;
  const auto first = run(c).inputs_digest;
  write_grid(path, torus_profile("two-bump", 1, 32));
  EXPECT_NE(run(c).inputs_digest, first);
}

TEST(Run, FailingCheckIsReported) {
  ExperimentConfig c;
  c.kind = ExperimentKind::Counterexample;
  c.d = 1;
  c.ns = {2, 3};
  c.N = 16;
  c.cells_per_unit = 16;
  const auto r = run(c);
  // Two sizes cannot reach the 1.2 growth factor at this cutoff.
  EXPECT_FALSE(r.passed());
  EXPECT_NE(r.to_json().find("\"verdict\": false"), std::string::npos);
}

TEST(Plots, GrowthReportProducesScatterWithFit) {
  const auto dir = scratch("plots_growth");
  ExperimentConfig c;
  c.kind = ExperimentKind::Counterexample;
  c.id = "growth-demo";
  c.d = 1;
  c.ns = {2, 4};
  c.N = 16;
  c.cells_per_unit = 16;
  auto r = run(c);
  const auto files = emit_plots(r, dir.string());
  ASSERT_EQ(files.size(), 1u);
  EXPECT_EQ(fs::path(files[0]).filename().string(), "growth-demo-growth.svg");
  const auto svg = read_text(files[0]);
  EXPECT_NE(svg.find("<circle"), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  EXPECT_NE(svg.find("sqrt(log n)"), std::string::npos);
}

TEST(Plots, EmptySweepWarnsWithoutFile) {
  const auto dir = scratch("plots_empty");
  Report r;
  r.id = "empty";
  r.tables.push_back({"sweep", "csv", "f_id,N,ratio\n", PlotKind::RatioVsN});
  EXPECT_TRUE(emit_plots(r, (dir / "out").string()).empty());
  EXPECT_EQ(r.warnings.size(), 1u);
  EXPECT_FALSE(fs::exists(dir / "out" / "empty-sweep.svg"));
}

TEST(Plots, TwoSweepsTwoFiles) {
  const auto dir = scratch("plots_two");
  Report r;
  r.id = "pair";
  r.tables.push_back({"sweep-a", "csv", "f_id,N,ratio\npower,8,1.5\npower,16,1.6\n", PlotKind::RatioVsN});
  r.tables.push_back({"sweep-b", "csv", "f_id,N,ratio\nlog,8,1.1\nlog,16,1.2\n", PlotKind::RatioVsN});
  const auto files = emit_plots(r, dir.string());
  ASSERT_EQ(files.size(), 2u);
  EXPECT_EQ(fs::path(files[0]).filename().string(), "pair-sweep-a.svg");
  EXPECT_EQ(fs::path(files[1]).filename().string(), "pair-sweep-b.svg");
  EXPECT_EQ(read_text(files[0]), read_text(emit_plots(r, dir.string())[0]));
}

TEST(Report, WriteReportCreatesFiles) {
  const auto dir = scratch("report");
  ExperimentConfig c;
  c.kind = ExperimentKind::Approx;
  c.inputs = {{"f", "profile:two-bump"}, {"u", "profile:lacunary"}};
  c.d = 1;
  c.resolution = 256;
  c.ns = {4, 8};
  auto r = run(c);
  write_report(r, dir.string());
  EXPECT_TRUE(fs::exists(dir / "error-law.csv"));
  EXPECT_TRUE(fs::exists(dir / "operator.json"));
  EXPECT_TRUE(fs::exists(dir / "report.json"));
  EXPECT_TRUE(fs::exists(dir / "approx-error-law.svg"));
}
