#include "cwikel/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>

#include <json.hpp>

#include "cwikel/covering.hpp"
#include "cwikel/error.hpp"
#include "cwikel/inversion.hpp"
#include "cwikel/io.hpp"
#include "cwikel/orlicz.hpp"
#include "cwikel/parallel.hpp"
#include "cwikel/profiles.hpp"
#include "cwikel/rank_approx.hpp"
#include "cwikel/spectral.hpp"
#include "svg.hpp"

namespace cwikel {

namespace {

using nlohmann::json;

constexpr std::pair<ExperimentKind, const char*> kKindNames[] = {
    {ExperimentKind::Rearrange, "rearrange"},
    {ExperimentKind::Cover, "cover"},
    {ExperimentKind::Approx, "approx"},
    {ExperimentKind::Spectrum, "spectrum"},
    {ExperimentKind::Sweep, "sweep"},
    {ExperimentKind::Counterexample, "counterexample"},
    {ExperimentKind::Equivalence, "equivalence"},
    {ExperimentKind::BsCount, "bs-count"},
};

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::ConfigError, what); }

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

const std::string& require_input(const ExperimentConfig& c, const std::string& name) {
  auto it = c.inputs.find(name);
  if (it == c.inputs.end()) config_error("missing input '" + name + "'");
  return it->second;
}

SampledFunction load_field(const std::string& spec, const ExperimentConfig& c) {
  if (spec.rfind("profile:", 0) == 0) return torus_profile(spec.substr(8), c.d, c.resolution);
  if (spec.rfind("box:", 0) == 0) {
    if (!(c.L > 0.0)) config_error("box inputs need a positive L");
    return box_profile(spec.substr(4), c.d, c.L, c.resolution);
  }
  return read_grid(spec);
}

std::string field_id(const std::string& spec) {
  if (spec.rfind("profile:", 0) == 0) return spec.substr(8);
  if (spec.rfind("box:", 0) == 0) return spec.substr(4);
  return std::filesystem::path(spec).stem().string();
}

std::string summary_csv(const std::vector<std::pair<std::string, double>>& rows) {
  std::string out = "quantity,value\n";
  for (const auto& [k, v] : rows) out += k + "," + format_number(v) + "\n";
  return out;
}

double abs_integral(const SampledFunction& f) {
  double s = 0.0;
  for (double v : f.values()) s += std::abs(v);
  return s * f.cell_measure();
}

// ---------------------------------------------------------------------------

void run_rearrange(const ExperimentConfig& c, Report& r) {
  const SampledFunction f = load_field(require_input(c, "f"), c);
  const StepFunction mu = decreasing_rearrangement(f);
  r.tables.push_back({"rearrangement", "csv", step_function_csv(mu), PlotKind::None});
  const double llogl = mu.is_zero() ? 0.0 : orlicz_norm(mu);
  r.tables.push_back({"norms", "csv",
                      summary_csv({{"support", mu.support()},
                                   {"integral", mu.integral()},
                                   {"llogl", llogl},
                                   {"exp_l2", mu.is_zero() ? 0.0 : exp_l2_norm(mu)},
                                   {"marcinkiewicz", marcinkiewicz_psi_norm(mu)},
                                   {"lambda1", lambda1_norm(mu)}}),
                      PlotKind::None});
  const double direct = abs_integral(f);
  r.checks.push_back(InequalityCheck::near("equimeasurability: int mu(f) = int |f|", mu.integral(),
                                           direct, 1e-9 * std::max(1.0, direct)));
}

// First-hit partition of the torus by the cubes, by cell center.
std::vector<std::vector<bool>> first_hit_masks(const SampledFunction& f,
                                               const std::vector<TorusCube>& cubes) {
  std::vector<std::vector<bool>> masks(cubes.size(), std::vector<bool>(f.size(), false));
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Point p = normalized_coordinates(f, i);
    for (std::size_t k = 0; k < cubes.size(); ++k)
      if (cubes[k].contains(p)) {
        masks[k][i] = true;
        break;
      }
  }
  return masks;
}

void run_cover(const ExperimentConfig& c, Report& r) {
  const SampledFunction f = load_field(require_input(c, "f"), c);
  CoveringOptions opts;
  opts.tolerance = c.tolerance;
  const Covering cov = build_equal_j_covering(f, c.n, opts);
  const CoveringReport rep = verify_covering(f, cov, c.n);
  r.tables.push_back({"covering", "json", covering_json(cov), PlotKind::None});

  const double norm = orlicz_norm(decreasing_rearrangement(f));
  double delta_sum = 0.0;
  for (const auto& mask : first_hit_masks(f, cov.cubes)) delta_sum += j_functional(f, mask);
  std::size_t saturated = 0;
  for (bool s : cov.saturated) saturated += s ? 1 : 0;

  r.tables.push_back({"summary", "csv",
                      summary_csv({{"n", static_cast<double>(c.n)},
                                   {"target", cov.target},
                                   {"cubes", static_cast<double>(rep.cube_count)},
                                   {"cubes_per_n", rep.cubes_per_n},
                                   {"saturated", static_cast<double>(saturated)},
                                   {"coverage", rep.coverage},
                                   {"max_multiplicity", static_cast<double>(rep.max_multiplicity)},
                                   {"max_relative_deviation", rep.max_relative_deviation},
                                   {"families", static_cast<double>(rep.family_count)},
                                   {"sum_j_delta", delta_sum},
                                   {"llogl_norm", norm}}),
                      PlotKind::None});

  r.checks.push_back(InequalityCheck::near("covering: the cubes cover the torus",
                                           rep.complete ? 1.0 : 0.0, 1.0, 0.0));
  r.checks.push_back(InequalityCheck::at_most("covering: |J(Pi_k) - ||f||/n| <= tol ||f||/n",
                                              rep.max_relative_deviation, c.tolerance));
  r.checks.push_back(InequalityCheck::near("Besicovitch selection: families pairwise disjoint",
                                           rep.families_disjoint ? 1.0 : 0.0, 1.0, 0.0));
  r.checks.push_back(InequalityCheck::at_most("J subadditivity: sum_k J(Delta_k) <= 4 ||f||_{L log L}",
                                              delta_sum, 4.0 * norm));
}

void run_approx(const ExperimentConfig& c, Report& r) {
  const SampledFunction f = load_field(require_input(c, "f"), c);
  const SampledFunction u = load_field(require_input(c, "u"), c);
  if (!f.same_grid(u)) throw Error(ErrorKind::GridMismatch, "f and u live on different grids");
  const std::vector<int> ns = c.ns.empty() ? std::vector<int>{c.n} : c.ns;
  const double norm = orlicz_norm(decreasing_rearrangement(f));
  const double hom = hom_seminorm(u);
  double umax = 0.0;
  for (double v : u.values()) umax = std::max(umax, std::abs(v));

  struct Row {
    std::size_t rank = 0;
    double error = 0.0;
    double idempotence = 0.0;
    std::string operator_json;
  };
  std::vector<Row> rows(ns.size());
  CoveringOptions opts;
  opts.tolerance = c.tolerance;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const FiniteRankOperator k = build_Kn(f, ns[i], opts);
    rows[i].rank = k.rank_bound();
    rows[i].error = weighted_error(f, u, k);
    rows[i].idempotence = cellwise_idempotence_defect(k, u);
    if (i + 1 == ns.size()) rows[i].operator_json = finite_rank_operator_json(k);
  }

  std::string csv = "n,rank,error,error_times_n,normalized\n";
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  double worst_idem = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double en = ns[i] * rows[i].error;
    const double normalized = en / (norm * hom * hom);
    lo = std::min(lo, normalized);
    hi = std::max(hi, normalized);
    worst_idem = std::max(worst_idem, rows[i].idempotence);
    csv += std::to_string(ns[i]) + "," + std::to_string(rows[i].rank) + "," +
           format_number(rows[i].error) + "," + format_number(en) + "," + format_number(normalized) + "\n";
  }
  r.tables.push_back({"error-law", "csv", csv, PlotKind::ErrorLaw});
  r.tables.push_back({"operator", "json", rows.back().operator_json, PlotKind::None});
  r.tables.push_back({"summary", "csv",
                      summary_csv({{"llogl_norm", norm}, {"hom_seminorm", hom},
                                   {"normalized_max", hi}, {"normalized_min", lo}}),
                      PlotKind::None});

  r.checks.push_back(InequalityCheck::at_most("cellwise projection: P_k P_k u = P_k u", worst_idem,
                                              1e-10 * std::max(1.0, umax)));
  if (ns.size() > 1)
    r.checks.push_back(InequalityCheck::at_most(
        "approximation law: max/min of n ||u - K_n u||^2_f / (||f|| ||u||^2_hom) <= 3", hi / lo, 3.0));
}

void run_spectrum(const ExperimentConfig& c, Report& r) {
  const SampledFunction f = load_field(require_input(c, "f"), c);
  const CwikelMatrix t = assemble_cwikel(f, c.N);
  const std::vector<double> mu = singular_values(t);
  const double quasi = weak_quasinorm(mu, c.p);
  const StepFunction rf = decreasing_rearrangement(f);
  const double norm = rf.is_zero() ? 0.0 : orlicz_norm(rf);
  r.tables.push_back({"spectrum", "csv", spectrum_csv(mu), PlotKind::None});
  r.tables.push_back({"summary", "csv",
                      summary_csv({{"N", static_cast<double>(c.N)},
                                   {"size", static_cast<double>(t.size())},
                                   {"p", c.p},
                                   {"weak_quasinorm", quasi},
                                   {"llogl_norm", norm},
                                   {"ratio", norm > 0.0 ? quasi / norm : 0.0}}),
                      PlotKind::None});

  const double hdefect = (t.entries - t.entries.adjoint()).cwiseAbs().maxCoeff();
  const double scale = mu.empty() ? 1.0 : std::max(mu.front(), 1e-300);
  r.checks.push_back(InequalityCheck::at_most("real f gives a self-adjoint T", hdefect, 1e-12 * scale));
  bool nonnegative = true;
  for (double v : f.values()) nonnegative = nonnegative && v >= 0.0;
  if (nonnegative) {
    const Eigen::VectorXd ev = hermitian_eigenvalues(t.entries);
    r.checks.push_back(InequalityCheck::at_most("f >= 0 gives T >= 0", -ev(0), 1e-10 * scale));
  }
}

void run_sweep(const ExperimentConfig& c, Report& r) {
  std::vector<SampledFunction> fields;
  std::vector<std::string> ids;
  std::vector<double> norms;
  for (const auto& spec : c.profiles) {
    fields.push_back(load_field(spec, c));
    ids.push_back(field_id(spec));
    norms.push_back(orlicz_norm(decreasing_rearrangement(fields.back())));
  }
  const std::size_t nN = c.Ns.size();
  std::vector<double> ratio(fields.size() * nN, 0.0);
  parallel_for(ratio.size(), [&](std::size_t k) {
    const std::size_t i = k / nN;
    const int N = c.Ns[k % nN];
    ratio[k] = weak_quasinorm(singular_values(assemble_cwikel(fields[i], N)), 1.0) / norms[i];
  });

  std::string csv = "f_id,N,ratio\n";
  for (std::size_t i = 0; i < fields.size(); ++i)
    for (std::size_t j = 0; j < nN; ++j)
      csv += ids[i] + "," + std::to_string(c.Ns[j]) + "," + format_number(ratio[i * nN + j]) + "\n";
  r.tables.push_back({"sweep", "csv", csv, PlotKind::RatioVsN});

  double worst = 0.0;
  for (double v : ratio) worst = std::max(worst, v);
  r.tables.push_back({"summary", "csv", summary_csv({{"max_ratio", worst}}), PlotKind::None});
  r.checks.push_back(InequalityCheck::less_than(
      "Cwikel estimate: sup_f ||T_N||_{1,inf} / ||f||_{L log L} < inf", worst,
      std::numeric_limits<double>::infinity()));
  if (nN >= 2) {
    // Ns are kept in config order; compare the two largest.
    std::vector<std::size_t> order(nN);
    for (std::size_t j = 0; j < nN; ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return c.Ns[a] < c.Ns[b]; });
    const std::size_t a = order[nN - 2];
    const std::size_t b = order[nN - 1];
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const double prev = ratio[i * nN + a];
      const double last = ratio[i * nN + b];
      r.checks.push_back(InequalityCheck::less_than(
          "Cwikel ratio stability (" + ids[i] + "): relative change between the two largest N < 0.2",
          std::abs(last - prev) / prev, 0.2));
    }
  }
}

void run_counterexample(const ExperimentConfig& c, Report& r) {
  const int nmax = *std::max_element(c.ns.begin(), c.ns.end());
  const double L = c.L > 0.0 ? c.L : nmax + 1.0;
  const int q = c.cells_per_unit > 0 ? c.cells_per_unit : (c.d == 1 ? 64 : 16);
  const GrowthRecord rec = counterexample_growth(c.ns, c.d, c.N, L, q);
  r.tables.push_back({"growth", "csv", growth_csv(rec), PlotKind::Growth});
  std::string norms = "n,llogl_norm\n";
  for (std::size_t i = 0; i < rec.ns.size(); ++i)
    norms += std::to_string(rec.ns[i]) + "," + format_number(rec.orlicz_norms[i]) + "\n";
  r.tables.push_back({"norms", "csv", norms, PlotKind::None});

  double worst_step = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < rec.q.size(); ++i) worst_step = std::max(worst_step, rec.q[i - 1] - rec.q[i]);
  const auto [qmin, qmax] = std::minmax_element(rec.q.begin(), rec.q.end());
  const auto [nmin, nmx] = std::minmax_element(rec.orlicz_norms.begin(), rec.orlicz_norms.end());
  r.tables.push_back({"summary", "csv",
                      summary_csv({{"L", L},
                                   {"cells_per_unit", static_cast<double>(q)},
                                   {"slope", rec.slope},
                                   {"intercept", rec.intercept},
                                   {"q_ratio", *qmax / *qmin},
                                   {"norm_spread", *nmx / *nmin - 1.0}}),
                      PlotKind::None});

  if (rec.q.size() > 1)
    r.checks.push_back(InequalityCheck::less_than("growth: q_n strictly increasing in n", worst_step, 0.0));
  r.checks.push_back(InequalityCheck::less_than("growth: OLS slope of q_n against sqrt(log n) > 0",
                                                0.0, rec.slope));
  r.checks.push_back(InequalityCheck::less_than("growth: q_max / q_min > 1.2", 1.2, *qmax / *qmin));
  r.checks.push_back(InequalityCheck::at_most("growth: ||f_n||_{L log L} constant to 1%",
                                              *nmx / *nmin - 1.0, 0.01));
}

void run_equivalence(const ExperimentConfig& c, Report& r) {
  const SampledFunction f = load_field(require_input(c, "f"), c);
  const double split = split_norm(f);
  const double rhs = rd_rhs_norm(f);
  const ExteriorBounds a = exterior_bounds(f, c.slack);
  json out = {{"split_norm", split},
              {"rd_norm", rhs},
              {"ratio", rhs > 0.0 ? split / rhs : 0.0},
              {"f_exterior_norm", a.f_exterior_norm},
              {"log_integral", a.log_integral},
              {"vf_ball_norm", a.vf_ball_norm},
              {"upper_lhs", a.upper_lhs},
              {"upper_rhs", a.upper_rhs},
              {"lower_lhs", a.lower_lhs},
              {"lower_rhs", a.lower_rhs},
              {"log_constant", a.log_constant},
              {"slack", a.slack}};
  r.tables.push_back({"equivalence", "json", out.dump(2) + "\n", PlotKind::None});
  const int d = f.dim();
  r.checks.push_back(InequalityCheck::at_most(
      "exterior upper bound: ||Vf||_{L_M(B)} <= (2d+2)(||f||_{L_M} + int |f| log(1+|s|)), d=" + std::to_string(d),
      a.upper_lhs, a.upper_rhs, c.slack));
  r.checks.push_back(InequalityCheck::at_most("exterior lower bound: ||f||_{L_M} <= ||Vf||_{L_M(B)}",
                                              a.lower_lhs, a.lower_rhs, c.slack));
}

SampledFunction random_bumps(int dim, int resolution, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 3);
  std::uniform_real_distribution<double> pos(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> height(0.2, 2.0);
  std::uniform_real_distribution<double> width(1.0, 6.0);
  struct Bump {
    Point c{};
    double h = 1.0;
    double w = 1.0;
  };
  std::vector<Bump> bumps(static_cast<std::size_t>(count(rng)));
  for (auto& b : bumps) {
    for (int a = 0; a < dim; ++a) b.c[a] = pos(rng);
    b.h = height(rng);
    b.w = width(rng);
  }
  return SampledFunction::torus(dim, resolution, [&](const Point& x) {
    double s = 0.0;
    for (const auto& b : bumps) {
      double r2 = 0.0;
      for (int a = 0; a < dim; ++a) {
        double y = std::remainder(x[a] - b.c[a], 2.0 * std::numbers::pi);
        r2 += y * y;
      }
      s += b.h * std::exp(-b.w * r2);
    }
    return s;
  });
}

void run_bs_count(const ExperimentConfig& c, Report& r) {
  struct Case {
    SampledFunction f;
    int N;
    double t;
  };
  std::vector<Case> cases;
  if (c.inputs.count("f")) {
    const SampledFunction f = load_field(c.inputs.at("f"), c);
    for (double t : c.t) cases.push_back({f, c.N, t});
  } else {
    std::mt19937_64 rng(*c.seed);
    std::uniform_int_distribution<int> cutoff(2, std::min(c.N, 8));
    std::uniform_real_distribution<double> logt(std::log(0.02), std::log(1.0));
    for (int k = 0; k < c.trials; ++k) {
      SampledFunction f = random_bumps(c.d, c.resolution, rng);
      const int N = cutoff(rng);
      const double t = std::exp(logt(rng));
      cases.push_back({std::move(f), N, t});
    }
  }
  std::vector<BirmanSchwingerCounts> counts(cases.size());
  parallel_for(cases.size(), [&](std::size_t i) {
    counts[i] = birman_schwinger_count(cases[i].f, cases[i].t, cases[i].N);
  });
  std::string csv = "case,d,N,t,cwikel_count,schrodinger_count\n";
  for (std::size_t i = 0; i < cases.size(); ++i) {
    csv += std::to_string(i) + "," + std::to_string(cases[i].f.dim()) + "," + std::to_string(cases[i].N) +
           "," + format_number(cases[i].t) + "," + std::to_string(counts[i].cwikel) + "," +
           std::to_string(counts[i].schrodinger) + "\n";
    r.checks.push_back(InequalityCheck::near(
        "Birman-Schwinger: #{eig(T/t) > 1} = #{eig(H_t) < 0}, case " + std::to_string(i),
        static_cast<double>(counts[i].cwikel), static_cast<double>(counts[i].schrodinger), 0.0));
  }
  r.tables.push_back({"counts", "csv", csv, PlotKind::None});
}

// ---------------------------------------------------------------------------

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    return -1;
  }
};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  return out;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      t.header = split_csv_line(line);
      first = false;
    } else {
      t.rows.push_back(split_csv_line(line));
    }
  }
  return t;
}

double cell_value(const std::vector<std::string>& row, int col) {
  if (col < 0 || static_cast<std::size_t>(col) >= row.size()) return std::nan("");
  return std::strtod(row[static_cast<std::size_t>(col)].c_str(), nullptr);
}

detail::PlotSpec plot_spec(const Report& report, const Table& table, const CsvTable& csv) {
  detail::PlotSpec spec;
  switch (table.plot) {
    case PlotKind::RatioVsN: {
      spec.title = report.id + ": Cwikel ratio against N";
      spec.x_label = "N";
      spec.y_label = "||T_N||_{1,inf} / ||f||_{L log L}";
      const int fc = csv.column("f_id");
      const int nc = csv.column("N");
      const int rc = csv.column("ratio");
      for (const auto& row : csv.rows) {
        const std::string id = fc >= 0 ? row[static_cast<std::size_t>(fc)] : "f";
        auto it = std::find_if(spec.series.begin(), spec.series.end(),
                               [&](const detail::Series& s) { return s.label == id; });
        if (it == spec.series.end()) {
          spec.series.push_back({id, {}, {}, true, true});
          it = spec.series.end() - 1;
        }
        it->x.push_back(cell_value(row, nc));
        it->y.push_back(cell_value(row, rc));
      }
      break;
    }
    case PlotKind::Growth: {
      spec.title = report.id + ": q_n against sqrt(log n)";
      spec.x_label = "sqrt(log n)";
      spec.y_label = "q_n";
      detail::Series pts{"q_n", {}, {}, false, true};
      detail::Series fit{"OLS fit", {}, {}, true, false};
      const int nc = csv.column("n");
      const int qc = csv.column("q_n");
      const int fc = csv.column("fit");
      for (const auto& row : csv.rows) {
        const double x = std::sqrt(std::log(cell_value(row, nc)));
        pts.x.push_back(x);
        pts.y.push_back(cell_value(row, qc));
        fit.x.push_back(x);
        fit.y.push_back(cell_value(row, fc));
      }
      spec.series = {pts, fit};
      break;
    }
    case PlotKind::ErrorLaw: {
      spec.title = report.id + ": n times the weighted error";
      spec.x_label = "n";
      spec.y_label = "n ||u - K_n u||^2_f";
      detail::Series s{"error * n", {}, {}, true, true};
      const int nc = csv.column("n");
      const int ec = csv.column("error_times_n");
      for (const auto& row : csv.rows) {
        s.x.push_back(cell_value(row, nc));
        s.y.push_back(cell_value(row, ec));
      }
      spec.series = {s};
      break;
    }
    case PlotKind::None:
      break;
  }
  return spec;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create '" + dir + "': " + ec.message());
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return name;
  return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  for (const auto& [k, n] : kKindNames)
    if (name == n) return k;
  config_error("unknown experiment kind '" + name + "'");
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    config_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) config_error("config must be a JSON object");
  static const char* known[] = {"kind", "id", "inputs", "profiles", "n", "N", "d", "L", "ns", "Ns", "p", "t",
                                "resolution", "cells_per_unit", "tolerance", "slack", "trials", "seed",
                                "output_dir"};
  for (const auto& [key, value] : j.items())
    if (std::find(std::begin(known), std::end(known), key) == std::end(known))
      config_error("unknown config key '" + key + "'");

  ExperimentConfig c;
  try {
    c.kind = parse_experiment_kind(j.at("kind").get<std::string>());
    c.id = j.value("id", to_string(c.kind));
    if (j.contains("inputs")) c.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
    if (j.contains("profiles")) c.profiles = j.at("profiles").get<std::vector<std::string>>();
    c.n = j.value("n", c.n);
    c.N = j.value("N", c.N);
    c.d = j.value("d", c.d);
    c.L = j.value("L", c.L);
    if (j.contains("ns")) c.ns = j.at("ns").get<std::vector<int>>();
    if (j.contains("Ns")) c.Ns = j.at("Ns").get<std::vector<int>>();
    c.p = j.value("p", c.p);
    if (j.contains("t")) {
      if (j.at("t").is_array())
        c.t = j.at("t").get<std::vector<double>>();
      else
        c.t = {j.at("t").get<double>()};
    }
    c.resolution = j.value("resolution", c.resolution);
    c.cells_per_unit = j.value("cells_per_unit", c.cells_per_unit);
    c.tolerance = j.value("tolerance", c.tolerance);
    c.slack = j.value("slack", c.slack);
    c.trials = j.value("trials", c.trials);
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    c.output_dir = j.value("output_dir", std::string());
  } catch (const json::exception& e) {
    config_error(std::string("bad config field: ") + e.what());
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) { return from_json(read_text(path)); }

std::string ExperimentConfig::to_json() const {
  json j = {{"kind", cwikel::to_string(kind)},
            {"id", id},
            {"inputs", inputs},
            {"profiles", profiles},
            {"n", n},
            {"N", N},
            {"d", d},
            {"L", L},
            {"ns", ns},
            {"Ns", Ns},
            {"p", p},
            {"t", t},
            {"resolution", resolution},
            {"cells_per_unit", cells_per_unit},
            {"tolerance", tolerance},
            {"slack", slack},
            {"trials", trials}};
  if (seed) j["seed"] = *seed;
  return j.dump();
}

bool ExperimentConfig::randomized() const noexcept {
  return kind == ExperimentKind::BsCount && inputs.count("f") == 0;
}

void ExperimentConfig::validate() const {
  const int max_dim = kind == ExperimentKind::Rearrange ? 3 : 2;
  if (d < 1 || d > max_dim) config_error("d must be in 1.." + std::to_string(max_dim));
  if (resolution < 2) config_error("resolution must be at least 2");
  if (!(tolerance > 0.0 && tolerance < 1.0)) config_error("tolerance must be in (0, 1)");
  if (!(slack >= 0.0)) config_error("slack must be nonnegative");
  if (randomized() && !seed) config_error("seed is mandatory for randomized experiments");
  switch (kind) {
    case ExperimentKind::Rearrange:
    case ExperimentKind::Equivalence:
      require_input(*this, "f");
      break;
    case ExperimentKind::Cover:
      require_input(*this, "f");
      if (n < 1) config_error("n must be positive");
      break;
    case ExperimentKind::Approx:
      require_input(*this, "f");
      require_input(*this, "u");
      if (ns.empty() && n < 1) config_error("n must be positive");
      for (int v : ns)
        if (v < 1) config_error("ns entries must be positive");
      break;
    case ExperimentKind::Spectrum:
      require_input(*this, "f");
      if (N < 0) config_error("N must be nonnegative");
      if (!(p > 0.0)) config_error("p must be positive");
      break;
    case ExperimentKind::Sweep:
      if (profiles.empty()) config_error("sweep needs at least one profile");
      if (Ns.empty()) config_error("sweep needs at least one N");
      for (int v : Ns)
        if (v < 0) config_error("Ns entries must be nonnegative");
      break;
    case ExperimentKind::Counterexample:
      if (ns.empty()) config_error("counterexample needs ns");
      for (int v : ns)
        if (v < 2) config_error("ns entries must be at least 2");
      if (N < 1) config_error("N must be positive");
      if (cells_per_unit < 0) config_error("cells_per_unit must be nonnegative");
      break;
    case ExperimentKind::BsCount:
      if (N < 0) config_error("N must be nonnegative");
      if (inputs.count("f")) {
        if (t.empty()) config_error("bs-count with an input needs t");
      } else if (trials < 1) {
        config_error("bs-count needs an input f or trials >= 1");
      } else if (N < 2) {
        config_error("random bs-count draws N from 2..min(N, 8); N must be at least 2");
      }
      for (double v : t)
        if (!(v > 0.0)) config_error("t must be positive");
      break;
  }
}

std::uint64_t fnv1a64(const std::string& bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

bool Report::passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const InequalityCheck& c) { return c.verdict; });
}

const Table* Report::find_table(const std::string& name) const noexcept {
  for (const auto& t : tables)
    if (t.name == name) return &t;
  return nullptr;
}

std::string Report::to_json() const {
  json checks_json = json::array();
  for (const auto& c : checks)
    checks_json.push_back(
        {{"anchor", c.anchor}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"slack", c.slack}, {"verdict", c.verdict}});
  json tables_json = json::array();
  for (const auto& t : tables) tables_json.push_back(t.filename());
  json j = {{"id", id},
            {"kind", cwikel::to_string(kind)},
            {"inputs_digest", inputs_digest},
            {"passed", passed()},
            {"wall_clock_seconds", wall_clock_seconds},
            {"tables", tables_json},
            {"checks", checks_json},
            {"warnings", warnings}};
  return j.dump(2) + "\n";
}

Report run(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  Report r;
  r.id = config.id.empty() ? to_string(config.kind) : config.id;
  r.kind = config.kind;

  std::uint64_t h = fnv1a64(config.to_json());
  for (const auto& [name, spec] : config.inputs)
    if (spec.rfind("profile:", 0) != 0 && spec.rfind("box:", 0) != 0) h = fnv1a64(read_text(spec), h);
  for (const auto& spec : config.profiles)
    if (spec.rfind("profile:", 0) != 0 && spec.rfind("box:", 0) != 0) h = fnv1a64(read_text(spec), h);
  r.inputs_digest = hex64(h);

  switch (config.kind) {
    case ExperimentKind::Rearrange: run_rearrange(config, r); break;
    case ExperimentKind::Cover: run_cover(config, r); break;
    case ExperimentKind::Approx: run_approx(config, r); break;
    case ExperimentKind::Spectrum: run_spectrum(config, r); break;
    case ExperimentKind::Sweep: run_sweep(config, r); break;
    case ExperimentKind::Counterexample: run_counterexample(config, r); break;
    case ExperimentKind::Equivalence: run_equivalence(config, r); break;
    case ExperimentKind::BsCount: run_bs_count(config, r); break;
  }
  r.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<std::string> emit_plots(Report& report, const std::string& dir) {
  std::vector<std::string> written;
  bool dir_ready = false;
  for (const auto& table : report.tables) {
    if (table.plot == PlotKind::None) continue;
    const CsvTable csv = parse_csv(table.content);
    if (csv.rows.empty()) {
      report.warnings.push_back("table '" + table.name + "' has no rows; no plot written");
      continue;
    }
    if (!dir_ready) {
      ensure_dir(dir);
      dir_ready = true;
    }
    const std::string path = (std::filesystem::path(dir) / (report.id + "-" + table.name + ".svg")).string();
    write_text(path, detail::render_svg(plot_spec(report, table, csv)));
    written.push_back(path);
  }
  return written;
}

void write_report(Report& report, const std::string& dir) {
  ensure_dir(dir);
  for (const auto& t : report.tables)
    write_text((std::filesystem::path(dir) / t.filename()).string(), t.content);
  emit_plots(report, dir);
  write_text((std::filesystem::path(dir) / "report.json").string(), report.to_json());
}

}  // namespace cwikel
