#include "cwikel/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cwikel/error.hpp"
#include "cwikel/parallel.hpp"
#include "cwikel/spectral.hpp"

namespace cwikel {

namespace {

double interpolate_impl(const SampledFunction& f, const Point& x, bool split);

void require_box(const SampledFunction& f) {
  if (f.domain().kind != DomainKind::Box)
    throw Error(ErrorKind::InvalidInput, "inversion acts on box fields");
}

Point invert(const Point& t, int dim, double& norm) {
  norm = euclidean_norm(t, dim);
  Point s{0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) s[a] = t[a] / (norm * norm);
  return s;
}

InversionResult invert_field(const SampledFunction& f, int power) {
  require_box(f);
  const int dim = f.dim();
  const double h = f.cell_width();
  const double big = 1.0 / h;
  const double small = 1.0 / f.domain().half_width;
  InversionResult out{SampledFunction::zeros_like(f), 0, 0.0, 0.0};

  std::vector<char> masked(f.size(), 0);
  parallel_for(f.size(), [&](std::size_t i) {
    const Point t = f.center(i);
    double norm = 0.0;
    const Point s = invert(t, dim, norm);
    if (norm < h) {
      masked[i] = 1;
      return;
    }
    out.field[i] = std::pow(norm, -power * dim) * interpolate_impl(f, s, true);
  });
  out.masked_cells = static_cast<std::size_t>(std::count(masked.begin(), masked.end(), 1));
  // power 2 is V (L1 mass), power 1 is U (squared L2 mass).
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = euclidean_norm(f.center(i), dim);
    const double mass = power == 2 ? std::abs(f[i]) : f[i] * f[i];
    if (r > big) out.origin_defect += mass * f.cell_measure();
    if (r < small) out.outside_defect += mass * f.cell_measure();
  }
  return out;
}

std::vector<Atom> ball_atoms(const SampledFunction& f, bool inside) {
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (in_unit_ball(f, i) == inside && f[i] != 0.0) atoms.push_back({f.cell_measure(), std::abs(f[i])});
  return atoms;
}

}  // namespace

double euclidean_norm(const Point& x, int dim) {
  double s = 0.0;
  for (int a = 0; a < dim; ++a) s += x[a] * x[a];
  return std::sqrt(s);
}

bool in_unit_ball(const SampledFunction& f, std::size_t cell) {
  return euclidean_norm(f.center(cell), f.dim()) <= 1.0;
}

double unit_ball_volume(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi / 3.0;
  }
  throw Error(ErrorKind::UnsupportedDimension, "dimension must be 1, 2 or 3");
}

namespace {

// Multilinear interpolation restricted to the corners that lie on the same
// side of the unit sphere as x (when `split` is set), with the weights
// renormalized. Inversion swaps the inside and the outside of the ball, so
// mixing corners across the sphere would leak mass into the wrong region.
double interpolate_impl(const SampledFunction& f, const Point& x, bool split) {
  const int dim = f.dim();
  const int r = f.resolution();
  const double half = f.domain().half_width;
  const double h = f.cell_width();
  std::array<int, kMaxDim> base{0, 0, 0};
  std::array<double, kMaxDim> frac{0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) {
    if (x[a] < -half || x[a] > half) return 0.0;
    const double g = (x[a] + half) / h - 0.5;
    base[a] = static_cast<int>(std::floor(g));
    frac[a] = g - base[a];
  }
  const bool x_inside = euclidean_norm(x, dim) <= 1.0;
  double sum = 0.0;
  double weight = 0.0;
  double dropped = 0.0;
  for (int corner = 0; corner < (1 << dim); ++corner) {
    double w = 1.0;
    MultiIndex idx{0, 0, 0};
    bool inside = true;
    for (int a = 0; a < dim; ++a) {
      const bool up = (corner >> a) & 1;
      idx[a] = base[a] + (up ? 1 : 0);
      w *= up ? frac[a] : 1.0 - frac[a];
      if (idx[a] < 0 || idx[a] >= r) inside = false;
    }
    if (w == 0.0) continue;
    if (!inside) {
      weight += w;  // beyond the box the field is zero
      continue;
    }
    const std::size_t cell = f.flat_index(idx);
    if (split && in_unit_ball(f, cell) != x_inside) {
      dropped += w;
      continue;
    }
    sum += w * f[cell];
    weight += w;
  }
  if (dropped == 0.0) return sum;
  return weight > 0.0 ? sum / weight : 0.0;
}

}  // namespace

double interpolate(const SampledFunction& f, const Point& x) { return interpolate_impl(f, x, false); }

double inversion_V_at(const SampledFunction& f, const Point& t) {
  require_box(f);
  double norm = 0.0;
  const Point s = invert(t, f.dim(), norm);
  if (norm < f.cell_width()) throw Error(ErrorKind::OriginSingularity, "|t| below one cell width");
  return std::pow(norm, -2 * f.dim()) * interpolate_impl(f, s, true);
}

double inversion_U_at(const SampledFunction& xi, const Point& t) {
  require_box(xi);
  double norm = 0.0;
  const Point s = invert(t, xi.dim(), norm);
  if (norm < xi.cell_width()) throw Error(ErrorKind::OriginSingularity, "|t| below one cell width");
  return std::pow(norm, -xi.dim()) * interpolate_impl(xi, s, true);
}

InversionResult inversion_V(const SampledFunction& f) { return invert_field(f, 2); }
InversionResult inversion_U(const SampledFunction& xi) { return invert_field(xi, 1); }

double log_weighted_integral(const SampledFunction& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] != 0.0) s += std::abs(f[i]) * std::log1p(euclidean_norm(f.center(i), f.dim()));
  return s * f.cell_measure();
}

double rd_rhs_norm(const SampledFunction& f) {
  require_box(f);
  return orlicz_norm(decreasing_rearrangement(f)) + log_weighted_integral(f);
}

std::vector<Atom> inverted_ball_atoms(const SampledFunction& f) {
  require_box(f);
  const double h = f.cell_width();
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!in_unit_ball(f, i)) continue;
    const Point t = f.center(i);
    if (euclidean_norm(t, f.dim()) < h) continue;
    const double v = std::abs(inversion_V_at(f, t));
    if (v != 0.0) atoms.push_back({f.cell_measure(), v});
  }
  return atoms;
}

double split_norm(const SampledFunction& f) {
  require_box(f);
  const auto inner = ball_atoms(f, true);
  const auto inverted = inverted_ball_atoms(f);
  return luxemburg_norm(inner, OrliczGauge::llogl()) +
         luxemburg_norm(inverted, OrliczGauge::llogl());
}

ExteriorBounds exterior_bounds(const SampledFunction& f, double slack) {
  require_box(f);
  SampledFunction g = f;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (in_unit_ball(g, i)) g[i] = 0.0;
  const int d = f.dim();
  ExteriorBounds out;
  out.slack = slack;
  out.f_exterior_norm = luxemburg_norm(ball_atoms(g, false), OrliczGauge::llogl());
  out.log_integral = log_weighted_integral(g);
  out.vf_ball_norm = luxemburg_norm(inverted_ball_atoms(g), OrliczGauge::llogl());

  out.upper_lhs = out.vf_ball_norm;
  out.upper_rhs = (2.0 * d + 2.0) * (out.f_exterior_norm + out.log_integral);
  out.upper_holds = out.upper_lhs <= out.upper_rhs * (1.0 + slack);
  out.lower_lhs = out.f_exterior_norm;
  out.lower_rhs = out.vf_ball_norm;
  out.lower_holds = out.lower_lhs <= out.lower_rhs * (1.0 + slack);
  out.log_constant = out.vf_ball_norm > 0.0 ? out.log_integral / out.vf_ball_norm : 0.0;
  return out;
}

SampledFunction counterexample_family(int n, int dim, double half_width, int cells_per_unit,
                                      bool centered) {
  if (n < 2) throw Error(ErrorKind::InvalidInput, "n must be at least 2");
  if (half_width < n + 1) throw Error(ErrorKind::BoxTooSmall, "box half width must be >= n + 1");
  if (cells_per_unit < 1) throw Error(ErrorKind::InvalidInput, "cells_per_unit must be positive");
  const double cells = 2.0 * half_width * cells_per_unit;
  const int resolution = static_cast<int>(std::lround(cells));
  if (std::abs(cells - resolution) > 1e-9)
    throw Error(ErrorKind::InvalidInput, "2 L cells_per_unit must be an integer");
  const double radius = 1.0 / n;
  const double shift = centered ? 0.5 * (n - 1) : 0.0;
  return SampledFunction::box(dim, half_width, resolution, [&](const Point& x) {
    // Nearest lattice point per axis decides membership since balls of
    // radius 1/n <= 1/2 around distinct integer points do not overlap.
    double dist2 = 0.0;
    for (int a = 0; a < dim; ++a) {
      const double y = x[a] + shift;
      const double k = std::clamp(std::round(y), 0.0, static_cast<double>(n - 1));
      dist2 += (y - k) * (y - k);
    }
    return dist2 < radius * radius ? 1.0 : 0.0;
  });
}

void fit_line(const std::vector<double>& x, const std::vector<double>& y, double& a, double& b) {
  const std::size_t m = x.size();
  if (m < 2 || y.size() != m) throw Error(ErrorKind::InvalidInput, "need at least two points");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorKind::InvalidInput, "regressor is constant");
  b = sxy / sxx;
  a = my - b * mx;
}

GrowthRecord counterexample_growth(const std::vector<int>& ns, int dim, int cutoff,
                                   double half_width, int cells_per_unit) {
  for (std::size_t i = 1; i < ns.size(); ++i)
    if (ns[i] <= ns[i - 1]) throw Error(ErrorKind::InvalidInput, "ns must be strictly increasing");
  GrowthRecord rec;
  rec.dim = dim;
  rec.cutoff = cutoff;
  rec.half_width = half_width;
  rec.ns = ns;
  rec.q.assign(ns.size(), 0.0);
  rec.orlicz_norms.assign(ns.size(), 0.0);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const SampledFunction fn = counterexample_family(ns[i], dim, half_width, cells_per_unit, true);
    rec.q[i] = half_operator_quasinorm(fn, cutoff);
    rec.orlicz_norms[i] = orlicz_norm(decreasing_rearrangement(fn));
  }
  if (ns.size() >= 2) {
    std::vector<double> x(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) x[i] = std::sqrt(std::log(static_cast<double>(ns[i])));
    fit_line(x, rec.q, rec.intercept, rec.slope);
    for (std::size_t i = 0; i < ns.size(); ++i) {
      rec.fitted.push_back(rec.intercept + rec.slope * x[i]);
      rec.residuals.push_back(rec.q[i] - rec.fitted.back());
    }
  }
  return rec;
}

std::vector<SmallBallRow> small_ball_lower_bound(const std::vector<double>& radii, int dim,
                                                 int cutoff, double half_width, int resolution) {
  std::vector<SmallBallRow> rows(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double r = radii[i];
    if (!(r > 0.0 && r < 1.0)) throw Error(ErrorKind::InvalidInput, "radius must lie in (0, 1)");
    const SampledFunction f = SampledFunction::box(dim, half_width, resolution, [&](const Point& x) {
      return euclidean_norm(x, dim) < r ? 1.0 : 0.0;
    });
    const Eigen::VectorXd ev = hermitian_eigenvalues(assemble_cwikel(f, cutoff).entries);
    rows[i].radius = r;
    rows[i].operator_norm = ev.cwiseAbs().maxCoeff();
    rows[i].marcinkiewicz =
        marcinkiewicz_psi_norm(StepFunction::indicator(unit_ball_volume(dim) * std::pow(r, dim)));
    rows[i].ratio = rows[i].operator_norm / rows[i].marcinkiewicz;
  }
  return rows;
}

}  // namespace cwikel
