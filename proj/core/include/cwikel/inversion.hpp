#pragma once

#include <cstddef>
#include <vector>

#include "cwikel/orlicz.hpp"
#include "cwikel/sampled_function.hpp"

namespace cwikel {

/// Multilinear interpolation through the cell centers; zero outside the box.
double interpolate(const SampledFunction& f, const Point& x);

double euclidean_norm(const Point& x, int dim);
/// Cell membership in the closed unit ball, decided by the cell center.
bool in_unit_ball(const SampledFunction& f, std::size_t cell);
double unit_ball_volume(int dim);

/// (Vf)(t) = |t|^{-2d} f(t / |t|^2). OriginSingularity when |t| is below one
/// cell width. The interpolation behind U and V never mixes cells from both
/// sides of the unit sphere.
double inversion_V_at(const SampledFunction& f, const Point& t);
/// (U xi)(t) = |t|^{-d} xi(t / |t|^2), same guard.
double inversion_U_at(const SampledFunction& xi, const Point& t);

struct InversionResult {
  SampledFunction field;
  std::size_t masked_cells = 0;
  /// Mass (L1 for V, squared L2 for U) of the input that the grid cannot
  /// represent after inversion: |s| beyond 1 / h lands in the masked origin
  /// cells, |s| below 1 / L lands outside the box.
  double origin_defect = 0.0;
  double outside_defect = 0.0;
};

InversionResult inversion_V(const SampledFunction& f);
InversionResult inversion_U(const SampledFunction& xi);

/// ||mu(f)||_{L_M} + int |f(s)| log(1 + |s|) ds on a box with Lebesgue
/// measure.
double rd_rhs_norm(const SampledFunction& f);
double log_weighted_integral(const SampledFunction& f);

/// Atoms of (Vf) restricted to the unit ball, evaluated at cell centers.
std::vector<Atom> inverted_ball_atoms(const SampledFunction& f);
/// ||f chi_B||_{L_M} + ||(Vf) chi_B||_{L_M}.
double split_norm(const SampledFunction& f);

struct ExteriorBounds {
  double f_exterior_norm = 0.0;   // ||f||_{L_M(R^d \ B)}
  double log_integral = 0.0;      // int_{R^d \ B} |f| log(1 + |s|)
  double vf_ball_norm = 0.0;      // ||Vf||_{L_M(B)}
  double upper_lhs = 0.0;
  double upper_rhs = 0.0;        // (2d + 2)(||f|| + int)
  bool upper_holds = true;
  double lower_lhs = 0.0;
  double lower_rhs = 0.0;        // ||Vf||_{L_M(B)}
  bool lower_holds = true;
  /// Empirical constant int |f| log(1 + |s|) / ||Vf||_{L_M(B)}.
  double log_constant = 0.0;
  double slack = 0.05;
};

/// f is restricted to the exterior of the unit ball before evaluation.
ExteriorBounds exterior_bounds(const SampledFunction& f, double slack = 0.05);

/// sum_{k in {0..n-1}^d} chi_{k + B/n}; with `centered` the lattice of
/// centers is shifted by -(n - 1)/2 so that the union is symmetric about the
/// origin. BoxTooSmall unless half_width >= n + 1.
SampledFunction counterexample_family(int n, int dim, double half_width, int cells_per_unit,
                                      bool centered = true);

struct GrowthRecord {
  int dim = 1;
  int cutoff = 0;
  double half_width = 0.0;
  std::vector<int> ns;
  std::vector<double> q;             // ||M_{f_n^{1/2}} (1 - Delta)^{-d/4}||_{2,inf}
  std::vector<double> orlicz_norms;  // ||f_n||_{L log L}
  double intercept = 0.0;
  double slope = 0.0;                // against sqrt(log n)
  std::vector<double> fitted;
  std::vector<double> residuals;
};

/// Ordinary least squares y = a + b x.
void fit_line(const std::vector<double>& x, const std::vector<double>& y, double& a, double& b);

GrowthRecord counterexample_growth(const std::vector<int>& ns, int dim, int cutoff,
                                   double half_width, int cells_per_unit);

struct SmallBallRow {
  double radius = 0.0;
  double operator_norm = 0.0;
  double marcinkiewicz = 0.0;
  double ratio = 0.0;
};

/// Operator norm of the Cwikel matrix of chi_{rB} against
/// ||chi_{(0, Vol(rB))}||_{M_psi}.
std::vector<SmallBallRow> small_ball_lower_bound(const std::vector<double>& radii, int dim,
                                                 int cutoff, double half_width, int resolution);

}  // namespace cwikel
