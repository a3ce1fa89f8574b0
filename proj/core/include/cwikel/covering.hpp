#pragma once

#include <cstddef>
#include <vector>

#include "cwikel/orlicz.hpp"
#include "cwikel/sampled_function.hpp"

namespace cwikel {

/// Axis-parallel cube on the torus, in normalized coordinates: each axis is
/// the circle [0, 1) and `side` is the arc length (so the cube has measure
/// side^d). Cubes are closed and wrap around.
struct TorusCube {
  int dim = 1;
  Point center{0.0, 0.0, 0.0};
  double side = 1.0;

  double measure() const noexcept;
  bool contains(const Point& p) const noexcept;
};

/// Normalized coordinates of a cell center.
Point normalized_coordinates(const SampledFunction& f, std::size_t cell) noexcept;
/// Cells met by the cube with the fraction of each cell that lies inside.
Region cube_region(const SampledFunction& f, const TorusCube& cube);
/// Positive-measure intersection test.
bool cubes_overlap(const TorusCube& a, const TorusCube& b) noexcept;

double j_functional(const SampledFunction& f, const TorusCube& cube,
                    const OrliczGauge& gauge = OrliczGauge::llogl());

struct CubeBudget {
  double side = 1.0;
  double j_value = 0.0;
  bool saturated = false;
};

/// Smallest side t (to relative tolerance on J) with J(cube(x, t)) >= target.
CubeBudget cube_radius_for_budget(const SampledFunction& f, const Point& center, double target,
                                  double tolerance = 1e-3);

struct Covering {
  std::vector<TorusCube> cubes;
  std::vector<double> j_values;
  std::vector<bool> saturated;
  double target = 0.0;
  std::vector<std::vector<std::size_t>> families;
};

struct CoveringOptions {
  /// Relative tolerance on J used by the side bisection.
  double tolerance = 1e-3;
  /// Drop cubes whose removal keeps the cover complete.
  bool prune = true;
  /// Shifted grid-point centers tried per axis and direction when placing a
  /// cube; 0 centers every cube on the uncovered cell itself.
  int search_steps = 3;
};

Covering build_equal_j_covering(const SampledFunction& f, int n,
                                const CoveringOptions& options = {});

/// Greedy partition of the cubes into pairwise disjoint families; ties are
/// broken by cube index.
std::vector<std::vector<std::size_t>> besicovitch_select(const std::vector<TorusCube>& cubes);

struct CoveringReport {
  double coverage = 0.0;           // covered measure, normalized
  bool complete = false;           // every point of the torus covered
  int max_multiplicity = 0;
  double max_relative_deviation = 0.0;  // over non-saturated cubes
  std::size_t cube_count = 0;
  double cubes_per_n = 0.0;
  std::size_t family_count = 0;
  bool families_disjoint = true;
};

CoveringReport verify_covering(const SampledFunction& f, const Covering& cov, int n);

/// Number of cubes containing the point (normalized coordinates).
int pointwise_multiplicity(const std::vector<TorusCube>& cubes, const Point& p);

}  // namespace cwikel
