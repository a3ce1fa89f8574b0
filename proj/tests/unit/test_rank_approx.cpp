#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "cwikel/covering.hpp"
#include "cwikel/error.hpp"
#include "cwikel/orlicz.hpp"
#include "cwikel/profiles.hpp"
#include "cwikel/rank_approx.hpp"

using namespace cwikel;
using std::numbers::pi;

namespace {

// Length of [a - s/2, a + s/2] (mod 1) intersected with [lo, hi].
double arc_overlap(double center, double side, double lo, double hi) {
  double total = 0.0;
  for (int shift = -1; shift <= 1; ++shift) {
    const double a = center - 0.5 * side + shift;
    const double b = center + 0.5 * side + shift;
    total += std::max(0.0, std::min(b, hi) - std::max(a, lo));
  }
  return total;
}

// Independent evaluation of int f |u - K u|^2 for degree-zero projections:
// P_k u is the fraction-weighted mean of u over the cube, and Delta_k is the
// first-hit partition by cell center.
double oracle_weighted_error(const SampledFunction& f, const SampledFunction& u,
                             const std::vector<TorusCube>& cubes) {
  const int r = f.resolution();
  const int d = f.dim();
  std::vector<double> mean(cubes.size());
  for (std::size_t k = 0; k < cubes.size(); ++k) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const MultiIndex idx = f.multi_index(i);
      double w = 1.0;
      for (int a = 0; a < d; ++a)
        w *= arc_overlap(cubes[k].center[a], cubes[k].side, static_cast<double>(idx[a]) / r,
                         static_cast<double>(idx[a] + 1) / r) * r;
      num += w * u[i];
      den += w;
    }
    mean[k] = num / den;
  }
  double err = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const MultiIndex idx = f.multi_index(i);
    Point p{0, 0, 0};
    for (int a = 0; a < d; ++a) p[a] = (idx[a] + 0.5) / r;
    double ku = 0.0;
    for (std::size_t k = 0; k < cubes.size(); ++k)
      if (cubes[k].contains(p)) {
        ku = mean[k];
        break;
      }
    err += f[i] * (u[i] - ku) * (u[i] - ku) * f.cell_measure();
  }
  return err;
}

std::vector<TorusCube> cubes_of(const FiniteRankOperator& k) {
  std::vector<TorusCube> out;
  for (const auto& c : k.cells) out.push_back(c.projector.cube());
  return out;
}

}  // namespace

TEST(PolynomialSpace, Dimensions) {
  EXPECT_EQ(polynomial_space_dimension(1), 1);
  EXPECT_EQ(polynomial_space_dimension(2), 1);
  EXPECT_EQ(polynomial_space_dimension(3), 4);
}

TEST(CellProjector, ReproducesConstantsInTwoDimensions) {
  const auto u = SampledFunction::torus(2, 32, [](const Point&) { return 4.5; });
  const CellProjector p(u, TorusCube{2, {0.3, 0.7, 0}, 0.35});
  EXPECT_EQ(p.dimension(), 1u);
  EXPECT_LE(p.orthonormality_defect(), 1e-10);
  const auto pu = p.project_at_nodes(u);
  for (Eigen::Index q = 0; q < pu.size(); ++q) EXPECT_NEAR(pu(q), 4.5, 1e-12);
}

TEST(CellProjector, ReproducesAffineInThreeDimensions) {
  const auto u = SampledFunction::torus(3, 16, [](const Point& x) { return 1.0 + 2.0 * x[0] - x[1] + 0.5 * x[2]; });
  const CellProjector p(u, TorusCube{3, {0.5, 0.5, 0.5}, 0.5});
  EXPECT_EQ(p.dimension(), 4u);
  EXPECT_LE(p.orthonormality_defect(), 1e-10);
  const auto pu = p.project_at_nodes(u);
  for (std::size_t q = 0; q < p.nodes().size(); ++q)
    EXPECT_NEAR(pu(static_cast<Eigen::Index>(q)), u[p.nodes()[q].cell], 1e-10);
}

TEST(CellProjector, QuadraticProjectsToItsMean) {
  // y = 2 x / side on the cube [-1, 1]^3 in local units; P(y_1^2) is the
  // quadrature mean of y_1^2 because the odd moments vanish.
  const int r = 32;
  const auto u = SampledFunction::torus(3, r, [](const Point& x) {
    const double y = x[0] / (0.25 * pi);
    return y * y;
  });
  const CellProjector p(u, TorusCube{3, {0.5, 0.5, 0.5}, 0.25});
  double num = 0.0;
  double den = 0.0;
  for (std::size_t q = 0; q < p.nodes().size(); ++q) {
    num += p.weights()[q] * u[p.nodes()[q].cell];
    den += p.weights()[q];
  }
  const double mean = num / den;
  EXPECT_NEAR(mean, 1.0 / 3.0, 0.02);
  const auto pu = p.project_at_nodes(u);
  for (Eigen::Index q = 0; q < pu.size(); ++q) EXPECT_NEAR(pu(q), mean, 1e-10);
}

TEST(FiniteRank, SingleCellIsGlobalMean) {
  const auto f = torus_profile("gaussian", 2, 32);
  const auto u = torus_profile("lacunary", 2, 32);
  const auto k = build_Kn(f, 1);
  ASSERT_EQ(k.cells.size(), 1u);
  double mean = 0.0;
  for (double v : u.values()) mean += v;
  mean /= static_cast<double>(u.size());
  const auto ku = apply_Kn(k, u);
  for (double v : ku.values()) EXPECT_NEAR(v, mean, 1e-10);
}

TEST(FiniteRank, ConstantDensityRank) {
  const auto f = SampledFunction::torus(1, 512, [](const Point&) { return 1.0; });
  const auto k = build_Kn(f, 4);
  EXPECT_GE(k.cells.size(), 4u);
  EXPECT_LE(k.cells.size(), 8u);
  EXPECT_LE(k.rank_bound(), 8u);
}

TEST(FiniteRank, ConstantsAreFixed) {
  const auto f = torus_profile("power", 1, 512);
  const auto u = SampledFunction::torus(1, 512, [](const Point&) { return -1.5; });
  const auto k = build_Kn(f, 8);
  const auto ku = apply_Kn(k, u);
  for (double v : ku.values()) EXPECT_NEAR(v, -1.5, 1e-12);
  EXPECT_NEAR(weighted_error(f, u, k), 0.0, 1e-20);
}

TEST(FiniteRank, AdaptedPiecewiseConstantIsReproduced) {
  const auto grid = SampledFunction::torus(1, 256, [](const Point&) { return 1.0; });
  std::vector<TorusCube> cubes;
  for (int k = 0; k < 4; ++k) cubes.push_back({1, {0.125 + 0.25 * k, 0, 0}, 0.25});
  const auto k = make_finite_rank_operator(grid, cubes);
  const auto u = SampledFunction::torus(1, 256, [](const Point& x) { return std::floor(2.0 * (x[0] + pi) / pi); });
  const auto ku = apply_Kn(k, u);
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(ku[i], u[i], 1e-12);
}

TEST(FiniteRank, CellwiseIdempotent) {
  for (int dim : {1, 2}) {
    const auto f = torus_profile("two-bump", dim, dim == 1 ? 512 : 32);
    const auto u = torus_profile("lacunary", dim, dim == 1 ? 512 : 32);
    const auto k = build_Kn(f, 16);
    EXPECT_LE(cellwise_idempotence_defect(k, u), 1e-10) << "d=" << dim;
    EXPECT_LE(residual_orthogonality_defect(k, u), 1e-8) << "d=" << dim;
  }
}

TEST(FiniteRank, RankGrowsLinearly) {
  const auto f = torus_profile("power", 1, 1024);
  std::vector<double> per_n;
  for (int n : {4, 16, 64}) per_n.push_back(static_cast<double>(build_Kn(f, n).rank_bound()) / n);
  EXPECT_LE(per_n[2], 1.25 * per_n[0]);
  EXPECT_LE(per_n[1], 1.25 * per_n[0]);
}

TEST(WeightedError, MatchesIndependentQuadrature) {
  const auto f = SampledFunction::torus(2, 32, [](const Point&) { return 1.0; });
  const auto u = SampledFunction::torus(2, 32, [](const Point& x) { return std::sin(x[0]); });
  const auto k = build_Kn(f, 4);
  const double err = weighted_error(f, u, k);
  EXPECT_GT(err, 0.0);
  EXPECT_NEAR(err, oracle_weighted_error(f, u, cubes_of(k)), 1e-12);

  const auto g = torus_profile("two-bump", 2, 32);
  const auto kg = build_Kn(g, 8);
  EXPECT_NEAR(weighted_error(g, u, kg), oracle_weighted_error(g, u, cubes_of(kg)), 1e-12);
}

TEST(WeightedError, ZeroWeightGivesZero) {
  const auto f = SampledFunction::torus(1, 128, [](const Point&) { return 0.0; });
  const auto g = SampledFunction::torus(1, 128, [](const Point&) { return 1.0; });
  const auto u = torus_profile("lacunary", 1, 128);
  EXPECT_EQ(weighted_error(f, u, build_Kn(g, 4)), 0.0);
}

TEST(HomSeminorm, ConstantIsZero) {
  for (int dim : {1, 2}) {
    const auto u = SampledFunction::torus(dim, 32, [](const Point&) { return 3.0; });
    EXPECT_NEAR(hom_seminorm(u), 0.0, 1e-12);
    EXPECT_NEAR(hom_seminorm(u, HomDomain::box(dim)), 0.0, 1e-12);
  }
}

TEST(HomSeminorm, SineGradientEnergy) {
  const auto u = SampledFunction::torus(2, 64, [](const Point& x) { return std::sin(x[0]); });
  EXPECT_NEAR(hom_seminorm_detail(u, HomDomain::torus()).squared, 2.0 * pi * pi, 1e-9);
  EXPECT_NEAR(hom_seminorm_detail(u, HomDomain::box(2)).squared, 2.0 * pi * pi, 0.01 * 2.0 * pi * pi);
}

TEST(HomSeminorm, SineComparisonRatio) {
  const auto u = SampledFunction::torus(2, 64, [](const Point& x) { return std::sin(x[0]); });
  double l2 = 0.0;
  for (double v : u.values()) l2 += v * v * u.cell_width() * u.cell_width();
  EXPECT_NEAR(l2, 2.0 * pi * pi, 1e-9);
  const double hom2 = hom_seminorm_detail(u, HomDomain::torus()).squared;
  EXPECT_NEAR(std::sqrt((l2 + hom2) / hom2), std::sqrt(2.0), 1e-9);
}

TEST(HomSeminorm, UnsupportedDimension) {
  const auto u = SampledFunction::torus(3, 8, [](const Point& x) { return x[0]; });
  try {
    hom_seminorm(u);
    FAIL() << "expected UnsupportedDimension";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnsupportedDimension);
  }
}

TEST(HomSeminorm, ScalingInvariance) {
  auto u_fn = [](const Point& x) { return std::sin(x[0]) * std::cos(2.0 * x[1]) + 0.3 * x[0] * x[1]; };
  for (int dim : {1, 2}) {
    for (double eps : {0.5, 0.25}) {
      const int coarse = dim == 1 ? 256 : 64;
      const int fine = static_cast<int>(coarse / eps);
      const auto u = SampledFunction::torus(dim, fine, u_fn);
      const auto v = SampledFunction::torus(dim, coarse, [&](const Point& x) {
        return u_fn({eps * x[0], eps * x[1], 0.0});
      });
      const TorusCube cube{dim, {0.5, 0.5, 0.5}, eps};
      const double on_cube = hom_seminorm(u, HomDomain::on(cube));
      const double dilated = hom_seminorm(v, HomDomain::box(dim));
      EXPECT_NEAR(on_cube, dilated, 0.01 * dilated) << "d=" << dim << " eps=" << eps;
    }
  }
}

TEST(HomSeminorm, PolynomialPartDoesNotChangeSeminorm) {
  const auto u = torus_profile("lacunary", 2, 64);
  const auto f = torus_profile("gaussian", 2, 64);
  const auto k = build_Kn(f, 8);
  for (const auto& cell : k.cells) {
    const auto& p = cell.projector;
    const Eigen::VectorXd c = p.coefficients(u);
    SampledFunction v = u;
    const double shift = p.evaluate(c, u, p.nodes().front().cell);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= shift;
    const double a = hom_seminorm(u, HomDomain::on(p.cube()));
    const double b = hom_seminorm(v, HomDomain::on(p.cube()));
    EXPECT_NEAR(a, b, 1e-8 * std::max(1.0, a));
  }
}

TEST(ComparisonProbe, StableWhenTrialsDouble) {
  const auto a = comparison_constant_probe(2, 50, 7);
  const auto b = comparison_constant_probe(2, 100, 7);
  EXPECT_TRUE(std::isfinite(a.max_ratio));
  EXPECT_GE(a.min_ratio, 1.0);
  EXPECT_NEAR(b.max_ratio, a.max_ratio, 0.1 * a.max_ratio);
}

TEST(ScaledHolder, PolynomialOnCubeIsRejected) {
  const auto f = torus_profile("gaussian", 2, 32);
  const auto u = SampledFunction::torus(2, 32, [](const Point&) { return 2.0; });
  try {
    scaled_holder_check(f, u, TorusCube{2, {0.5, 0.5, 0}, 0.5});
    FAIL() << "expected ZeroSeminorm";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroSeminorm);
  }
}

TEST(ScaledHolder, ZeroWeight) {
  const auto f = SampledFunction::torus(2, 32, [](const Point&) { return 0.0; });
  const auto u = torus_profile("lacunary", 2, 32);
  EXPECT_EQ(scaled_holder_check(f, u, TorusCube{2, {0.5, 0.5, 0}, 0.5}).ratio, 0.0);
}

TEST(ScaledHolder, RatioStableUnderRefinement) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> pos(0.2, 0.8);
  std::uniform_real_distribution<double> side(0.2, 0.5);
  double worst_coarse = 0.0;
  double worst_fine = 0.0;
  const char* weights[] = {"gaussian", "two-bump", "power", "log"};
  for (int trial = 0; trial < 8; ++trial) {
    const TorusCube cube{2, {pos(rng), pos(rng), 0}, side(rng)};
    const std::string w = weights[trial % 4];
    const std::uint64_t seed = 100 + static_cast<std::uint64_t>(trial);
    const auto c = scaled_holder_check(torus_profile(w, 2, 32), random_band_limited(2, 32, 4, seed), cube);
    const auto fn = scaled_holder_check(torus_profile(w, 2, 64), random_band_limited(2, 64, 4, seed), cube);
    worst_coarse = std::max(worst_coarse, c.ratio);
    worst_fine = std::max(worst_fine, fn.ratio);
  }
  EXPECT_TRUE(std::isfinite(worst_fine));
  EXPECT_GT(worst_fine, 0.0);
  EXPECT_NEAR(worst_fine, worst_coarse, 0.25 * worst_coarse);
}
