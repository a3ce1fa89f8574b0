#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "cwikel/covering.hpp"
#include "cwikel/sampled_function.hpp"

namespace cwikel {

/// Number of monomials of total degree < d/2 in d variables.
int polynomial_space_dimension(int dim);

/// Orthogonal projection onto polynomials of degree < d/2 on one cube.
///
/// Quadrature nodes are the grid cells met by the cube, weighted by the
/// measure of the part of the cell inside the cube. Polynomials are written in
/// local coordinates (offset from the cube center divided by the side).
class CellProjector {
 public:
  CellProjector() = default;
  CellProjector(const SampledFunction& grid, const TorusCube& cube);

  const TorusCube& cube() const noexcept { return cube_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(basis_.rows()); }
  const Region& nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  /// basis()(j, q) is the value of basis function j at node q.
  const Eigen::MatrixXd& basis() const noexcept { return basis_; }
  /// Coefficients of each basis function on the monomials, one row per basis
  /// function, columns follow monomials().
  const Eigen::MatrixXd& monomial_coefficients() const noexcept { return coeffs_; }
  const std::vector<MultiIndex>& monomials() const noexcept { return monomials_; }

  /// Inner products <u, e_j> over the cube.
  Eigen::VectorXd coefficients(const SampledFunction& u) const;
  /// Coefficients for values given at the nodes.
  Eigen::VectorXd coefficients_at_nodes(const Eigen::VectorXd& node_values) const;
  /// Value of sum_j c_j e_j at the center of a grid cell.
  double evaluate(const Eigen::VectorXd& coeffs, const SampledFunction& grid,
                  std::size_t cell) const;
  /// (Pu) at every node.
  Eigen::VectorXd project_at_nodes(const SampledFunction& u) const;

  /// max_{j,k} |<e_j, e_k> - delta_jk|.
  double orthonormality_defect() const;

 private:
  Eigen::VectorXd local_coordinates(const SampledFunction& grid, std::size_t cell) const;
  Eigen::VectorXd monomial_values(const Eigen::VectorXd& local) const;

  TorusCube cube_;
  Region nodes_;
  std::vector<double> weights_;
  std::vector<MultiIndex> monomials_;
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd coeffs_;
};

CellProjector poly_projector(const SampledFunction& grid, const TorusCube& cube);

struct RankCell {
  CellProjector projector;
  /// Grid cells of Delta_k = Pi_k minus the earlier cubes (by cell center).
  std::vector<std::size_t> delta;
};

/// K = sum_k M_{Delta_k} P_k on a fixed grid.
struct FiniteRankOperator {
  int dim = 1;
  int resolution = 0;
  Domain domain;
  std::vector<RankCell> cells;
  /// owner[i] = index into cells of the Delta containing grid cell i.
  std::vector<std::size_t> owner;

  std::size_t rank_bound() const noexcept;
};

/// First-hit partition of the cubes; cubes whose Delta is empty are dropped.
FiniteRankOperator make_finite_rank_operator(const SampledFunction& grid,
                                             const std::vector<TorusCube>& cubes);
FiniteRankOperator build_Kn(const SampledFunction& f, int n, const CoveringOptions& options = {});

SampledFunction apply_Kn(const FiniteRankOperator& k, const SampledFunction& u);

/// max over cells of |P_k(P_k u) - P_k u| at the nodes of Pi_k.
double cellwise_idempotence_defect(const FiniteRankOperator& k, const SampledFunction& u);
/// max over cells and basis functions of |<u - P_k u, e_j>|.
double residual_orthogonality_defect(const FiniteRankOperator& k, const SampledFunction& u);

/// int f |u - K u|^2 under f's measure.
double weighted_error(const SampledFunction& f, const SampledFunction& u,
                      const FiniteRankOperator& k);

/// Domain of a homogeneous seminorm: the whole periodic torus, or a cube
/// (cells whose centers lie in it, no periodicity). The torus is
/// [-pi, pi]^d with Lebesgue measure.
struct HomDomain {
  bool periodic = true;
  TorusCube cube;

  static HomDomain torus() { return {true, {}}; }
  static HomDomain on(const TorusCube& cube) { return {false, cube}; }
  /// [-pi, pi]^d without periodic identification.
  static HomDomain box(int dim) { return {false, TorusCube{dim, {0.5, 0.5, 0.5}, 1.0}}; }
};

struct HomSeminorm {
  double squared = 0.0;
  /// d = 1: estimate of the omitted diagonal band |x - y| < h. 0 for d = 2.
  double band_estimate = 0.0;
  double value() const;
};

/// ||u||_{W^{d/2,2}_hom}: d = 2 uses int |grad u|^2 (spectral on the torus,
/// finite differences on cubes); d = 1 uses the Gagliardo double sum with
/// kernel |x - y|^{-2} and the diagonal band excluded.
HomSeminorm hom_seminorm_detail(const SampledFunction& u, const HomDomain& domain);
double hom_seminorm(const SampledFunction& u, const HomDomain& domain = HomDomain::torus());

/// Mean-zero band-limited field with Gaussian Fourier coefficients on modes
/// 1 <= |k|_inf <= band.
SampledFunction random_band_limited(int dim, int resolution, int band, std::uint64_t seed);

struct ComparisonProbe {
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  int trials = 0;
};

/// max over random mean-zero u of sqrt(||u||_2^2 + ||u||_hom^2) / ||u||_hom.
ComparisonProbe comparison_constant_probe(int dim, int trials, std::uint64_t seed,
                                          int resolution = 64, int band = 6);

struct HolderCheck {
  double lhs = 0.0;       // int_Pi |f| |u - Pu|^2
  double j_value = 0.0;   // J_f(Pi)
  double hom_squared = 0.0;
  double ratio = 0.0;
};

/// Ratio int_Pi |f||u - Pu|^2 / (J_f(Pi) ||u - Pu||^2_hom(Pi)).
HolderCheck scaled_holder_check(const SampledFunction& f, const SampledFunction& u,
                                const TorusCube& cube);

}  // namespace cwikel
