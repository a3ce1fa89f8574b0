#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "cwikel/sampled_function.hpp"

namespace cwikel {

/// Modes n in Z^d with |n|_inf <= N, ordered by (|n|^2, n) lexicographically.
class FourierLattice {
 public:
  FourierLattice(int dim, int cutoff);

  int dim() const noexcept { return dim_; }
  int cutoff() const noexcept { return cutoff_; }
  std::size_t size() const noexcept { return modes_.size(); }
  const MultiIndex& operator[](std::size_t i) const noexcept { return modes_[i]; }
  const std::vector<MultiIndex>& modes() const noexcept { return modes_; }

 private:
  int dim_;
  int cutoff_;
  std::vector<MultiIndex> modes_;
};

/// Fourier coefficients of a sampled function on the lattice differences
/// needed by a Cwikel matrix, indexed by offset m - n with |m - n|_inf <= 2N.
class CoefficientTable {
 public:
  CoefficientTable(int dim, int reach);

  int reach() const noexcept { return reach_; }
  std::complex<double>& at(const MultiIndex& k);
  const std::complex<double>& at(const MultiIndex& k) const;

 private:
  std::size_t index(const MultiIndex& k) const;

  int dim_;
  int reach_;
  std::vector<std::complex<double>> data_;
};

/// fhat(k) = (1 / |D|) int_D f(x) e^{-i xi_k . x} dx for the piecewise
/// constant model, evaluated at cell centers (plain DFT); xi_k = k on the
/// torus and k pi / L on a box of half width L. Conjugate symmetry is
/// enforced. AliasError unless resolution >= 2(2N + 1).
CoefficientTable fourier_coefficients(const SampledFunction& f, int cutoff);

/// T = (1 + |xi_m|^2)^{-d/4} fhat(m - n) (1 + |xi_n|^2)^{-d/4}.
struct CwikelMatrix {
  FourierLattice lattice{1, 0};
  double frequency_scale = 1.0;
  Eigen::MatrixXcd entries;
  /// True when every entry is real (f even about the grid center).
  bool real = false;

  std::size_t size() const noexcept { return static_cast<std::size_t>(entries.rows()); }
  double weight(std::size_t i) const;
};

CwikelMatrix assemble_cwikel(const SampledFunction& f, int cutoff);
CwikelMatrix assemble_torus_cwikel(const SampledFunction& f, int cutoff);

/// Eigenvalues of the Hermitian matrix, ascending.
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& a);
/// Nonincreasing singular values; Hermitian input uses |eigenvalues|.
std::vector<double> singular_values(const Eigen::MatrixXcd& a, bool hermitian);
std::vector<double> singular_values(const CwikelMatrix& t);

/// sup_k (k + 1)^{1/p} mu_k over the available values.
double weak_quasinorm(const std::vector<double>& mu, double p);

/// ||T_N||_{1,inf} / ||f||_{L log L}.
double cwikel_ratio(const SampledFunction& f, int cutoff);

/// Singular values of M_{f^{1/2}} (1 - Delta)^{-d/4}: square roots of the
/// eigenvalues of the Cwikel matrix of f >= 0.
std::vector<double> half_operator_singular_values(const SampledFunction& f, int cutoff);
double half_operator_quasinorm(const SampledFunction& f, int cutoff);

struct MajorizationReport {
  bool prefix_sums_dominated = true;
  /// max_k (prefix_S(k) - prefix_T(k)), <= 0 when dominated.
  double worst_prefix_excess = 0.0;
  double s_2inf = 0.0;
  double t_2inf = 0.0;
  bool two_infinity_bound = true;
};

/// Compares S = sum_k p_k T p_k against T for orthogonal coordinate
/// projections given by masks over the basis indices.
MajorizationReport diagonal_majorization_check(const Eigen::MatrixXcd& t,
                                               const std::vector<std::vector<bool>>& blocks,
                                               double tolerance = 1e-10);

/// mu(2n, TS) <= mu(n, T) mu(n, S) for every admissible n; returns the largest
/// violation (<= 0 when the inequality holds).
double weak_holder_violation(const Eigen::MatrixXcd& t, const Eigen::MatrixXcd& s);

struct BirmanSchwingerCounts {
  std::size_t cwikel = 0;
  std::size_t schrodinger = 0;
};

/// Eigenvalues > 1 of the Cwikel matrix for f / t, against negative
/// eigenvalues of diag((1 + |xi|^2)^{d/2}) - fhat(m - n) / t.
BirmanSchwingerCounts birman_schwinger_count(const SampledFunction& f, double t, int cutoff);

}  // namespace cwikel
