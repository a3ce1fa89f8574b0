#include "cwikel/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "cwikel/error.hpp"
#include "cwikel/orlicz.hpp"
#include "cwikel/parallel.hpp"
#include "fft.hpp"

namespace cwikel {

namespace {

int norm2(const MultiIndex& n, int dim) {
  int s = 0;
  for (int a = 0; a < dim; ++a) s += n[a] * n[a];
  return s;
}

std::vector<double> sorted_desc(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

void require_nonnegative(const SampledFunction& f) {
  for (double v : f.values())
    if (v < 0.0) throw Error(ErrorKind::NegativeFunction, "f must be nonnegative");
}

}  // namespace

FourierLattice::FourierLattice(int dim, int cutoff) : dim_(dim), cutoff_(cutoff) {
  if (dim < 1 || dim > kMaxDim) throw Error(ErrorKind::UnsupportedDimension, "dimension must be 1, 2 or 3");
  if (cutoff < 0) throw Error(ErrorKind::InvalidInput, "cutoff must be nonnegative");
  const int side = 2 * cutoff + 1;
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(side);
  modes_.reserve(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    MultiIndex n{0, 0, 0};
    std::size_t rem = flat;
    for (int a = dim - 1; a >= 0; --a) {
      n[a] = static_cast<int>(rem % side) - cutoff;
      rem /= side;
    }
    modes_.push_back(n);
  }
  std::sort(modes_.begin(), modes_.end(), [dim](const MultiIndex& a, const MultiIndex& b) {
    const int na = norm2(a, dim);
    const int nb = norm2(b, dim);
    if (na != nb) return na < nb;
    return a < b;
  });
}

CoefficientTable::CoefficientTable(int dim, int reach) : dim_(dim), reach_(reach) {
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(2 * reach + 1);
  data_.assign(total, {0.0, 0.0});
}

std::size_t CoefficientTable::index(const MultiIndex& k) const {
  std::size_t flat = 0;
  for (int a = 0; a < dim_; ++a) {
    if (k[a] < -reach_ || k[a] > reach_) throw Error(ErrorKind::InvalidInput, "mode outside table");
    flat = flat * static_cast<std::size_t>(2 * reach_ + 1) + static_cast<std::size_t>(k[a] + reach_);
  }
  return flat;
}

std::complex<double>& CoefficientTable::at(const MultiIndex& k) { return data_[index(k)]; }
const std::complex<double>& CoefficientTable::at(const MultiIndex& k) const {
  return data_[index(k)];
}

CoefficientTable fourier_coefficients(const SampledFunction& f, int cutoff) {
  const int r = f.resolution();
  if (r < 2 * (2 * cutoff + 1))
    throw Error(ErrorKind::AliasError, "resolution " + std::to_string(r) + " < 2(2N+1) for N = " +
                                           std::to_string(cutoff));
  const int dim = f.dim();
  const int reach = 2 * cutoff;
  const auto dft = detail::forward_dft(f);
  const double inv_m = 1.0 / static_cast<double>(f.size());
  CoefficientTable table(dim, reach);

  const int side = 2 * reach + 1;
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(side);
  for (std::size_t flat = 0; flat < total; ++flat) {
    MultiIndex k{0, 0, 0};
    std::size_t rem = flat;
    for (int a = dim - 1; a >= 0; --a) {
      k[a] = static_cast<int>(rem % side) - reach;
      rem /= side;
    }
    // Cell centers sit at -L + (j + 1/2) h, which contributes the phase
    // e^{i pi k (1 - 1/r)} per axis relative to the DFT.
    std::size_t src = 0;
    double phase = 0.0;
    for (int a = 0; a < dim; ++a) {
      src = src * static_cast<std::size_t>(r) + static_cast<std::size_t>(((k[a] % r) + r) % r);
      phase += std::numbers::pi * k[a] * (1.0 - 1.0 / r);
    }
    table.at(k) = dft[src] * inv_m * std::polar(1.0, phase);
  }
  // Real data: fhat(-k) = conj fhat(k).
  for (std::size_t flat = 0; flat < total; ++flat) {
    MultiIndex k{0, 0, 0};
    std::size_t rem = flat;
    for (int a = dim - 1; a >= 0; --a) {
      k[a] = static_cast<int>(rem % side) - reach;
      rem /= side;
    }
    MultiIndex neg{-k[0], -k[1], -k[2]};
    if (k < neg) continue;
    const std::complex<double> avg = 0.5 * (table.at(k) + std::conj(table.at(neg)));
    table.at(k) = avg;
    table.at(neg) = std::conj(avg);
  }
  return table;
}

double CwikelMatrix::weight(std::size_t i) const {
  const auto& n = lattice[i];
  double xi2 = 0.0;
  for (int a = 0; a < lattice.dim(); ++a) xi2 += std::pow(n[a] * frequency_scale, 2);
  return std::pow(1.0 + xi2, -lattice.dim() / 4.0);
}

CwikelMatrix assemble_cwikel(const SampledFunction& f, int cutoff) {
  const CoefficientTable hat = fourier_coefficients(f, cutoff);
  CwikelMatrix t;
  t.lattice = FourierLattice(f.dim(), cutoff);
  t.frequency_scale = std::numbers::pi / f.domain().half_width;
  const std::size_t m = t.lattice.size();
  std::vector<double> w(m);
  for (std::size_t i = 0; i < m; ++i) w[i] = t.weight(i);

  double scale = 0.0;
  double max_imag = 0.0;
  t.entries.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  std::vector<double> row_imag(m, 0.0);
  std::vector<double> row_scale(m, 0.0);
  parallel_for(m, [&](std::size_t i) {
    const MultiIndex& mi = t.lattice[i];
    for (std::size_t j = 0; j < m; ++j) {
      const MultiIndex& nj = t.lattice[j];
      const MultiIndex diff{mi[0] - nj[0], mi[1] - nj[1], mi[2] - nj[2]};
      const std::complex<double> v = w[i] * hat.at(diff) * w[j];
      t.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      row_imag[i] = std::max(row_imag[i], std::abs(v.imag()));
      row_scale[i] = std::max(row_scale[i], std::abs(v));
    }
  });
  for (std::size_t i = 0; i < m; ++i) {
    scale = std::max(scale, row_scale[i]);
    max_imag = std::max(max_imag, row_imag[i]);
  }
  t.real = max_imag <= 1e-13 * scale;
  if (t.real) t.entries = t.entries.real().cast<std::complex<double>>();
  return t;
}

CwikelMatrix assemble_torus_cwikel(const SampledFunction& f, int cutoff) {
  if (f.domain().kind != DomainKind::Torus)
    throw Error(ErrorKind::InvalidInput, "expected a torus function");
  return assemble_cwikel(f, cutoff);
}

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& a) {
  const bool real = a.imag().cwiseAbs().maxCoeff() == 0.0;
  if (real) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.real(), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

std::vector<double> singular_values(const Eigen::MatrixXcd& a, bool hermitian) {
  std::vector<double> out;
  if (a.size() == 0) return out;
  if (hermitian) {
    const Eigen::VectorXd ev = hermitian_eigenvalues(a);
    out.reserve(static_cast<std::size_t>(ev.size()));
    for (Eigen::Index i = 0; i < ev.size(); ++i) out.push_back(std::abs(ev(i)));
  } else {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
    const Eigen::VectorXd sv = svd.singularValues();
    out.assign(sv.data(), sv.data() + sv.size());
  }
  return sorted_desc(std::move(out));
}

std::vector<double> singular_values(const CwikelMatrix& t) { return singular_values(t.entries, true); }

double weak_quasinorm(const std::vector<double>& mu, double p) {
  if (!(p > 0.0)) throw Error(ErrorKind::InvalidInput, "p must be positive");
  const std::vector<double> s = sorted_desc(mu);
  double best = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k)
    best = std::max(best, std::pow(static_cast<double>(k + 1), 1.0 / p) * s[k]);
  return best;
}

double cwikel_ratio(const SampledFunction& f, int cutoff) {
  const double norm = orlicz_norm(decreasing_rearrangement(f));
  if (norm == 0.0) throw Error(ErrorKind::ZeroFunction, "f vanishes identically");
  return weak_quasinorm(singular_values(assemble_cwikel(f, cutoff)), 1.0) / norm;
}

std::vector<double> half_operator_singular_values(const SampledFunction& f, int cutoff) {
  require_nonnegative(f);
  const Eigen::VectorXd ev = hermitian_eigenvalues(assemble_cwikel(f, cutoff).entries);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(ev.size()));
  for (Eigen::Index i = 0; i < ev.size(); ++i) out.push_back(std::sqrt(std::max(ev(i), 0.0)));
  return sorted_desc(std::move(out));
}

double half_operator_quasinorm(const SampledFunction& f, int cutoff) {
  return weak_quasinorm(half_operator_singular_values(f, cutoff), 2.0);
}

MajorizationReport diagonal_majorization_check(const Eigen::MatrixXcd& t,
                                               const std::vector<std::vector<bool>>& blocks,
                                               double tolerance) {
  const Eigen::Index m = t.rows();
  std::vector<int> owner(static_cast<std::size_t>(m), -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].size() != static_cast<std::size_t>(m))
      throw Error(ErrorKind::GridMismatch, "block mask size differs from the matrix");
    for (Eigen::Index i = 0; i < m; ++i) {
      if (!blocks[b][static_cast<std::size_t>(i)]) continue;
      if (owner[static_cast<std::size_t>(i)] >= 0)
        throw Error(ErrorKind::InvalidInput, "block masks are not orthogonal");
      owner[static_cast<std::size_t>(i)] = static_cast<int>(b);
    }
  }
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      const int bi = owner[static_cast<std::size_t>(i)];
      if (bi >= 0 && bi == owner[static_cast<std::size_t>(j)]) s(i, j) = t(i, j);
    }
  const std::vector<double> mt = singular_values(t, false);
  const std::vector<double> ms = singular_values(s, false);
  MajorizationReport rep;
  const double slack = tolerance * (mt.empty() ? 0.0 : mt.front());
  double pt = 0.0;
  double ps = 0.0;
  rep.worst_prefix_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < mt.size(); ++k) {
    pt += mt[k];
    ps += ms[k];
    rep.worst_prefix_excess = std::max(rep.worst_prefix_excess, ps - pt);
    if (ps > pt + slack * static_cast<double>(k + 1)) rep.prefix_sums_dominated = false;
  }
  if (mt.empty()) rep.worst_prefix_excess = 0.0;
  rep.s_2inf = weak_quasinorm(ms, 2.0);
  rep.t_2inf = weak_quasinorm(mt, 2.0);
  rep.two_infinity_bound = rep.s_2inf <= 2.0 * rep.t_2inf + slack;
  return rep;
}

double weak_holder_violation(const Eigen::MatrixXcd& t, const Eigen::MatrixXcd& s) {
  const std::vector<double> mt = singular_values(t, false);
  const std::vector<double> ms = singular_values(s, false);
  const std::vector<double> mts = singular_values(t * s, false);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; 2 * n < mts.size(); ++n)
    worst = std::max(worst, mts[2 * n] - mt[n] * ms[n]);
  return worst;
}

BirmanSchwingerCounts birman_schwinger_count(const SampledFunction& f, double t, int cutoff) {
  require_nonnegative(f);
  if (!(t > 0.0)) throw Error(ErrorKind::InvalidInput, "t must be positive");
  const CwikelMatrix cw = assemble_cwikel(f, cutoff);
  BirmanSchwingerCounts out;
  const Eigen::VectorXd ev = hermitian_eigenvalues(cw.entries / t);
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > 1.0) ++out.cwikel;

  const CoefficientTable hat = fourier_coefficients(f, cutoff);
  const Eigen::Index m = cw.entries.rows();
  Eigen::MatrixXcd h(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const MultiIndex& mi = cw.lattice[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m; ++j) {
      const MultiIndex& nj = cw.lattice[static_cast<std::size_t>(j)];
      std::complex<double> b = hat.at({mi[0] - nj[0], mi[1] - nj[1], mi[2] - nj[2]}) / t;
      if (cw.real) b = b.real();
      h(i, j) = -b;
    }
    const double wi = cw.weight(static_cast<std::size_t>(i));
    h(i, i) += 1.0 / (wi * wi);
  }
  const Eigen::VectorXd eh = hermitian_eigenvalues(h);
  for (Eigen::Index i = 0; i < eh.size(); ++i)
    if (eh(i) < 0.0) ++out.schrodinger;
  return out;
}

}  // namespace cwikel
