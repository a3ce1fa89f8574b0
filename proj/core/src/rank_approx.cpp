#include "cwikel/rank_approx.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "cwikel/error.hpp"
#include "cwikel/parallel.hpp"
#include "fft.hpp"

namespace cwikel {

namespace {

int max_degree(int dim) { return (dim + 1) / 2 - 1; }

std::vector<MultiIndex> monomials_below(int dim) {
  const int top = max_degree(dim);
  std::vector<MultiIndex> out;
  for (int deg = 0; deg <= top; ++deg) {
    MultiIndex e{0, 0, 0};
    // Enumerate exponents of total degree deg in lexicographic order.
    std::function<void(int, int)> rec = [&](int axis, int left) {
      if (axis == dim - 1) {
        e[axis] = left;
        out.push_back(e);
        return;
      }
      for (int k = left; k >= 0; --k) {
        e[axis] = k;
        rec(axis + 1, left - k);
      }
    };
    rec(0, deg);
  }
  return out;
}

double wrapped_offset(double p, double c) {
  double d = p - c;
  d -= std::floor(d + 0.5);
  return d;
}

void require_same_grid(const SampledFunction& a, int dim, int resolution, const Domain& domain) {
  if (a.dim() != dim || a.resolution() != resolution || !(a.domain() == domain))
    throw Error(ErrorKind::GridMismatch, "function and operator live on different grids");
}

// Cells whose centers lie in the cube, in local row-major order starting from
// the low face of the cube on every axis.
struct Patch {
  std::array<int, kMaxDim> extent{1, 1, 1};
  std::vector<std::size_t> cells;
};

Patch cube_patch(const SampledFunction& grid, const TorusCube& cube) {
  const int r = grid.resolution();
  std::array<std::vector<int>, kMaxDim> axis_cells;
  for (int a = 0; a < grid.dim(); ++a) {
    std::vector<std::pair<double, int>> found;
    const double lo = cube.center[a] - 0.5 * std::min(cube.side, 1.0);
    for (int j = 0; j < r; ++j) {
      const double p = (j + 0.5) / r;
      if (cube.side >= 1.0 ||
          std::abs(wrapped_offset(p, cube.center[a])) <= 0.5 * cube.side) {
        double key = p - lo;
        key -= std::floor(key);
        found.emplace_back(key, j);
      }
    }
    std::sort(found.begin(), found.end());
    for (const auto& kv : found) axis_cells[a].push_back(kv.second);
  }
  Patch patch;
  std::size_t total = 1;
  for (int a = 0; a < grid.dim(); ++a) {
    patch.extent[a] = static_cast<int>(axis_cells[a].size());
    total *= axis_cells[a].size();
  }
  patch.cells.reserve(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    MultiIndex idx{0, 0, 0};
    for (int a = grid.dim() - 1; a >= 0; --a) {
      idx[a] = axis_cells[a][rem % patch.extent[a]];
      rem /= patch.extent[a];
    }
    patch.cells.push_back(grid.flat_index(idx));
  }
  return patch;
}

HomSeminorm gagliardo_1d(const std::vector<double>& v, double h) {
  HomSeminorm out;
  const std::size_t m = v.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const double gap = static_cast<double>(j - i);
      const double diff = v[i] - v[j];
      sum += diff * diff / (gap * gap);
    }
  // h^2 weights cancel the |x - y|^2 = (gap h)^2 kernel.
  out.squared = 2.0 * sum;
  double band = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double du = 0.0;
    if (m >= 3) {
      if (i == 0)
        du = (v[1] - v[0]) / h;
      else if (i + 1 == m)
        du = (v[m - 1] - v[m - 2]) / h;
      else
        du = (v[i + 1] - v[i - 1]) / (2.0 * h);
    } else if (m == 2) {
      du = (v[1] - v[0]) / h;
    }
    band += du * du * h;
  }
  out.band_estimate = 2.0 * h * band;
  return out;
}

double gradient_energy_2d(const std::vector<double>& v, int n0, int n1, double h) {
  auto at = [&](int i, int j) { return v[static_cast<std::size_t>(i) * n1 + j]; };
  auto diff = [&](int len, int k, auto get) {
    if (len < 2) return 0.0;
    if (k == 0) return (get(1) - get(0)) / h;
    if (k == len - 1) return (get(len - 1) - get(len - 2)) / h;
    return (get(k + 1) - get(k - 1)) / (2.0 * h);
  };
  double sum = 0.0;
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j) {
      const double gx = diff(n0, i, [&](int k) { return at(k, j); });
      const double gy = diff(n1, j, [&](int k) { return at(i, k); });
      sum += (gx * gx + gy * gy) * h * h;
    }
  return sum;
}

double spectral_gradient_energy_2d(const SampledFunction& u) {
  const auto hat = detail::forward_dft(u);
  const int r = u.resolution();
  const double m = static_cast<double>(u.size());
  double sum = 0.0;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      const double k0 = detail::signed_frequency(i, r);
      const double k1 = detail::signed_frequency(j, r);
      const double mag = std::norm(hat[static_cast<std::size_t>(i) * r + j]) / (m * m);
      sum += (k0 * k0 + k1 * k1) * mag;
    }
  const double side = 2.0 * u.domain().half_width;
  return side * side * sum;
}

}  // namespace

int polynomial_space_dimension(int dim) {
  return static_cast<int>(monomials_below(dim).size());
}

CellProjector::CellProjector(const SampledFunction& grid, const TorusCube& cube)
    : cube_(cube), monomials_(monomials_below(grid.dim())) {
  for (const auto& cf : cube_region(grid, cube))
    if (cf.fraction > 0.0) nodes_.push_back(cf);
  const std::size_t q = nodes_.size();
  const std::size_t p = monomials_.size();
  if (q < p) throw Error(ErrorKind::DegenerateCube, "cube meets fewer cells than basis functions");
  weights_.resize(q);
  Eigen::MatrixXd mono(p, q);
  for (std::size_t i = 0; i < q; ++i) {
    weights_[i] = nodes_[i].fraction * grid.cell_measure();
    mono.col(static_cast<Eigen::Index>(i)) = monomial_values(local_coordinates(grid, nodes_[i].cell));
  }
  // Modified Gram-Schmidt with one reorthogonalization pass, tracking the
  // monomial coefficients of every basis function.
  basis_.resize(p, q);
  coeffs_ = Eigen::MatrixXd::Zero(p, p);
  const Eigen::Map<const Eigen::VectorXd> w(weights_.data(), static_cast<Eigen::Index>(q));
  for (std::size_t j = 0; j < p; ++j) {
    Eigen::RowVectorXd v = mono.row(static_cast<Eigen::Index>(j));
    Eigen::RowVectorXd c = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(p));
    c(static_cast<Eigen::Index>(j)) = 1.0;
    const double start = std::sqrt((v.array().square() * w.transpose().array()).sum());
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t k = 0; k < j; ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        const double dot = (v.array() * basis_.row(kk).array() * w.transpose().array()).sum();
        v -= dot * basis_.row(kk);
        c -= dot * coeffs_.row(kk);
      }
    const double norm = std::sqrt((v.array().square() * w.transpose().array()).sum());
    if (!(norm > 1e-10 * std::max(start, 1e-300)))
      throw Error(ErrorKind::DegenerateCube, "quadrature nodes do not resolve the polynomial space");
    basis_.row(static_cast<Eigen::Index>(j)) = v / norm;
    coeffs_.row(static_cast<Eigen::Index>(j)) = c / norm;
  }
}

Eigen::VectorXd CellProjector::local_coordinates(const SampledFunction& grid,
                                                 std::size_t cell) const {
  const Point p = normalized_coordinates(grid, cell);
  Eigen::VectorXd x(grid.dim());
  const double side = std::min(cube_.side, 1.0);
  for (int a = 0; a < grid.dim(); ++a) x(a) = wrapped_offset(p[a], cube_.center[a]) / side;
  return x;
}

Eigen::VectorXd CellProjector::monomial_values(const Eigen::VectorXd& local) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(monomials_.size()));
  for (std::size_t m = 0; m < monomials_.size(); ++m) {
    double v = 1.0;
    for (Eigen::Index a = 0; a < local.size(); ++a) v *= std::pow(local(a), monomials_[m][a]);
    out(static_cast<Eigen::Index>(m)) = v;
  }
  return out;
}

Eigen::VectorXd CellProjector::coefficients_at_nodes(const Eigen::VectorXd& node_values) const {
  const Eigen::Map<const Eigen::VectorXd> w(weights_.data(),
                                            static_cast<Eigen::Index>(weights_.size()));
  return basis_ * node_values.cwiseProduct(w);
}

Eigen::VectorXd CellProjector::coefficients(const SampledFunction& u) const {
  Eigen::VectorXd vals(static_cast<Eigen::Index>(nodes_.size()));
  for (std::size_t i = 0; i < nodes_.size(); ++i) vals(static_cast<Eigen::Index>(i)) = u[nodes_[i].cell];
  return coefficients_at_nodes(vals);
}

double CellProjector::evaluate(const Eigen::VectorXd& coeffs, const SampledFunction& grid,
                               std::size_t cell) const {
  const Eigen::VectorXd mono = monomial_values(local_coordinates(grid, cell));
  return coeffs.dot(coeffs_ * mono);
}

Eigen::VectorXd CellProjector::project_at_nodes(const SampledFunction& u) const {
  return basis_.transpose() * coefficients(u);
}

double CellProjector::orthonormality_defect() const {
  const Eigen::Map<const Eigen::VectorXd> w(weights_.data(),
                                            static_cast<Eigen::Index>(weights_.size()));
  const Eigen::MatrixXd gram = basis_ * w.asDiagonal() * basis_.transpose();
  return (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

CellProjector poly_projector(const SampledFunction& grid, const TorusCube& cube) {
  if (cube.dim != grid.dim()) throw Error(ErrorKind::GridMismatch, "cube and grid dimensions differ");
  if (!(cube.side > 0.0)) throw Error(ErrorKind::DegenerateCube, "cube side must be positive");
  return CellProjector(grid, cube);
}

std::size_t FiniteRankOperator::rank_bound() const noexcept {
  std::size_t r = 0;
  for (const auto& c : cells) r += c.projector.dimension();
  return r;
}

FiniteRankOperator make_finite_rank_operator(const SampledFunction& grid,
                                             const std::vector<TorusCube>& cubes) {
  if (grid.domain().kind != DomainKind::Torus)
    throw Error(ErrorKind::InvalidInput, "finite-rank operators live on the torus");
  const std::size_t none = cubes.size();
  std::vector<std::size_t> first_hit(grid.size(), none);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point p = normalized_coordinates(grid, i);
    for (std::size_t k = 0; k < cubes.size(); ++k)
      if (cubes[k].contains(p)) {
        first_hit[i] = k;
        break;
      }
    if (first_hit[i] == none) throw Error(ErrorKind::InvalidInput, "cubes do not cover every cell");
  }
  std::vector<std::vector<std::size_t>> deltas(cubes.size());
  for (std::size_t i = 0; i < grid.size(); ++i) deltas[first_hit[i]].push_back(i);

  std::vector<std::size_t> used;
  for (std::size_t k = 0; k < cubes.size(); ++k)
    if (!deltas[k].empty()) used.push_back(k);

  FiniteRankOperator op;
  op.dim = grid.dim();
  op.resolution = grid.resolution();
  op.domain = grid.domain();
  op.cells.resize(used.size());
  parallel_for(used.size(), [&](std::size_t j) {
    op.cells[j].projector = poly_projector(grid, cubes[used[j]]);
    op.cells[j].delta = deltas[used[j]];
  });
  op.owner.assign(grid.size(), 0);
  for (std::size_t j = 0; j < op.cells.size(); ++j)
    for (std::size_t i : op.cells[j].delta) op.owner[i] = j;
  return op;
}

FiniteRankOperator build_Kn(const SampledFunction& f, int n, const CoveringOptions& options) {
  const Covering cov = build_equal_j_covering(f, n, options);
  return make_finite_rank_operator(f, cov.cubes);
}

SampledFunction apply_Kn(const FiniteRankOperator& k, const SampledFunction& u) {
  require_same_grid(u, k.dim, k.resolution, k.domain);
  SampledFunction out = SampledFunction::zeros_like(u);
  parallel_for(k.cells.size(), [&](std::size_t j) {
    const auto& cell = k.cells[j];
    const Eigen::VectorXd c = cell.projector.coefficients(u);
    for (std::size_t i : cell.delta) out[i] = cell.projector.evaluate(c, u, i);
  });
  return out;
}

double cellwise_idempotence_defect(const FiniteRankOperator& k, const SampledFunction& u) {
  require_same_grid(u, k.dim, k.resolution, k.domain);
  std::vector<double> defects(k.cells.size(), 0.0);
  parallel_for(k.cells.size(), [&](std::size_t j) {
    const auto& p = k.cells[j].projector;
    const Eigen::VectorXd once = p.project_at_nodes(u);
    const Eigen::VectorXd twice = p.basis().transpose() * p.coefficients_at_nodes(once);
    defects[j] = (twice - once).cwiseAbs().maxCoeff();
  });
  return defects.empty() ? 0.0 : *std::max_element(defects.begin(), defects.end());
}

double residual_orthogonality_defect(const FiniteRankOperator& k, const SampledFunction& u) {
  require_same_grid(u, k.dim, k.resolution, k.domain);
  std::vector<double> defects(k.cells.size(), 0.0);
  parallel_for(k.cells.size(), [&](std::size_t j) {
    const auto& p = k.cells[j].projector;
    Eigen::VectorXd vals(static_cast<Eigen::Index>(p.nodes().size()));
    for (std::size_t q = 0; q < p.nodes().size(); ++q)
      vals(static_cast<Eigen::Index>(q)) = u[p.nodes()[q].cell];
    const Eigen::VectorXd residual = vals - p.project_at_nodes(u);
    defects[j] = p.coefficients_at_nodes(residual).cwiseAbs().maxCoeff();
  });
  return defects.empty() ? 0.0 : *std::max_element(defects.begin(), defects.end());
}

double weighted_error(const SampledFunction& f, const SampledFunction& u,
                      const FiniteRankOperator& k) {
  require_same_grid(f, k.dim, k.resolution, k.domain);
  for (double v : f.values())
    if (v < 0.0) throw Error(ErrorKind::NegativeWeight, "weight f must be nonnegative");
  const SampledFunction ku = apply_Kn(k, u);
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = u[i] - ku[i];
    sum += f[i] * d * d;
  }
  return sum * f.cell_measure();
}

double HomSeminorm::value() const { return std::sqrt(std::max(squared, 0.0)); }

HomSeminorm hom_seminorm_detail(const SampledFunction& u, const HomDomain& domain) {
  if (u.dim() >= 3)
    throw Error(ErrorKind::UnsupportedDimension, "homogeneous seminorms are evaluated for d <= 2");
  const double h = u.cell_width();
  if (domain.periodic && u.dim() == 2) return {spectral_gradient_energy_2d(u), 0.0};

  const TorusCube cube = domain.periodic ? HomDomain::box(u.dim()).cube : domain.cube;
  if (cube.dim != u.dim()) throw Error(ErrorKind::GridMismatch, "cube and grid dimensions differ");
  const Patch patch = cube_patch(u, cube);
  std::vector<double> v(patch.cells.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = u[patch.cells[i]];
  if (u.dim() == 1) return gagliardo_1d(v, h);
  return {gradient_energy_2d(v, patch.extent[0], patch.extent[1], h), 0.0};
}

double hom_seminorm(const SampledFunction& u, const HomDomain& domain) {
  return hom_seminorm_detail(u, domain).value();
}

SampledFunction random_band_limited(int dim, int resolution, int band, std::uint64_t seed) {
  if (dim < 1 || dim > 2) throw Error(ErrorKind::UnsupportedDimension, "band-limited fields for d <= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  struct Mode {
    int k0, k1;
    double a, b;
  };
  std::vector<Mode> modes;
  // One representative per pair {k, -k}.
  for (int k0 = 0; k0 <= band; ++k0)
    for (int k1 = (dim == 2 ? -band : 0); k1 <= (dim == 2 ? band : 0); ++k1) {
      if (k0 == 0 && k1 <= 0) continue;
      const double a = gauss(rng);
      const double b = gauss(rng);
      modes.push_back({k0, k1, a, b});
    }
  return SampledFunction::torus(dim, resolution, [&](const Point& x) {
    double s = 0.0;
    for (const auto& m : modes) {
      const double phase = m.k0 * x[0] + (dim == 2 ? m.k1 * x[1] : 0.0);
      s += m.a * std::cos(phase) + m.b * std::sin(phase);
    }
    return s;
  });
}

ComparisonProbe comparison_constant_probe(int dim, int trials, std::uint64_t seed, int resolution,
                                          int band) {
  if (dim < 1 || dim > 2) throw Error(ErrorKind::UnsupportedDimension, "probe defined for d <= 2");
  if (trials < 1) throw Error(ErrorKind::InvalidInput, "trials must be positive");
  ComparisonProbe probe;
  probe.trials = trials;
  std::vector<double> ratios(static_cast<std::size_t>(trials));
  parallel_for(ratios.size(), [&](std::size_t t) {
    const SampledFunction u = random_band_limited(dim, resolution, band, seed + t);
    double l2 = 0.0;
    for (double v : u.values()) l2 += v * v;
    l2 *= std::pow(u.cell_width(), dim);
    const double hom2 = hom_seminorm_detail(u, HomDomain::torus()).squared;
    ratios[t] = std::sqrt((l2 + hom2) / hom2);
  });
  probe.max_ratio = *std::max_element(ratios.begin(), ratios.end());
  probe.min_ratio = *std::min_element(ratios.begin(), ratios.end());
  return probe;
}

HolderCheck scaled_holder_check(const SampledFunction& f, const SampledFunction& u,
                                const TorusCube& cube) {
  if (!f.same_grid(u)) throw Error(ErrorKind::GridMismatch, "f and u live on different grids");
  const CellProjector p = poly_projector(u, cube);
  const Eigen::VectorXd c = p.coefficients(u);

  SampledFunction v = u;
  for (std::size_t i : cube_patch(u, cube).cells) v[i] = u[i] - p.evaluate(c, u, i);

  HolderCheck out;
  double scale = 0.0;
  for (const auto& node : p.nodes()) {
    const double d = u[node.cell] - p.evaluate(c, u, node.cell);
    out.lhs += std::abs(f[node.cell]) * d * d * node.fraction * f.cell_measure();
    scale = std::max(scale, std::abs(u[node.cell]));
  }
  out.hom_squared = hom_seminorm_detail(v, HomDomain::on(cube)).squared;
  if (!(out.hom_squared > 1e-20 * scale * scale))
    throw Error(ErrorKind::ZeroSeminorm, "u is a polynomial on the cube");
  out.j_value = j_functional(f, cube);
  out.ratio = out.lhs == 0.0 ? 0.0 : out.lhs / (out.j_value * out.hom_squared);
  return out;
}

}  // namespace cwikel
