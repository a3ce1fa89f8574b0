#include "cwikel/covering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <numbers>
#include <optional>

#include "cwikel/error.hpp"

namespace cwikel {

namespace {

double wrap01(double x) noexcept {
  const double w = x - std::floor(x);
  return w >= 1.0 ? 0.0 : w;
}

double circular_distance(double a, double b) noexcept {
  const double d = std::abs(wrap01(a - b));
  return std::min(d, 1.0 - d);
}

struct Interval {
  double lo;
  double hi;
};

// Pieces of the closed arc [c - s/2, c + s/2] (mod 1) inside [a, b], with
// a, b in [0, 1].
void arc_pieces(double c, double s, double a, double b, std::vector<Interval>& out) {
  out.clear();
  if (s >= 1.0) {
    out.push_back({a, b});
    return;
  }
  const double lo = c - 0.5 * s;
  const double hi = c + 0.5 * s;
  for (int shift = -2; shift <= 2; ++shift) {
    const double l = std::max(lo + shift, a);
    const double h = std::min(hi + shift, b);
    if (h > l) out.push_back({l, h});
  }
}

// Per-axis overlap fractions of the arc with each grid cell.
std::vector<std::pair<int, double>> axis_overlaps(double c, double s, int r) {
  std::vector<std::pair<int, double>> out;
  if (s >= 1.0) {
    out.reserve(r);
    for (int j = 0; j < r; ++j) out.emplace_back(j, 1.0);
    return out;
  }
  const double lo = (c - 0.5 * s) * r;
  const double hi = (c + 0.5 * s) * r;
  const long first = static_cast<long>(std::floor(lo));
  const long last = static_cast<long>(std::ceil(hi)) - 1;
  for (long j = first; j <= last; ++j) {
    const double ov = std::min(hi, static_cast<double>(j + 1)) - std::max(lo, static_cast<double>(j));
    if (ov <= 0.0) continue;
    const int cell = static_cast<int>(((j % r) + r) % r);
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& p) { return p.first == cell; });
    if (it == out.end())
      out.emplace_back(cell, std::min(ov, 1.0));
    else
      it->second = std::min(1.0, it->second + ov);
  }
  return out;
}

TorusCube make_cube(int dim, const Point& center, double side) {
  TorusCube c;
  c.dim = dim;
  c.side = side;
  for (int a = 0; a < dim; ++a) c.center[a] = wrap01(center[a]);
  return c;
}

// Incremental per-cell coverage bookkeeping used by the greedy construction.
class CellCoverage {
 public:
  explicit CellCoverage(const SampledFunction& f)
      : f_(f), r_(f.resolution()), dim_(f.dim()), lists_(f.size()), covered_(f.size(), false) {}

  void add(std::size_t cube_index, const TorusCube& cube, const Region& region) {
    for (const auto& cf : region) lists_[cf.cell].push_back(cube_index);
    for (const auto& cf : region)
      if (!covered_[cf.cell] && cell_covered(cf.cell, cubes_ref(), -1)) {
        covered_[cf.cell] = true;
        ++covered_count_;
      }
    (void)cube;
  }

  void bind(const std::vector<TorusCube>* cubes, const std::vector<bool>* alive) {
    cubes_ = cubes;
    alive_ = alive;
  }

  bool covered(std::size_t cell) const { return covered_[cell]; }
  std::size_t covered_count() const { return covered_count_; }
  bool all_covered() const { return covered_count_ == covered_.size(); }

  // True when the cell is covered by the live cubes other than `skip`.
  bool cell_covered(std::size_t cell, const std::vector<TorusCube>& cubes, long skip) const {
    return uncovered_point(cell, cubes, skip) == std::nullopt;
  }

  // A point of the cell not covered by the live cubes (other than `skip`).
  std::optional<Point> uncovered_point(std::size_t cell, const std::vector<TorusCube>& cubes,
                                       long skip) const {
    const MultiIndex idx = f_.multi_index(cell);
    std::array<double, kMaxDim> a{};
    std::array<double, kMaxDim> b{};
    for (int ax = 0; ax < dim_; ++ax) {
      a[ax] = static_cast<double>(idx[ax]) / r_;
      b[ax] = static_cast<double>(idx[ax] + 1) / r_;
    }
    struct Piece {
      std::array<Interval, kMaxDim> box;
    };
    std::vector<Piece> pieces;
    std::vector<Interval> tmp[kMaxDim];
    for (std::size_t k : lists_[cell]) {
      if (static_cast<long>(k) == skip || !(*alive_)[k]) continue;
      const TorusCube& q = cubes[k];
      bool empty = false;
      for (int ax = 0; ax < dim_; ++ax) {
        arc_pieces(q.center[ax], q.side, a[ax], b[ax], tmp[ax]);
        if (tmp[ax].empty()) empty = true;
      }
      if (empty) continue;
      // Expand the product of per-axis pieces.
      std::array<std::size_t, kMaxDim> counter{0, 0, 0};
      while (true) {
        Piece p;
        for (int ax = 0; ax < dim_; ++ax) p.box[ax] = tmp[ax][counter[ax]];
        pieces.push_back(p);
        int ax = 0;
        for (; ax < dim_; ++ax) {
          if (++counter[ax] < tmp[ax].size()) break;
          counter[ax] = 0;
        }
        if (ax == dim_) break;
      }
    }
    // Coordinate compression inside the cell.
    std::array<std::vector<double>, kMaxDim> breaks;
    for (int ax = 0; ax < dim_; ++ax) {
      breaks[ax] = {a[ax], b[ax]};
      for (const auto& p : pieces) {
        breaks[ax].push_back(p.box[ax].lo);
        breaks[ax].push_back(p.box[ax].hi);
      }
      std::sort(breaks[ax].begin(), breaks[ax].end());
      breaks[ax].erase(std::unique(breaks[ax].begin(), breaks[ax].end()), breaks[ax].end());
    }
    std::array<std::size_t, kMaxDim> counter{0, 0, 0};
    while (true) {
      Point mid{0.0, 0.0, 0.0};
      for (int ax = 0; ax < dim_; ++ax)
        mid[ax] = 0.5 * (breaks[ax][counter[ax]] + breaks[ax][counter[ax] + 1]);
      bool inside = false;
      for (const auto& p : pieces) {
        bool in = true;
        for (int ax = 0; ax < dim_ && in; ++ax)
          in = mid[ax] >= p.box[ax].lo && mid[ax] <= p.box[ax].hi;
        if (in) {
          inside = true;
          break;
        }
      }
      if (!inside) return mid;
      int ax = 0;
      for (; ax < dim_; ++ax) {
        if (++counter[ax] + 1 < breaks[ax].size()) break;
        counter[ax] = 0;
      }
      if (ax == dim_) break;
    }
    return std::nullopt;
  }

  const std::vector<std::size_t>& cubes_at(std::size_t cell) const { return lists_[cell]; }

 private:
  const std::vector<TorusCube>& cubes_ref() const { return *cubes_; }

  const SampledFunction& f_;
  int r_;
  int dim_;
  std::vector<std::vector<std::size_t>> lists_;
  std::vector<bool> covered_;
  std::size_t covered_count_ = 0;
  const std::vector<TorusCube>* cubes_ = nullptr;
  const std::vector<bool>* alive_ = nullptr;
};

// Exact multiplicity of a cube collection on the compressed grid spanned by
// all cube faces.
struct CompressedCoverage {
  std::array<std::vector<double>, kMaxDim> breaks;
  std::vector<int> multiplicity;
  int dim = 1;

  std::size_t extent(int ax) const { return breaks[ax].size() - 1; }
};

CompressedCoverage compressed_coverage(const std::vector<TorusCube>& cubes, int dim) {
  CompressedCoverage cc;
  cc.dim = dim;
  for (int ax = 0; ax < dim; ++ax) {
    auto& br = cc.breaks[ax];
    br = {0.0, 1.0};
    for (const auto& q : cubes) {
      if (q.side >= 1.0) continue;
      br.push_back(wrap01(q.center[ax] - 0.5 * q.side));
      br.push_back(wrap01(q.center[ax] + 0.5 * q.side));
    }
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
  }
  std::array<std::size_t, kMaxDim> ext{1, 1, 1};
  std::size_t total = 1;
  for (int ax = 0; ax < dim; ++ax) {
    ext[ax] = cc.extent(ax);
    total *= ext[ax];
  }
  // Difference array with one extra slot per axis.
  std::array<std::size_t, kMaxDim> dext{1, 1, 1};
  std::size_t dtotal = 1;
  for (int ax = 0; ax < dim; ++ax) {
    dext[ax] = ext[ax] + 1;
    dtotal *= dext[ax];
  }
  std::vector<int> diff(dtotal, 0);
  auto dflat = [&](const std::array<std::size_t, kMaxDim>& i) {
    std::size_t f = 0;
    for (int ax = 0; ax < dim; ++ax) f = f * dext[ax] + i[ax];
    return f;
  };
  auto index_of = [&](int ax, double x) {
    const auto& br = cc.breaks[ax];
    return static_cast<std::size_t>(std::lower_bound(br.begin(), br.end(), x) - br.begin());
  };
  for (const auto& q : cubes) {
    std::array<std::vector<std::pair<std::size_t, std::size_t>>, kMaxDim> ranges;
    for (int ax = 0; ax < dim; ++ax) {
      if (q.side >= 1.0) {
        ranges[ax].push_back({0, ext[ax]});
        continue;
      }
      const double lo = wrap01(q.center[ax] - 0.5 * q.side);
      const double hi = wrap01(q.center[ax] + 0.5 * q.side);
      const std::size_t il = index_of(ax, lo);
      const std::size_t ih = index_of(ax, hi);
      if (lo < hi) {
        ranges[ax].push_back({il, ih});
      } else if (lo > hi) {
        ranges[ax].push_back({il, ext[ax]});
        ranges[ax].push_back({0, ih});
      } else if (q.side > 0.5) {
        ranges[ax].push_back({0, ext[ax]});
      }
    }
    // Add +1 on every product of ranges via inclusion-exclusion corners.
    std::array<std::size_t, kMaxDim> counter{0, 0, 0};
    bool empty = false;
    for (int ax = 0; ax < dim; ++ax)
      if (ranges[ax].empty()) empty = true;
    if (empty) continue;
    while (true) {
      for (int corner = 0; corner < (1 << dim); ++corner) {
        std::array<std::size_t, kMaxDim> pos{0, 0, 0};
        int sign = 1;
        for (int ax = 0; ax < dim; ++ax) {
          const auto& rg = ranges[ax][counter[ax]];
          if (corner & (1 << ax)) {
            pos[ax] = rg.second;
            sign = -sign;
          } else {
            pos[ax] = rg.first;
          }
        }
        diff[dflat(pos)] += sign;
      }
      int ax = 0;
      for (; ax < dim; ++ax) {
        if (++counter[ax] < ranges[ax].size()) break;
        counter[ax] = 0;
      }
      if (ax == dim) break;
    }
  }
  // Prefix sums along each axis.
  for (int ax = 0; ax < dim; ++ax) {
    std::size_t stride = 1;
    for (int b = dim - 1; b > ax; --b) stride *= dext[b];
    for (std::size_t i = 0; i < dtotal; ++i) {
      const std::size_t coord = (i / stride) % dext[ax];
      if (coord > 0) diff[i] += diff[i - stride];
    }
  }
  cc.multiplicity.assign(total, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::array<std::size_t, kMaxDim> i{0, 0, 0};
    std::size_t rem = flat;
    for (int ax = dim - 1; ax >= 0; --ax) {
      i[ax] = rem % ext[ax];
      rem /= ext[ax];
    }
    cc.multiplicity[flat] = diff[dflat(i)];
  }
  return cc;
}

}  // namespace

double TorusCube::measure() const noexcept { return std::pow(std::min(side, 1.0), dim); }

bool TorusCube::contains(const Point& p) const noexcept {
  if (side >= 1.0) return true;
  for (int a = 0; a < dim; ++a)
    if (circular_distance(p[a], center[a]) > 0.5 * side) return false;
  return true;
}

Point normalized_coordinates(const SampledFunction& f, std::size_t cell) noexcept {
  const MultiIndex idx = f.multi_index(cell);
  Point p{0.0, 0.0, 0.0};
  for (int a = 0; a < f.dim(); ++a) p[a] = (idx[a] + 0.5) / f.resolution();
  return p;
}

Region cube_region(const SampledFunction& f, const TorusCube& cube) {
  if (cube.dim != f.dim()) throw Error(ErrorKind::GridMismatch, "cube and grid dimensions differ");
  const int r = f.resolution();
  std::array<std::vector<std::pair<int, double>>, kMaxDim> axes;
  for (int a = 0; a < f.dim(); ++a) axes[a] = axis_overlaps(cube.center[a], cube.side, r);
  Region region;
  std::size_t count = 1;
  for (int a = 0; a < f.dim(); ++a) count *= axes[a].size();
  region.reserve(count);
  std::array<std::size_t, kMaxDim> counter{0, 0, 0};
  if (count == 0) return region;
  while (true) {
    MultiIndex idx{0, 0, 0};
    double frac = 1.0;
    for (int a = 0; a < f.dim(); ++a) {
      idx[a] = axes[a][counter[a]].first;
      frac *= axes[a][counter[a]].second;
    }
    region.push_back({f.flat_index(idx), frac});
    int a = f.dim() - 1;
    for (; a >= 0; --a) {
      if (++counter[a] < axes[a].size()) break;
      counter[a] = 0;
    }
    if (a < 0) break;
  }
  return region;
}

bool cubes_overlap(const TorusCube& a, const TorusCube& b) noexcept {
  for (int ax = 0; ax < a.dim; ++ax)
    if (!(circular_distance(a.center[ax], b.center[ax]) < 0.5 * (a.side + b.side))) return false;
  return true;
}

double j_functional(const SampledFunction& f, const TorusCube& cube, const OrliczGauge& gauge) {
  const Region region = cube_region(f, cube);
  return j_functional(f, region, gauge);
}

CubeBudget cube_radius_for_budget(const SampledFunction& f, const Point& center, double target,
                                  double tolerance) {
  if (f.domain().kind != DomainKind::Torus)
    throw Error(ErrorKind::InvalidInput, "coverings live on the torus");
  if (!(target > 0.0)) throw Error(ErrorKind::InvalidInput, "target must be positive");
  auto j_at = [&](double side) { return j_functional(f, make_cube(f.dim(), center, side)); };

  const double j_full = j_at(1.0);
  if (j_full == 0.0) {
    bool any = std::any_of(f.values().begin(), f.values().end(), [](double v) { return v != 0.0; });
    if (!any) throw Error(ErrorKind::ZeroFunction, "f vanishes identically");
  }
  if (j_full < target * (1.0 - tolerance)) return {1.0, j_full, true};
  if (j_full <= target * (1.0 + tolerance)) return {1.0, j_full, false};

  // J is nondecreasing in the side (nested cubes), so {J >= target} = [t*, 1].
  double lo = 0.0;
  double hi = 1.0;
  double j_hi = j_full;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double j_mid = j_at(mid);
    if (j_mid >= target) {
      hi = mid;
      j_hi = j_mid;
    } else {
      lo = mid;
    }
    if (j_hi <= target * (1.0 + tolerance) || hi - lo <= 1e-15) break;
  }
  return {hi, j_hi, false};
}

std::vector<std::vector<std::size_t>> besicovitch_select(const std::vector<TorusCube>& cubes) {
  std::vector<std::vector<std::size_t>> families;
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    bool placed = false;
    for (auto& fam : families) {
      const bool clash = std::any_of(fam.begin(), fam.end(),
                                     [&](std::size_t j) { return cubes_overlap(cubes[i], cubes[j]); });
      if (!clash) {
        fam.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) families.push_back({i});
  }
  return families;
}

Covering build_equal_j_covering(const SampledFunction& f, int n, const CoveringOptions& options) {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "n must be positive");
  if (f.domain().kind != DomainKind::Torus)
    throw Error(ErrorKind::InvalidInput, "coverings live on the torus");
  const double norm = orlicz_norm(decreasing_rearrangement(f));
  if (norm == 0.0) throw Error(ErrorKind::ZeroFunction, "f vanishes identically");

  Covering cov;
  cov.target = norm / n;

  std::vector<TorusCube> cubes;
  std::vector<double> j_values;
  std::vector<bool> saturated;
  std::vector<bool> alive;
  CellCoverage coverage(f);
  coverage.bind(&cubes, &alive);

  auto add_cube_with = [&](const Point& center, const CubeBudget& b) {
    cubes.push_back(make_cube(f.dim(), center, b.side));
    j_values.push_back(b.j_value);
    saturated.push_back(b.saturated);
    alive.push_back(true);
    coverage.add(cubes.size() - 1, cubes.back(), cube_region(f, cubes.back()));
  };
  auto add_cube = [&](const Point& center) {
    add_cube_with(center, cube_radius_for_budget(f, center, cov.target, options.tolerance));
  };

  // Among grid-point centers whose cube still contains x, take the one that
  // covers the most uncovered measure; ties go to the smallest shift.
  const int r = f.resolution();
  auto cover_cell = [&](std::size_t cell) {
    const Point x = normalized_coordinates(f, cell);
    const CubeBudget at_x = cube_radius_for_budget(f, x, cov.target, options.tolerance);
    const int reach = static_cast<int>(std::floor(0.5 * at_x.side * r));
    if (options.search_steps <= 0 || reach == 0) {
      add_cube_with(x, at_x);
      return;
    }
    std::vector<int> shifts{0};
    const int stride = std::max(1, (reach + options.search_steps - 1) / options.search_steps);
    for (int k = stride; k < reach; k += stride) {
      shifts.push_back(-k);
      shifts.push_back(k);
    }
    shifts.push_back(-reach);
    shifts.push_back(reach);

    auto gain_of = [&](const TorusCube& q) {
      double g = 0.0;
      for (const auto& cf : cube_region(f, q))
        if (!coverage.covered(cf.cell)) g += cf.fraction;
      return g;
    };
    Point best_center = x;
    CubeBudget best = at_x;
    double best_gain = gain_of(make_cube(f.dim(), x, at_x.side));
    long best_shift = 0;
    const int dim = f.dim();
    std::array<std::size_t, kMaxDim> counter{0, 0, 0};
    while (true) {
      long shift2 = 0;
      Point c = x;
      for (int a = 0; a < dim; ++a) {
        const int s = shifts[counter[a]];
        c[a] = x[a] + static_cast<double>(s) / r;
        shift2 += static_cast<long>(s) * s;
      }
      if (shift2 > 0) {
        const CubeBudget b = cube_radius_for_budget(f, c, cov.target, options.tolerance);
        const TorusCube q = make_cube(dim, c, b.side);
        if (q.contains(x)) {
          const double g = gain_of(q);
          if (g > best_gain * (1.0 + 1e-12) ||
              (g >= best_gain * (1.0 - 1e-12) && shift2 < best_shift)) {
            best_gain = g;
            best_center = c;
            best = b;
            best_shift = shift2;
          }
        }
      }
      int a = 0;
      for (; a < dim; ++a) {
        if (++counter[a] < shifts.size()) break;
        counter[a] = 0;
      }
      if (a == dim) break;
    }
    add_cube_with(best_center, best);
  };

  // Candidate centers: grid points by decreasing |f|, ties by index.
  std::vector<std::size_t> order(f.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(f[a]) > std::abs(f[b]);
  });
  for (std::size_t cell : order) {
    if (coverage.all_covered()) break;
    if (coverage.covered(cell)) continue;
    cover_cell(cell);
  }
  // Cubes smaller than a cell can leave slivers; seed extra centers inside
  // the uncovered parts.
  for (int round = 0; round < 16 && !coverage.all_covered(); ++round) {
    for (std::size_t cell = 0; cell < f.size(); ++cell) {
      if (coverage.covered(cell)) continue;
      auto p = coverage.uncovered_point(cell, cubes, -1);
      if (p) add_cube(*p);
    }
  }

  if (options.prune) {
    for (std::size_t k = cubes.size(); k-- > 0;) {
      const Region region = cube_region(f, cubes[k]);
      bool redundant = true;
      for (const auto& cf : region) {
        if (cf.fraction <= 0.0) continue;
        if (!coverage.cell_covered(cf.cell, cubes, static_cast<long>(k))) {
          redundant = false;
          break;
        }
      }
      if (redundant) alive[k] = false;
    }
  }

  for (std::size_t k = 0; k < cubes.size(); ++k) {
    if (!alive[k]) continue;
    cov.cubes.push_back(cubes[k]);
    cov.j_values.push_back(j_values[k]);
    cov.saturated.push_back(saturated[k]);
  }
  cov.families = besicovitch_select(cov.cubes);
  return cov;
}

int pointwise_multiplicity(const std::vector<TorusCube>& cubes, const Point& p) {
  return static_cast<int>(
      std::count_if(cubes.begin(), cubes.end(), [&](const TorusCube& q) { return q.contains(p); }));
}

CoveringReport verify_covering(const SampledFunction& f, const Covering& cov, int n) {
  CoveringReport rep;
  rep.cube_count = cov.cubes.size();
  rep.cubes_per_n = n > 0 ? static_cast<double>(cov.cubes.size()) / n : 0.0;
  if (cov.cubes.empty()) return rep;

  const int dim = f.dim();
  const CompressedCoverage cc = compressed_coverage(cov.cubes, dim);
  std::array<std::size_t, kMaxDim> ext{1, 1, 1};
  for (int ax = 0; ax < dim; ++ax) ext[ax] = cc.extent(ax);
  double covered = 0.0;
  bool complete = true;
  for (std::size_t flat = 0; flat < cc.multiplicity.size(); ++flat) {
    std::size_t rem = flat;
    double vol = 1.0;
    for (int ax = dim - 1; ax >= 0; --ax) {
      const std::size_t i = rem % ext[ax];
      rem /= ext[ax];
      vol *= cc.breaks[ax][i + 1] - cc.breaks[ax][i];
    }
    const int m = cc.multiplicity[flat];
    rep.max_multiplicity = std::max(rep.max_multiplicity, m);
    if (m > 0)
      covered += vol;
    else
      complete = false;
  }
  rep.coverage = complete ? 1.0 : covered;
  rep.complete = complete;

  for (std::size_t k = 0; k < cov.cubes.size(); ++k) {
    if (k < cov.saturated.size() && cov.saturated[k]) continue;
    const double j = j_functional(f, cov.cubes[k]);
    rep.max_relative_deviation =
        std::max(rep.max_relative_deviation, std::abs(j - cov.target) / cov.target);
  }

  const auto families = cov.families.empty() ? besicovitch_select(cov.cubes) : cov.families;
  rep.family_count = families.size();
  for (const auto& fam : families)
    for (std::size_t a = 0; a < fam.size(); ++a)
      for (std::size_t b = a + 1; b < fam.size(); ++b)
        if (cubes_overlap(cov.cubes[fam[a]], cov.cubes[fam[b]])) rep.families_disjoint = false;
  return rep;
}

}  // namespace cwikel
