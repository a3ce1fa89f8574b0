#include "cwikel/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cwikel/error.hpp"

namespace cwikel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

StepFunction::StepFunction(std::vector<double> ends, std::vector<double> values)
    : ends_(std::move(ends)), values_(std::move(values)) {
  if (ends_.size() != values_.size())
    throw Error(ErrorKind::InvalidInput, "step function needs one value per interval");
  double prev_end = 0.0;
  double prev_value = kInf;
  for (std::size_t i = 0; i < ends_.size(); ++i) {
    if (!(ends_[i] > prev_end))
      throw Error(ErrorKind::InvalidInput, "breakpoints must be strictly increasing and positive");
    if (!(values_[i] >= 0.0) || values_[i] > prev_value || std::isnan(values_[i]))
      throw Error(ErrorKind::InvalidInput, "values must be nonnegative and nonincreasing");
    if (std::isinf(ends_[i]) && i + 1 != ends_.size())
      throw Error(ErrorKind::InvalidInput, "only the last breakpoint may be infinite");
    prev_end = ends_[i];
    prev_value = values_[i];
  }
  while (!values_.empty() && values_.back() == 0.0) {
    values_.pop_back();
    ends_.pop_back();
  }
}

StepFunction StepFunction::from_atoms(std::vector<Atom> atoms) {
  std::erase_if(atoms, [](const Atom& a) { return !(a.measure > 0.0) || !(a.value != 0.0); });
  for (auto& a : atoms) a.value = std::abs(a.value);
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.value > b.value; });
  std::vector<double> ends;
  std::vector<double> values;
  double cursor = 0.0;
  for (const auto& a : atoms) {
    cursor += a.measure;
    if (!values.empty() && values.back() == a.value) {
      ends.back() = cursor;
    } else {
      ends.push_back(cursor);
      values.push_back(a.value);
    }
  }
  return StepFunction(std::move(ends), std::move(values));
}

StepFunction StepFunction::indicator(double length, double height) {
  if (length <= 0.0 || height == 0.0) return {};
  return StepFunction({length}, {std::abs(height)});
}

double StepFunction::operator()(double t) const noexcept {
  if (t < 0.0) return values_.empty() ? 0.0 : values_.front();
  auto it = std::upper_bound(ends_.begin(), ends_.end(), t);
  if (it == ends_.end()) return 0.0;
  return values_[static_cast<std::size_t>(it - ends_.begin())];
}

double StepFunction::integral(double t) const noexcept {
  double acc = 0.0;
  double start = 0.0;
  for (std::size_t i = 0; i < ends_.size() && start < t; ++i) {
    const double stop = std::min(ends_[i], t);
    acc += values_[i] * (stop - start);
    start = ends_[i];
  }
  return acc;
}

double StepFunction::level_measure(double s) const noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < ends_.size(); ++i)
    if (values_[i] > s) m = ends_[i];
  return m;
}

std::vector<Atom> StepFunction::atoms() const {
  std::vector<Atom> out;
  out.reserve(ends_.size());
  double start = 0.0;
  for (std::size_t i = 0; i < ends_.size(); ++i) {
    out.push_back({ends_[i] - start, values_[i]});
    start = ends_[i];
  }
  return out;
}

StepFunction StepFunction::truncated(double horizon) const {
  std::vector<double> ends;
  std::vector<double> values;
  for (std::size_t i = 0; i < ends_.size(); ++i) {
    const double start = i == 0 ? 0.0 : ends_[i - 1];
    if (start >= horizon) break;
    ends.push_back(std::min(ends_[i], horizon));
    values.push_back(values_[i]);
  }
  return StepFunction(std::move(ends), std::move(values));
}

StepFunction StepFunction::scaled(double c) const {
  if (c == 0.0) return {};
  std::vector<double> values(values_);
  for (double& v : values) v *= std::abs(c);
  return StepFunction(ends_, std::move(values));
}

double OrliczGauge::operator()(double t) const noexcept {
  switch (kind) {
    case GaugeKind::LLogL: return t * std::log(std::numbers::e + t);
    case GaugeKind::ExpL2: return std::expm1(t * t);
  }
  return 0.0;
}

double luxemburg_norm(std::span<const Atom> atoms, const OrliczGauge& gauge) {
  double vmax = 0.0;
  for (const auto& a : atoms) {
    if (!(a.measure > 0.0) || a.value == 0.0) continue;
    if (std::isinf(a.measure))
      throw Error(ErrorKind::NonIntegrable, "nonzero value on a set of infinite measure");
    vmax = std::max(vmax, std::abs(a.value));
  }
  if (vmax == 0.0) return 0.0;

  auto modular = [&](double lambda) {
    double acc = 0.0;
    for (const auto& a : atoms)
      if (a.measure > 0.0 && a.value != 0.0) acc += a.measure * gauge(std::abs(a.value) / lambda);
    return acc;
  };

  double hi = vmax;
  int guard = 0;
  while (modular(hi) > 1.0) {
    hi *= 2.0;
    if (++guard > 2000) throw Error(ErrorKind::NonIntegrable, "no finite Luxemburg gauge");
  }
  double lo = hi;
  guard = 0;
  do {
    lo *= 0.5;
    if (++guard > 2000) return 0.0;
  } while (modular(lo) <= 1.0);

  // modular() is strictly decreasing in lambda, so bisection on log(lambda)
  // keeps modular(lo) > 1 >= modular(hi).
  while (hi / lo - 1.0 > gauge.tolerance * 0.25) {
    const double mid = std::sqrt(lo * hi);
    if (modular(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  return std::sqrt(lo * hi);
}

StepFunction decreasing_rearrangement(const SampledFunction& f) {
  std::vector<Atom> atoms;
  atoms.reserve(f.size());
  const double w = f.cell_measure();
  for (double v : f.values()) atoms.push_back({w, v});
  return StepFunction::from_atoms(std::move(atoms));
}

double orlicz_norm(const StepFunction& g, const OrliczGauge& gauge) {
  const auto atoms = g.atoms();
  return luxemburg_norm(atoms, gauge);
}

double exp_l2_norm(const StepFunction& g) { return orlicz_norm(g, OrliczGauge::exp_l2()); }

StepFunction dilation(const StepFunction& g, double u) {
  if (!(u > 0.0)) throw Error(ErrorKind::InvalidInput, "dilation factor must be positive");
  std::vector<double> ends(g.ends().begin(), g.ends().end());
  for (double& e : ends) e *= u;
  return StepFunction(std::move(ends), std::vector<double>(g.values().begin(), g.values().end()));
}

StepFunction disjoint_sum(std::span<const StepFunction> parts) {
  std::vector<Atom> atoms;
  for (const auto& p : parts) {
    auto a = p.atoms();
    atoms.insert(atoms.end(), a.begin(), a.end());
  }
  return StepFunction::from_atoms(std::move(atoms));
}

Region region_from_mask(const std::vector<bool>& mask) {
  Region r;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) r.push_back({i, 1.0});
  return r;
}

double region_measure(const SampledFunction& f, std::span<const CellFraction> region) {
  double m = 0.0;
  for (const auto& c : region) m += c.fraction;
  return m * f.cell_measure();
}

StepFunction restricted_rearrangement(const SampledFunction& f,
                                      std::span<const CellFraction> region) {
  std::vector<Atom> atoms;
  atoms.reserve(region.size());
  const double w = f.cell_measure();
  for (const auto& c : region) atoms.push_back({c.fraction * w, f[c.cell]});
  return StepFunction::from_atoms(std::move(atoms));
}

double j_functional(const SampledFunction& f, std::span<const CellFraction> region,
                    const OrliczGauge& gauge) {
  const double m = region_measure(f, region);
  if (!(m > 0.0)) return 0.0;
  // sigma_{1/m} rescales every atom's measure by 1/m.
  std::vector<Atom> atoms;
  atoms.reserve(region.size());
  const double w = f.cell_measure() / m;
  for (const auto& c : region)
    if (c.fraction > 0.0 && f[c.cell] != 0.0) atoms.push_back({c.fraction * w, std::abs(f[c.cell])});
  return m * luxemburg_norm(atoms, gauge);
}

double j_functional(const SampledFunction& f, const std::vector<bool>& mask,
                    const OrliczGauge& gauge) {
  if (mask.size() != f.size()) throw Error(ErrorKind::GridMismatch, "mask size differs from grid");
  const Region r = region_from_mask(mask);
  return j_functional(f, r, gauge);
}

double j_continuity_modulus(const StepFunction& mu_f, double t, const OrliczGauge& gauge) {
  if (!(t > 0.0)) return 0.0;
  const double root = std::sqrt(t);
  return 2.0 * orlicz_norm(mu_f.truncated(t), gauge) + 2.0 * root * orlicz_norm(mu_f, gauge) +
         4.0 * root * orlicz_norm(dilation(mu_f, 1.0 / (2.0 * root)), gauge);
}

double marcinkiewicz_psi(double t) noexcept {
  if (t <= 0.0) return 0.0;
  return t < 1.0 ? 1.0 / std::log(std::numbers::e / t) : t;
}

double marcinkiewicz_psi_norm(const StepFunction& g, double horizon) {
  if (g.is_zero()) return 0.0;
  const StepFunction h = std::isinf(g.support()) ? g.truncated(horizon) : g;
  // The running average of mu is nonincreasing, so for t >= 1 the ratio is
  // maximal at t = 1 and only (0, 1] needs to be searched.
  auto ratio = [&](double t) { return h.integral(t) / marcinkiewicz_psi(t); };

  std::vector<double> grid;
  for (double e : h.ends())
    if (e <= 1.0) grid.push_back(e);
  grid.push_back(1.0);
  const double t_min = std::min(h.ends().front(), 1.0) * 1e-6;
  constexpr int kLogPoints = 512;
  for (int i = 0; i < kLogPoints; ++i)
    grid.push_back(t_min * std::pow(1.0 / t_min, static_cast<double>(i) / (kLogPoints - 1)));
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = ratio(grid[i]);
    if (r > best_value) {
      best_value = r;
      best = i;
    }
  }
  // Golden-section refinement inside the bracketing grid cells; the
  // supremand is smooth between breakpoints.
  const double a0 = best > 0 ? grid[best - 1] : grid[best] * 0.5;
  const double b0 = best + 1 < grid.size() ? grid[best + 1] : grid[best];
  double a = a0;
  double b = b0;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = ratio(x1);
  double f2 = ratio(x2);
  for (int it = 0; it < 80 && b - a > 1e-15 * b; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = ratio(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = ratio(x1);
    }
  }
  return std::max({best_value, f1, f2});
}

double lambda1_norm(const StepFunction& g, double horizon) {
  const StepFunction h = std::isinf(g.support()) ? g.truncated(horizon) : g;
  // Antiderivative of 1 + log(1/t) on (0, 1].
  auto weight_integral = [](double t) { return t <= 0.0 ? 0.0 : 2.0 * t - t * std::log(t); };
  double acc = 0.0;
  double start = 0.0;
  const auto ends = h.ends();
  const auto values = h.values();
  for (std::size_t i = 0; i < ends.size(); ++i) {
    const double stop = ends[i];
    const double inner_stop = std::min(stop, 1.0);
    if (start < 1.0) acc += values[i] * (weight_integral(inner_stop) - weight_integral(start));
    if (stop > 1.0) acc += values[i] * (stop - std::max(start, 1.0));
    start = stop;
  }
  return acc;
}

}  // namespace cwikel
