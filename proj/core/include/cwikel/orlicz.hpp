#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "cwikel/sampled_function.hpp"

namespace cwikel {

/// A piece of mass: `measure` units of the domain on which |f| equals `value`.
struct Atom {
  double measure = 0.0;
  double value = 0.0;
};

/// Nonnegative, nonincreasing, right-continuous step function on (0, inf).
///
/// Interval i is [ends[i-1], ends[i]) with ends[-1] = 0 and carries
/// values[i]. The function vanishes after the last end. The last end may be
/// +inf, which models a nonzero tail of infinite measure.
class StepFunction {
 public:
  StepFunction() = default;
  StepFunction(std::vector<double> ends, std::vector<double> values);

  /// Decreasing rearrangement of a finite collection of atoms. Atoms with
  /// equal values are merged and zero values are dropped.
  static StepFunction from_atoms(std::vector<Atom> atoms);
  static StepFunction indicator(double length, double height = 1.0);

  std::span<const double> ends() const noexcept { return ends_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t pieces() const noexcept { return values_.size(); }
  bool is_zero() const noexcept { return values_.empty(); }

  /// Measure of the set where the function is positive.
  double support() const noexcept { return ends_.empty() ? 0.0 : ends_.back(); }
  double operator()(double t) const noexcept;
  /// Integral over (0, t); closed form on the pieces.
  double integral(double t) const noexcept;
  double integral() const noexcept { return integral(std::numeric_limits<double>::infinity()); }
  /// Measure of {g > s}.
  double level_measure(double s) const noexcept;

  std::vector<Atom> atoms() const;
  /// g * chi_(0, horizon).
  StepFunction truncated(double horizon) const;
  StepFunction scaled(double c) const;

 private:
  std::vector<double> ends_;
  std::vector<double> values_;
};

enum class GaugeKind { LLogL, ExpL2 };

/// Orlicz function together with the relative tolerance used when solving for
/// the Luxemburg gauge.
struct OrliczGauge {
  GaugeKind kind = GaugeKind::LLogL;
  double tolerance = 1e-10;

  static OrliczGauge llogl() { return {GaugeKind::LLogL, 1e-10}; }
  static OrliczGauge exp_l2() { return {GaugeKind::ExpL2, 1e-10}; }

  /// M(t) = t log(e + t) or e^{t^2} - 1.
  double operator()(double t) const noexcept;
};

inline constexpr double kDefaultHorizon = 1e6;

/// Luxemburg gauge inf{lambda : sum_i measure_i M(value_i / lambda) <= 1}.
double luxemburg_norm(std::span<const Atom> atoms, const OrliczGauge& gauge);

StepFunction decreasing_rearrangement(const SampledFunction& f);

double orlicz_norm(const StepFunction& g, const OrliczGauge& gauge = OrliczGauge::llogl());
double exp_l2_norm(const StepFunction& g);

/// (sigma_u g)(t) = g(t / u).
StepFunction dilation(const StepFunction& g, double u);

/// Rearrangement of the disjoint sum of the given functions.
StepFunction disjoint_sum(std::span<const StepFunction> parts);

/// One grid cell taking part in a region, with the fraction of its measure
/// that lies inside the region.
struct CellFraction {
  std::size_t cell = 0;
  double fraction = 1.0;
};
using Region = std::vector<CellFraction>;

Region region_from_mask(const std::vector<bool>& mask);
double region_measure(const SampledFunction& f, std::span<const CellFraction> region);
StepFunction restricted_rearrangement(const SampledFunction& f,
                                      std::span<const CellFraction> region);

/// J(A) = m(A) * || sigma_{1/m(A)} mu(f|_A) ||_{L_M}; zero for null sets.
double j_functional(const SampledFunction& f, std::span<const CellFraction> region,
                    const OrliczGauge& gauge = OrliczGauge::llogl());
double j_functional(const SampledFunction& f, const std::vector<bool>& mask,
                    const OrliczGauge& gauge = OrliczGauge::llogl());

/// Modulus F_f(t) bounding |J(A1) - J(A2)| in terms of m(A1 symdiff A2).
double j_continuity_modulus(const StepFunction& mu_f, double t,
                            const OrliczGauge& gauge = OrliczGauge::llogl());

/// psi(t) = 1 / log(e / t) on (0, 1), t beyond.
double marcinkiewicz_psi(double t) noexcept;
double marcinkiewicz_psi_norm(const StepFunction& g, double horizon = kDefaultHorizon);

/// int_0^1 mu(t)(1 + log(1/t)) dt + int_1^inf mu(t) dt.
double lambda1_norm(const StepFunction& g, double horizon = kDefaultHorizon);

}  // namespace cwikel
