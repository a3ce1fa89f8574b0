#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace cwikel {

inline constexpr int kMaxDim = 3;

using Point = std::array<double, kMaxDim>;
using MultiIndex = std::array<int, kMaxDim>;

enum class DomainKind { Torus, Box };
enum class MeasureKind { Normalized, Lebesgue };

// Torus domains are [-pi, pi)^d with opposite faces glued; boxes are
// [-L, L)^d. Both are stored the same way, only the measure convention and
// the role of the half width differ.
struct Domain {
  DomainKind kind = DomainKind::Torus;
  double half_width = std::numbers::pi;

  static Domain torus() { return {DomainKind::Torus, std::numbers::pi}; }
  static Domain box(double half_width) { return {DomainKind::Box, half_width}; }

  bool operator==(const Domain&) const = default;
};

// A scalar field that is constant on each cell of a uniform grid. Values are
// stored row-major with the last axis fastest.
class SampledFunction {
 public:
  SampledFunction(int dim, Domain domain, int resolution, std::vector<double> values,
                  MeasureKind measure);

  static SampledFunction torus(int dim, int resolution,
                               const std::function<double(const Point&)>& fn);
  static SampledFunction box(int dim, double half_width, int resolution,
                             const std::function<double(const Point&)>& fn);
  static SampledFunction zeros_like(const SampledFunction& other);

  int dim() const noexcept { return dim_; }
  const Domain& domain() const noexcept { return domain_; }
  int resolution() const noexcept { return resolution_; }
  MeasureKind measure() const noexcept { return measure_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }

  // Edge length of one cell in domain coordinates.
  double cell_width() const noexcept { return 2.0 * domain_.half_width / resolution_; }
  // Measure of one cell under the attached measure convention.
  double cell_measure() const noexcept;
  double total_measure() const noexcept;
  // Conversion factor from normalized measure to Lebesgue measure.
  double lebesgue_per_unit() const noexcept;

  double axis_coordinate(int i) const noexcept {
    return -domain_.half_width + (i + 0.5) * cell_width();
  }
  MultiIndex multi_index(std::size_t flat) const noexcept;
  std::size_t flat_index(const MultiIndex& idx) const noexcept;
  Point center(std::size_t flat) const noexcept;

  bool same_grid(const SampledFunction& other) const noexcept;

 private:
  int dim_;
  Domain domain_;
  int resolution_;
  std::vector<double> values_;
  MeasureKind measure_;
};

}  // namespace cwikel
