#include "cwikel/sampled_function.hpp"

#include <cmath>
#include <string>

#include "cwikel/error.hpp"

namespace cwikel {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NonIntegrable: return "NonIntegrable";
    case ErrorKind::ZeroFunction: return "ZeroFunction";
    case ErrorKind::DegenerateCube: return "DegenerateCube";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::NegativeWeight: return "NegativeWeight";
    case ErrorKind::NegativeFunction: return "NegativeFunction";
    case ErrorKind::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorKind::ZeroSeminorm: return "ZeroSeminorm";
    case ErrorKind::AliasError: return "AliasError";
    case ErrorKind::OriginSingularity: return "OriginSingularity";
    case ErrorKind::BoxTooSmall: return "BoxTooSmall";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

std::size_t ipow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

}  // namespace

SampledFunction::SampledFunction(int dim, Domain domain, int resolution,
                                 std::vector<double> values, MeasureKind measure)
    : dim_(dim), domain_(domain), resolution_(resolution), values_(std::move(values)),
      measure_(measure) {
  if (dim < 1 || dim > kMaxDim)
    throw Error(ErrorKind::UnsupportedDimension, "dimension must be 1, 2 or 3");
  if (resolution < 1) throw Error(ErrorKind::InvalidInput, "resolution must be positive");
  if (!(domain.half_width > 0.0)) throw Error(ErrorKind::InvalidInput, "half width must be positive");
  if (values_.size() != ipow(resolution, dim))
    throw Error(ErrorKind::InvalidInput,
                "expected " + std::to_string(ipow(resolution, dim)) + " values, got " +
                    std::to_string(values_.size()));
  for (double v : values_)
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidInput, "non-finite sample value");
}

SampledFunction SampledFunction::torus(int dim, int resolution,
                                       const std::function<double(const Point&)>& fn) {
  SampledFunction f(dim, Domain::torus(), resolution,
                    std::vector<double>(ipow(resolution, dim), 0.0), MeasureKind::Normalized);
  for (std::size_t i = 0; i < f.size(); ++i) f.values_[i] = fn(f.center(i));
  for (double v : f.values_)
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidInput, "non-finite sample value");
  return f;
}

SampledFunction SampledFunction::box(int dim, double half_width, int resolution,
                                     const std::function<double(const Point&)>& fn) {
  SampledFunction f(dim, Domain::box(half_width), resolution,
                    std::vector<double>(ipow(resolution, dim), 0.0), MeasureKind::Lebesgue);
  for (std::size_t i = 0; i < f.size(); ++i) f.values_[i] = fn(f.center(i));
  for (double v : f.values_)
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidInput, "non-finite sample value");
  return f;
}

SampledFunction SampledFunction::zeros_like(const SampledFunction& other) {
  return SampledFunction(other.dim_, other.domain_, other.resolution_,
                         std::vector<double>(other.size(), 0.0), other.measure_);
}

double SampledFunction::lebesgue_per_unit() const noexcept {
  return std::pow(2.0 * domain_.half_width, dim_);
}

double SampledFunction::cell_measure() const noexcept {
  const double normalized = 1.0 / static_cast<double>(values_.size());
  return measure_ == MeasureKind::Normalized ? normalized : normalized * lebesgue_per_unit();
}

double SampledFunction::total_measure() const noexcept {
  return measure_ == MeasureKind::Normalized ? 1.0 : lebesgue_per_unit();
}

MultiIndex SampledFunction::multi_index(std::size_t flat) const noexcept {
  MultiIndex idx{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % resolution_);
    flat /= resolution_;
  }
  return idx;
}

std::size_t SampledFunction::flat_index(const MultiIndex& idx) const noexcept {
  std::size_t flat = 0;
  for (int a = 0; a < dim_; ++a) flat = flat * resolution_ + idx[a];
  return flat;
}

Point SampledFunction::center(std::size_t flat) const noexcept {
  const MultiIndex idx = multi_index(flat);
  Point p{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) p[a] = axis_coordinate(idx[a]);
  return p;
}

bool SampledFunction::same_grid(const SampledFunction& other) const noexcept {
  return dim_ == other.dim_ && domain_ == other.domain_ && resolution_ == other.resolution_;
}

}  // namespace cwikel
