#include "cwikel/profiles.hpp"

#include <cmath>
#include <numbers>

#include "cwikel/error.hpp"

namespace cwikel {

namespace {

double radius(const Point& x, int dim) {
  double s = 0.0;
  for (int a = 0; a < dim; ++a) s += x[a] * x[a];
  return std::sqrt(s);
}

}  // namespace

std::vector<std::string> torus_profile_names() {
  return {"constant", "cosine", "power", "log", "two-bump", "half", "gaussian", "lacunary"};
}

SampledFunction torus_profile(const std::string& name, int dim, int resolution) {
  using std::numbers::pi;
  if (name == "constant") return SampledFunction::torus(dim, resolution, [](const Point&) { return 1.0; });
  if (name == "cosine")
    return SampledFunction::torus(dim, resolution, [](const Point& x) { return 2.0 * std::cos(x[0]); });
  if (name == "power") {
    const double a = dim == 1 ? 0.75 : 0.8;
    return SampledFunction::torus(dim, resolution,
                                  [&](const Point& x) { return std::pow(radius(x, dim), -a); });
  }
  if (name == "log") {
    const double top = std::numbers::e * pi * std::sqrt(static_cast<double>(dim));
    return SampledFunction::torus(dim, resolution,
                                  [&](const Point& x) { return std::log(top / radius(x, dim)); });
  }
  if (name == "two-bump")
    return SampledFunction::torus(dim, resolution, [&](const Point& x) {
      double near = 0.0;
      double far = 0.0;
      for (int a = 0; a < dim; ++a) {
        near += x[a] * x[a];
        const double y = x[a] - (a == 0 ? 2.0 : -1.0);
        far += y * y;
      }
      return std::exp(-4.0 * near) + 0.5 * std::exp(-8.0 * far);
    });
  if (name == "half")
    return SampledFunction::torus(dim, resolution, [](const Point& x) { return x[0] < 0.0 ? 1.0 : 0.0; });
  if (name == "gaussian")
    return SampledFunction::torus(dim, resolution, [&](const Point& x) {
      const double r = radius(x, dim);
      return std::exp(-2.0 * r * r);
    });
  if (name == "lacunary")
    return SampledFunction::torus(dim, resolution, [&](const Point& x) {
      double s = 0.0;
      const int top = static_cast<int>(std::log2(resolution / 4.0));
      for (int j = 0; j <= top; ++j) {
        const double k = std::ldexp(1.0, j);
        const double w = std::pow(k, -0.5 * dim);
        s += w * std::cos(k * x[0]);
        if (dim == 2) s += w * std::sin(k * x[1]);
      }
      return s;
    });
  throw Error(ErrorKind::ConfigError, "unknown profile '" + name + "'");
}

std::vector<std::string> box_profile_names() { return {"ball", "shell", "decay", "bump", "ring"}; }

SampledFunction box_profile(const std::string& name, int dim, double half_width, int resolution) {
  if (name == "ball")
    return SampledFunction::box(dim, half_width, resolution,
                                [&](const Point& x) { return radius(x, dim) <= 1.0 ? 1.0 : 0.0; });
  if (name == "shell")
    return SampledFunction::box(dim, half_width, resolution, [&](const Point& x) {
      const double r = radius(x, dim);
      return r > 1.0 && r < 2.0 ? 1.0 : 0.0;
    });
  if (name == "decay")
    return SampledFunction::box(dim, half_width, resolution, [&](const Point& x) {
      const double r = radius(x, dim);
      return r > 1.0 ? std::pow(r, -2.0 * dim) : 0.0;
    });
  if (name == "bump")
    return SampledFunction::box(dim, half_width, resolution, [&](const Point& x) {
      const double r = radius(x, dim);
      return std::exp(-(r - 2.0) * (r - 2.0) * 4.0);
    });
  if (name == "ring")
    return SampledFunction::box(dim, half_width, resolution, [&](const Point& x) {
      const double u = radius(x, dim) - 2.0;
      return std::abs(u) < 0.8 ? std::exp(1.0 - 1.0 / (1.0 - u * u / 0.64)) : 0.0;
    });
  throw Error(ErrorKind::ConfigError, "unknown box profile '" + name + "'");
}

}  // namespace cwikel
