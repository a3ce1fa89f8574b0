#pragma once

#include <string>
#include <vector>

#include "cwikel/sampled_function.hpp"

namespace cwikel {

/// Named test densities on the torus [-pi, pi)^d.
///
///   constant        1
///   cosine          2 cos x_1
///   power           |x|^{-a} (a = 3/4 in d = 1, 4/5 in d = 2)
///   log             log(e pi sqrt(d) / |x|)
///   two-bump        two Gaussian bumps of different height
///   half            indicator of {x_1 < 0}
///   gaussian        exp(-2 |x|^2)
///   lacunary        sum_j 2^{-j d/2} cos(2^j x_1) (+ sin(2^j x_2) in d = 2)
SampledFunction torus_profile(const std::string& name, int dim, int resolution);
std::vector<std::string> torus_profile_names();

/// Named densities on the box [-L, L)^d with Lebesgue measure.
///
///   ball            indicator of the closed unit ball
///   shell           indicator of 1 < |x| < 2
///   decay           |x|^{-2d} outside the unit ball
///   bump            exp(-4 (|x| - 2)^2)
///   ring            smooth compactly supported bump in |x| on (1.2, 2.8)
SampledFunction box_profile(const std::string& name, int dim, double half_width, int resolution);
std::vector<std::string> box_profile_names();

}  // namespace cwikel
