#pragma once

#include <complex>
#include <vector>

#include "cwikel/sampled_function.hpp"

namespace cwikel::detail {

// Unnormalized forward DFT (sign -1) of the grid values, row-major like the
// input. Plan creation is serialized; execution is reentrant.
std::vector<std::complex<double>> forward_dft(const SampledFunction& f);

// Signed frequency of index j on an axis of length r, in (-r/2, r/2].
inline int signed_frequency(int j, int r) noexcept { return j <= r / 2 ? j : j - r; }

}  // namespace cwikel::detail
