#include "fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace cwikel::detail {

namespace {
std::mutex planner_mutex;
}

std::vector<std::complex<double>> forward_dft(const SampledFunction& f) {
  const std::size_t m = f.size();
  std::vector<std::complex<double>> in(m);
  for (std::size_t i = 0; i < m; ++i) in[i] = f[i];
  std::vector<std::complex<double>> out(m);
  int dims[kMaxDim];
  for (int a = 0; a < f.dim(); ++a) dims[a] = f.resolution();
  auto* pin = reinterpret_cast<fftw_complex*>(in.data());
  auto* pout = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex);
    plan = fftw_plan_dft(f.dim(), dims, pin, pout, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex);
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace cwikel::detail
