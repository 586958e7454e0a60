#include "bhblow/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "bhblow/error.hpp"

namespace bhblow::fft {
namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

RealFft::RealFft(std::size_t n) : n_(n), fwd_(nullptr), bwd_(nullptr) {
  if (n < 2 || n % 2 != 0) throw ParameterError("FFT length must be even and >= 2");
  std::vector<double> re(n);
  std::vector<cplx> sp(n / 2 + 1);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex());
  fwd_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), re.data(),
                              reinterpret_cast<fftw_complex*>(sp.data()), flags);
  bwd_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(sp.data()),
                              re.data(), flags);
  if (fwd_ == nullptr || bwd_ == nullptr) throw Error("FFTW failed to create a plan");
}

RealFft::~RealFft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

void RealFft::forward(std::span<const double> in, std::span<cplx> out) const {
  if (in.size() != n_ || out.size() != spectrum_size())
    throw ParameterError("RealFft::forward size mismatch");
  // r2c leaves its input untouched.
  fftw_execute_dft_r2c(static_cast<fftw_plan>(fwd_), const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void RealFft::inverse(std::span<const cplx> in, std::span<double> out) const {
  if (in.size() != spectrum_size() || out.size() != n_)
    throw ParameterError("RealFft::inverse size mismatch");
  // c2r destroys its input, so work on a scratch copy.
  thread_local std::vector<cplx> scratch;
  scratch.assign(in.begin(), in.end());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(bwd_),
                       reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
  const double scale = 1.0 / static_cast<double>(n_);
  for (double& v : out) v *= scale;
}

const RealFft& plan_for(std::size_t n) {
  static std::mutex cache_mutex;
  static std::map<std::size_t, std::unique_ptr<RealFft>> cache;
  std::lock_guard lock(cache_mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<RealFft>(n);
  return *slot;
}

}  // namespace bhblow::fft
