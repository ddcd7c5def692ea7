#include "fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <numbers>

#include "ghost/errors.hpp"

namespace ghost::detail {

namespace {

// FFTW's planner is not thread safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void dft_many(cplx* data, std::size_t n, std::size_t count, std::size_t stride, std::size_t dist,
              int sign) {
  if (n == 0 || count == 0) return;
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  const int len = static_cast<int>(n);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_many_dft(1, &len, static_cast<int>(count), buf, nullptr,
                              static_cast<int>(stride), static_cast<int>(dist), buf, nullptr,
                              static_cast<int>(stride), static_cast<int>(dist),
                              sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw Error(ErrorCode::InvalidParameter, "FFTW could not plan the transform");
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

double bin_wavenumber(std::size_t m, std::size_t n, double dz) {
  const double idx = m < (n + 1) / 2 ? static_cast<double>(m)
                                     : static_cast<double>(m) - static_cast<double>(n);
  return 2.0 * std::numbers::pi * idx / (static_cast<double>(n) * dz);
}

}  // namespace ghost::detail
