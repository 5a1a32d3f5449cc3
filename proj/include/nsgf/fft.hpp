#pragma once

// Thin wrapper over FFTW. Transforms are unnormalized:
//   forward:  X[k] = sum_x x[x] e^{-2 pi i k x / n}
//   backward: x[x] = sum_k X[k] e^{+2 pi i k x / n}

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

namespace nsgf {

using cd = std::complex<double>;
using CVec = std::vector<cd>;

namespace fft {
namespace detail {

// The FFTW planner is not reentrant; execution with new-array functions is.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<cd> scratch(n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

inline void transform_in_place(std::span<cd> data, int sign) {
  if (data.size() <= 1) return;
  fftw_plan plan = PlanCache::instance().get(data.size(), sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace detail

inline void forward_in_place(std::span<cd> data) {
  detail::transform_in_place(data, FFTW_FORWARD);
}

inline void backward_in_place(std::span<cd> data) {
  detail::transform_in_place(data, FFTW_BACKWARD);
}

inline CVec forward(std::span<const cd> x) {
  CVec out(x.begin(), x.end());
  forward_in_place(out);
  return out;
}

inline CVec backward(std::span<const cd> x) {
  CVec out(x.begin(), x.end());
  backward_in_place(out);
  return out;
}

}  // namespace fft
}  // namespace nsgf
