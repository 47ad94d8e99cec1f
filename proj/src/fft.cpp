#include "madelung_lab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace mlab::fft {
namespace {

struct PlanPair {
  fftw_plan forward;
  fftw_plan backward;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

  const PlanPair& get(std::size_t n) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    // Planning scribbles on the buffer, so use a scratch array.
    fftw_complex* scratch = fftw_alloc_complex(n);
    const int size = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair p{fftw_plan_dft_1d(size, scratch, scratch, FFTW_FORWARD, flags),
               fftw_plan_dft_1d(size, scratch, scratch, FFTW_BACKWARD, flags)};
    fftw_free(scratch);
    return plans_.emplace(n, p).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, PlanPair> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

fftw_complex* as_fftw(std::span<std::complex<double>> d) {
  return reinterpret_cast<fftw_complex*>(d.data());
}

}  // namespace

void forward(std::span<std::complex<double>> data) {
  if (data.empty()) return;
  fftw_execute_dft(cache().get(data.size()).forward, as_fftw(data), as_fftw(data));
}

void backward(std::span<std::complex<double>> data) {
  if (data.empty()) return;
  fftw_execute_dft(cache().get(data.size()).backward, as_fftw(data), as_fftw(data));
}

}  // namespace mlab::fft
