#include "fft.h"

#include <fftw3.h>

#include <algorithm>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace smap::detail {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// One in-place plan pair plus its aligned work buffer. Data is copied in and
// out so callers can use ordinary std::vector storage.
class PlanPair {
 public:
  explicit PlanPair(std::size_t n) : n_(n) {
    buffer_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    if (buffer_ == nullptr) throw std::bad_alloc();
    std::lock_guard<std::mutex> lock(planner_mutex());
    const int size = static_cast<int>(n);
    forward_ = fftw_plan_dft_1d(size, buffer_, buffer_, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_1d(size, buffer_, buffer_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  PlanPair(const PlanPair&) = delete;
  PlanPair& operator=(const PlanPair&) = delete;
  ~PlanPair() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(buffer_);
  }

  void run(std::span<const std::complex<double>> in,
           std::span<std::complex<double>> out, bool forward) {
    auto* buf = reinterpret_cast<std::complex<double>*>(buffer_);
    std::copy(in.begin(), in.end(), buf);
    fftw_execute(forward ? forward_ : backward_);
    std::copy(buf, buf + n_, out.begin());
  }

 private:
  std::size_t n_;
  fftw_complex* buffer_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

PlanPair& plans_for(std::size_t n) {
  thread_local std::unordered_map<std::size_t, std::unique_ptr<PlanPair>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, std::make_unique<PlanPair>(n)).first;
  }
  return *it->second;
}

void run(std::span<const std::complex<double>> in,
         std::span<std::complex<double>> out, bool forward) {
  if (in.size() != out.size()) {
    throw std::invalid_argument("fft: input and output sizes differ");
  }
  if (in.empty()) return;
  plans_for(in.size()).run(in, out, forward);
}

}  // namespace

void fft_forward(std::span<const std::complex<double>> in,
                 std::span<std::complex<double>> out) {
  run(in, out, true);
}

void fft_backward(std::span<const std::complex<double>> in,
                  std::span<std::complex<double>> out) {
  run(in, out, false);
}

}  // namespace smap::detail
