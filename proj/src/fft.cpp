#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace fkp::detail {
namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

// The FFTW planner is not thread-safe; plan execution on new arrays is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

  const PlanPair& get(int nx, int ny) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find({nx, ny});
    if (it != plans_.end()) return it->second;
    std::vector<std::complex<double>> a(static_cast<std::size_t>(nx) * ny);
    std::vector<std::complex<double>> b(a.size());
    auto* pa = reinterpret_cast<fftw_complex*>(a.data());
    auto* pb = reinterpret_cast<fftw_complex*>(b.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair p;
    p.forward = fftw_plan_dft_2d(nx, ny, pa, pb, FFTW_FORWARD, flags);
    p.backward = fftw_plan_dft_2d(nx, ny, pa, pb, FFTW_BACKWARD, flags);
    return plans_.emplace(std::make_pair(nx, ny), p).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, PlanPair> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void execute(fftw_plan plan, const std::complex<double>* in, std::complex<double>* out) {
  // FFTW never writes to the input of an out-of-place c2c transform.
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

}  // namespace

void fft_forward_c(int nx, int ny, std::span<const std::complex<double>> in,
                   std::span<std::complex<double>> out) {
  execute(cache().get(nx, ny).forward, in.data(), out.data());
  const double scale = 1.0 / (static_cast<double>(nx) * ny);
  for (auto& c : out) c *= scale;
}

void fft_inverse_c(int nx, int ny, std::span<const std::complex<double>> in,
                   std::span<std::complex<double>> out) {
  execute(cache().get(nx, ny).backward, in.data(), out.data());
}

void fft_forward(int nx, int ny, std::span<const double> in, std::span<std::complex<double>> out) {
  std::vector<std::complex<double>> tmp(in.begin(), in.end());
  fft_forward_c(nx, ny, tmp, out);
}

void fft_inverse(int nx, int ny, std::span<const std::complex<double>> in, std::span<double> out) {
  std::vector<std::complex<double>> tmp(in.size());
  fft_inverse_c(nx, ny, in, tmp);
  for (std::size_t k = 0; k < tmp.size(); ++k) out[k] = tmp[k].real();
}

}  // namespace fkp::detail
