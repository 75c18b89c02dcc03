#include "conic_shubin/fft.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

#include <fftw3.h>

namespace conic_shubin {

namespace {

std::mutex plan_mutex;

fftw_plan plan_for(int n, bool inverse) {
  static std::map<std::pair<int, bool>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto it = cache.find({n, inverse});
  if (it != cache.end()) return it->second;
  auto* buf = fftw_alloc_complex(static_cast<std::size_t>(n));
  fftw_plan p = fftw_plan_dft_1d(n, buf, buf, inverse ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf);
  if (!p) throw std::runtime_error("FFTW plan creation failed");
  cache.emplace(std::make_pair(n, inverse), p);
  return p;
}

}  // namespace

void dft_many(std::complex<double>* data, int n, int count, bool inverse) {
  if (n <= 0) throw std::invalid_argument("dft length must be positive");
  fftw_plan p = plan_for(n, inverse);
  for (int c = 0; c < count; ++c) {
    auto* ptr = reinterpret_cast<fftw_complex*>(data + static_cast<std::ptrdiff_t>(c) * n);
    fftw_execute_dft(p, ptr, ptr);
  }
}

void dft(std::vector<std::complex<double>>& data, bool inverse) {
  dft_many(data.data(), static_cast<int>(data.size()), 1, inverse);
}

}  // namespace conic_shubin
