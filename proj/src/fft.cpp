#include "locmom/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace locmom::fft {
namespace {

template <class Real>
struct Api;

template <>
struct Api<double> {
  using plan = fftw_plan;
  using complex = fftw_complex;
  static plan make(int n, complex* buf, int sign) {
    return fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  static void run(plan p, complex* buf) { fftw_execute_dft(p, buf, buf); }
  static void destroy(plan p) { fftw_destroy_plan(p); }
};

template <>
struct Api<long double> {
  using plan = fftwl_plan;
  using complex = fftwl_complex;
  static plan make(int n, complex* buf, int sign) {
    return fftwl_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  static void run(plan p, complex* buf) { fftwl_execute_dft(p, buf, buf); }
  static void destroy(plan p) { fftwl_destroy_plan(p); }
};

template <class Real>
class PlanCache {
 public:
  using A = Api<Real>;

  ~PlanCache() {
    for (auto& [key, p] : plans_) A::destroy(p);
  }

  typename A::plan get(int n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    // FFTW_ESTIMATE never touches the buffer contents.
    std::vector<std::complex<Real>> scratch(static_cast<std::size_t>(n));
    auto p = A::make(n, reinterpret_cast<typename A::complex*>(scratch.data()), sign);
    plans_.emplace(key, p);
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, typename A::plan> plans_;
};

template <class Real>
PlanCache<Real>& cache() {
  static PlanCache<Real> instance;
  return instance;
}

template <class Real>
void execute(std::span<std::complex<Real>> data, int sign) {
  if (data.empty()) return;
  const int n = static_cast<int>(data.size());
  auto p = cache<Real>().get(n, sign);
  Api<Real>::run(p, reinterpret_cast<typename Api<Real>::complex*>(data.data()));
}

}  // namespace

void forward(std::span<std::complex<double>> data) { execute<double>(data, FFTW_FORWARD); }
void backward(std::span<std::complex<double>> data) { execute<double>(data, FFTW_BACKWARD); }
void forward(std::span<std::complex<long double>> data) {
  execute<long double>(data, FFTW_FORWARD);
}
void backward(std::span<std::complex<long double>> data) {
  execute<long double>(data, FFTW_BACKWARD);
}

}  // namespace locmom::fft
