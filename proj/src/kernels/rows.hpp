#pragma once

// Single-row bodies shared by the serial and OpenMP drivers.

#include <cmath>
#include <numbers>
#include <vector>

#include "kernels.hpp"
#include "locmom/fft.hpp"

namespace locmom::kernels::rows {

inline std::vector<cplx> twiddles(int n) {
  std::vector<cplx> tw(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) tw[m] = std::polar(1.0, 2 * std::numbers::pi * m / n);
  return tw;
}

inline void wigner_row(const WignerArgs& args, int i, std::vector<cplx>& buf, double* out) {
  const auto& psi = args.psi;
  const int n = static_cast<int>(psi.size());
  for (int j = -n / 2; j < n / 2; ++j) {
    int a = i + j;
    int b = i - j;
    cplx c{};
    if (args.periodic) {
      a = ((a % n) + n) % n;
      b = ((b % n) + n) % n;
      c = std::conj(psi[a]) * psi[b];
    } else if (a >= 0 && a < n && b >= 0 && b < n) {
      c = std::conj(psi[a]) * psi[b];
    }
    buf[static_cast<std::size_t>((j + n) % n)] = (j % 2 == 0) ? c : -c;
  }
  fft::backward(std::span(buf));
  for (int s = 0; s < n; ++s) out[s] = args.scale * buf[s].real();
}

inline void margenau_hill_row(const MargenauHillArgs& args, const std::vector<cplx>& tw, int j,
                              double* out) {
  const int n = static_cast<int>(args.psi.size());
  const cplx row = (j % 2 == 0 ? 1.0 : -1.0) * std::conj(args.psi[j]);
  for (int s = 0; s < n; ++s) {
    const auto m = static_cast<std::size_t>((static_cast<long long>(s) * j) % n);
    out[s] = (row * args.a[s] * tw[m]).real();
  }
}

inline bool conditional_row(const ConditionalArgs& args, int j, std::vector<cplx>& buf,
                            double* out) {
  const auto& psi = args.psi;
  const int n = static_cast<int>(psi.size());
  if (!(std::abs(psi[j]) > args.amplitude_floor)) {
    for (int s = 0; s < n; ++s) out[s] = 0.0;
    return false;
  }
  const cplx inv = 1.0 / psi[j];
  const cplx inv_conj = std::conj(inv);
  for (int m = -n / 2; m < n / 2; ++m) {
    const cplx fwd = psi[static_cast<std::size_t>(((j + m) % n + n) % n)];
    const cplx bwd = psi[static_cast<std::size_t>(((j - m) % n + n) % n)];
    const cplx g = 0.5 * (fwd * inv + std::conj(bwd) * inv_conj);
    buf[static_cast<std::size_t>((m + n) % n)] = (m % 2 == 0) ? g : -g;
  }
  fft::forward(std::span(buf));
  for (int s = 0; s < n; ++s) out[s] = args.scale * buf[s].real();
  return true;
}

inline double row_dot(const RowDotArgs& args, int i) {
  const int n = args.n_cols;
  const double* v = args.values.data() + static_cast<std::size_t>(i) * n;
  const bool broadcast = static_cast<int>(args.weights.size()) == n;
  const double* w = broadcast ? args.weights.data()
                              : args.weights.data() + static_cast<std::size_t>(i) * n;
  double acc = 0.0;
  for (int k = 0; k < n; ++k) acc += v[k] * w[k];
  return acc;
}

inline void row_stats(const RowStatsArgs& args, int i, const RowStatsOut& out) {
  const int n = args.n_cols;
  const double* f = args.values.data() + static_cast<std::size_t>(i) * n;
  const double* a = args.a.data() + static_cast<std::size_t>(i) * n;
  double mass = 0.0;
  double first = 0.0;
  for (int k = 0; k < n; ++k) {
    mass += f[k];
    first += a[k] * f[k];
  }
  mass *= args.dp;
  first *= args.dp;
  const double mean = mass > 0 ? first / mass : 0.0;
  double second = 0.0;
  for (int k = 0; k < n; ++k) {
    const double d = a[k] - mean;
    second += d * d * f[k];
  }
  out.mass[i] = mass;
  out.mean[i] = mean;
  out.variance[i] = mass > 0 ? second * args.dp / mass : 0.0;
}

}  // namespace locmom::kernels::rows
