#pragma once

// Precision-generic spectral helpers shared by the numerics core, the
// phase-space moment fields and the propagator.

#include <complex>
#include <span>
#include <vector>

#include "locmom/fft.hpp"
#include "locmom/grid.hpp"

namespace locmom::detail {

template <class Real>
using cvec = std::vector<std::complex<Real>>;

/// hbar * k for FFT-ordered index, in working precision.
template <class Real>
std::vector<Real> wrapped_momenta(const GridSpec& g) {
  const Real pi = 3.14159265358979323846264338327950288L;
  const Real dp = Real(2) * pi * Real(g.hbar) / (Real(g.n) * Real(g.dq));
  std::vector<Real> p(static_cast<std::size_t>(g.n));
  for (int k = 0; k < g.n; ++k) p[k] = Real(g.wrapped_mode(k)) * dp;
  return p;
}

/// Returns {p^0 psi, p^1 psi, ..., p^max_power psi}; one forward and
/// max_power backward transforms.
template <class Real>
std::vector<cvec<Real>> momentum_powers(const GridSpec& g,
                                        std::span<const std::complex<Real>> psi,
                                        int max_power) {
  const int n = g.n;
  std::vector<cvec<Real>> out;
  out.reserve(static_cast<std::size_t>(max_power) + 1);
  out.emplace_back(psi.begin(), psi.end());
  if (max_power == 0) return out;

  cvec<Real> spec(psi.begin(), psi.end());
  fft::forward(std::span(spec));
  const auto p = wrapped_momenta<Real>(g);
  const Real inv_n = Real(1) / Real(n);
  cvec<Real> work(static_cast<std::size_t>(n));
  for (int power = 1; power <= max_power; ++power) {
    for (int k = 0; k < n; ++k) {
      spec[k] *= p[k];
      work[k] = spec[k] * inv_n;
    }
    fft::backward(std::span(work));
    out.push_back(work);
  }
  return out;
}

}  // namespace locmom::detail
