#include "locmom/spectral.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "locmom/error.hpp"
#include "locmom/fft.hpp"
#include "spectral_impl.hpp"

namespace locmom {

double MomentumAmplitudes::norm_squared() const noexcept {
  double s = 0.0;
  for (const auto& a : phi) s += std::norm(a);
  return s * grid.dp;
}

MomentumAmplitudes momentum_representation(const Wavefunction& psi) {
  const auto& g = psi.grid();
  const int n = g.n;
  ComplexField work(psi.amp());
  fft::forward(std::span(work));

  // q_j = q_min + j dq, so the FFT bin k picks up exp(-i p_k q_min / hbar).
  const double scale = g.dq / std::sqrt(2.0 * std::numbers::pi * g.hbar);
  MomentumAmplitudes out;
  out.grid = g;
  out.phi.resize(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    const double p = g.momentum(s);
    out.phi[s] = scale * std::polar(1.0, -p * g.q_min / g.hbar) * work[g.wrapped_index(s)];
  }
  return out;
}

Wavefunction position_representation(const MomentumAmplitudes& m) {
  const auto& g = m.grid;
  const int n = g.n;
  if (static_cast<int>(m.phi.size()) != n)
    throw InvalidArgument("momentum amplitudes do not match the grid");
  ComplexField work(static_cast<std::size_t>(n));
  const double scale = std::sqrt(2.0 * std::numbers::pi * g.hbar) / (g.dq * n);
  for (int s = 0; s < n; ++s) {
    const double p = g.momentum(s);
    work[g.wrapped_index(s)] = scale * std::polar(1.0, p * g.q_min / g.hbar) * m.phi[s];
  }
  fft::backward(std::span(work));
  return Wavefunction(g, std::move(work));
}

cplx momentum_amplitude_at(const Wavefunction& psi, double p) {
  const auto& g = psi.grid();
  cplx acc{0.0, 0.0};
  for (int j = 0; j < g.n; ++j) acc += psi[j] * std::polar(1.0, -p * g.q(j) / g.hbar);
  return acc * (g.dq / std::sqrt(2.0 * std::numbers::pi * g.hbar));
}

cplx interpolate(const GridSpec& grid, std::span<const cplx> field, double q) {
  if (static_cast<int>(field.size()) != grid.n)
    throw InvalidArgument("field size does not match the grid");
  const int n = grid.n;
  const double x = 2.0 * std::numbers::pi * (q - grid.q_min) / grid.length();
  cplx acc{0.0, 0.0};
  for (int s = 0; s < n; ++s) {
    const int k = grid.wrapped_mode(s);
    cplx c{0.0, 0.0};
    for (int j = 0; j < n; ++j)
      c += field[j] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) * j / n);
    if (k == -n / 2)
      acc += c * std::cos(k * x);
    else
      acc += c * std::polar(1.0, k * x);
  }
  return acc / static_cast<double>(n);
}

ComplexField apply_momentum_power(const GridSpec& grid, std::span<const cplx> field,
                                  int power) {
  if (power < 0 || power > kMaxMomentumPower)
    throw InvalidArgument("order", "momentum power must be in 0.." +
                                       std::to_string(kMaxMomentumPower));
  if (static_cast<int>(field.size()) != grid.n)
    throw InvalidArgument("field size does not match the grid");
  auto powers = detail::momentum_powers<double>(grid, field, power);
  return std::move(powers.back());
}

ComplexField apply_momentum_power(const Wavefunction& psi, int power) {
  return apply_momentum_power(psi.grid(), psi.view(), power);
}

double integrate(const GridSpec& grid, std::span<const double> values) {
  double s = 0.0;
  for (double v : values) s += v;
  return s * grid.dq;
}

double integrate(const RealProfile& profile) {
  double s = 0.0;
  for (int j = 0; j < profile.size(); ++j)
    if (profile.defined(j)) s += profile.values[j];
  return s * profile.grid.dq;
}

RealProfile spatial_derivative(const RealProfile& profile) {
  const auto& g = profile.grid;
  const int n = g.n;
  ComplexField work(profile.values.begin(), profile.values.end());
  fft::forward(std::span(work));
  const double dk = 2.0 * std::numbers::pi / g.length();
  for (int k = 0; k < n; ++k) {
    const int mode = g.wrapped_mode(k);
    work[k] = (mode == -n / 2) ? cplx{} : work[k] * cplx(0.0, mode * dk / n);
  }
  fft::backward(std::span(work));
  RealProfile out;
  out.grid = g;
  out.mask = profile.mask;
  out.values.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) out.values[j] = work[j].real();
  return out;
}

ComplexField spatial_derivative(const GridSpec& grid, std::span<const cplx> field) {
  auto p_field = apply_momentum_power(grid, field, 1);
  const cplx factor(0.0, 1.0 / grid.hbar);
  for (auto& v : p_field) v *= factor;
  return p_field;
}

}  // namespace locmom
