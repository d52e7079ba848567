#pragma once

#include <span>
#include <vector>

#include "locmom/grid.hpp"

namespace locmom {

/// Momentum-space amplitudes phi(p_s) on the ascending momentum grid.
struct MomentumAmplitudes {
  GridSpec grid{};
  ComplexField phi;

  std::vector<double> momenta() const { return grid.momenta(); }
  /// sum |phi_s|^2 dp
  double norm_squared() const noexcept;
};

/// phi(p_s) = dq / sqrt(2 pi hbar) * sum_j psi(q_j) exp(-i p_s q_j / hbar).
MomentumAmplitudes momentum_representation(const Wavefunction& psi);

/// Inverse of momentum_representation.
Wavefunction position_representation(const MomentumAmplitudes& phi);

/// The same sum evaluated directly at an arbitrary momentum. O(n); used for
/// momenta that are not on the FFT grid (e.g. the Wigner half-spacing grid).
cplx momentum_amplitude_at(const Wavefunction& psi, double p);

/// Band-limited trigonometric interpolant of a grid field at an arbitrary q.
/// Reproduces the field at grid points; the Nyquist mode enters as a cosine.
/// O(n^2).
cplx interpolate(const GridSpec& grid, std::span<const cplx> field, double q);

inline constexpr int kMaxMomentumPower = 8;

/// <q_j| p^power |psi>, computed spectrally. power = 0 returns psi.
/// Throws InvalidArgument when power is negative or above kMaxMomentumPower.
ComplexField apply_momentum_power(const Wavefunction& psi, int power);
ComplexField apply_momentum_power(const GridSpec& grid, std::span<const cplx> field,
                                  int power);

/// sum values_j dq over masked-in points (rectangle rule, exact for the
/// periodic trapezoid).
double integrate(const RealProfile& profile);
double integrate(const GridSpec& grid, std::span<const double> values);

/// Spectral d/dq. The real overload drops the Nyquist mode so the result
/// stays real; the complex overload is (i/hbar) p applied to the field.
/// The mask of the input is carried over unchanged.
RealProfile spatial_derivative(const RealProfile& profile);
ComplexField spatial_derivative(const GridSpec& grid, std::span<const cplx> field);

}  // namespace locmom
