#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace locmom {

using cplx = std::complex<double>;
using ComplexField = std::vector<cplx>;

/// Uniform periodic position grid q_j = q_min + j*dq, j = 0..n-1, together
/// with the physical constants hbar and mass.
///
/// The conjugate momentum grid has n points with spacing
/// dp = 2*pi*hbar/(n*dq). Internally (FFT order) index k maps to the signed
/// mode k for k < n/2 and k - n otherwise. Every momentum array handed out
/// by the library is sorted ascending instead: index s holds mode s - n/2,
/// so p runs from -n/2*dp up to (n/2 - 1)*dp.
struct GridSpec {
  int n = 0;
  double q_min = 0.0;
  double q_max = 0.0;
  double dq = 0.0;
  double dp = 0.0;
  double hbar = 1.0;
  double mass = 1.0;

  double length() const noexcept { return q_max - q_min; }
  double q(int j) const noexcept { return q_min + j * dq; }

  /// Signed mode number of FFT-ordered index k.
  int wrapped_mode(int k) const noexcept { return k < n / 2 ? k : k - n; }
  /// Momentum of FFT-ordered index k.
  double wrapped_momentum(int k) const noexcept { return wrapped_mode(k) * dp; }
  /// Momentum of ascending index s.
  double momentum(int s) const noexcept { return (s - n / 2) * dp; }
  /// FFT-ordered index of ascending index s.
  int wrapped_index(int s) const noexcept { return (s + n / 2) % n; }

  std::vector<double> positions() const;
  std::vector<double> momenta() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Validating constructor. Throws InvalidArgument when n is odd or below 8,
/// the window is inverted, or hbar/mass are not positive.
GridSpec make_grid(int n, double q_min, double q_max, double hbar = 1.0,
                   double mass = 1.0);

/// Position-space state psi(q_j).
class Wavefunction {
 public:
  Wavefunction() = default;
  /// Throws InvalidArgument on size mismatch or non-finite amplitudes.
  Wavefunction(GridSpec grid, ComplexField amp);

  const GridSpec& grid() const noexcept { return grid_; }
  const ComplexField& amp() const noexcept { return amp_; }
  std::span<const cplx> view() const noexcept { return amp_; }
  int size() const noexcept { return grid_.n; }
  const cplx& operator[](int j) const noexcept { return amp_[j]; }

  /// sum |psi_j|^2 dq
  double norm_squared() const noexcept;
  std::vector<double> density() const;
  /// Returns a copy scaled to unit norm. Throws PreconditionError for the
  /// zero state.
  Wavefunction normalized() const;

 private:
  GridSpec grid_{};
  ComplexField amp_;
};

/// Real function of q with a validity mask (1 = value defined).
struct RealProfile {
  GridSpec grid{};
  std::vector<double> values;
  std::vector<std::uint8_t> mask;

  static RealProfile filled(const GridSpec& grid, double value);
  static RealProfile from_values(const GridSpec& grid, std::vector<double> values);

  int size() const noexcept { return static_cast<int>(values.size()); }
  bool defined(int j) const noexcept { return mask[j] != 0; }
  int count_defined() const noexcept;
};

/// Default relative threshold for the support mask:
/// q_j is masked in when rho_j > kMaskEps * max rho.
inline constexpr double kMaskEps = 1e-10;

/// The shared rho-threshold mask.
std::vector<std::uint8_t> support_mask(const Wavefunction& psi,
                                       double mask_eps = kMaskEps);

/// Edge density max(rho_0, rho_{n-1}).
double edge_density(const Wavefunction& psi) noexcept;

/// A state is localized when its density at both window edges is below this.
inline constexpr double kEdgeDensityBound = 1e-12;

bool is_localized(const Wavefunction& psi) noexcept;

}  // namespace locmom
