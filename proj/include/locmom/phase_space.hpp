#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "locmom/grid.hpp"
#include "locmom/local_moments.hpp"

namespace locmom {

enum class DistributionKind { weyl_wigner, margenau_hill, classical };

std::string to_string(DistributionKind k);
DistributionKind parse_distribution_kind(std::string_view text);

struct CellLocation {
  int q_index = 0;
  int p_index = 0;
  double q = 0.0;
  double p = 0.0;
  double value = 0.0;
};

/// Real function on a q x p lattice. values is row-major with one row per
/// position: values[i * n_p + k] = F(q_i, p_k), p_k = p_min + k * dp.
struct QuasiDistribution {
  DistributionKind kind = DistributionKind::weyl_wigner;
  GridSpec grid{};
  double p_min = 0.0;
  double dp = 0.0;
  int n_p = 0;
  std::vector<double> values;
  /// Smallest cell, filled in by the producing transform.
  CellLocation min_cell{};

  double p(int k) const noexcept { return p_min + k * dp; }
  std::vector<double> pgrid() const;
  double at(int i, int k) const noexcept { return values[static_cast<std::size_t>(i) * n_p + k]; }

  /// sum_k F(q_i, p_k) dp per row.
  std::vector<double> q_marginal() const;
  /// sum_i F(q_i, p_k) dq per column.
  std::vector<double> p_marginal() const;
  double total() const;
};

/// Recomputes min_cell from values.
CellLocation locate_minimum(const QuasiDistribution& f);

enum class WignerBoundary {
  /// aperiodic for localized states, periodic otherwise
  automatic,
  /// the state is extended by zeros outside the window
  aperiodic,
  /// the correlation product wraps around the window
  periodic,
};

/// W(q_i, p_k) = dq/(pi hbar) sum_{j=-n/2}^{n/2-1} conj(psi_{i+j}) psi_{i-j} e^{2 i p_k j dq / hbar}
/// on the half-spacing momentum grid p_k = (k - n/2) pi hbar / (n dq).
/// Requesting the aperiodic boundary for a state that violates the edge
/// decay bound throws PreconditionError.
QuasiDistribution wigner_transform(const Wavefunction& psi,
                                   WignerBoundary boundary = WignerBoundary::automatic);

/// The Wigner sum above evaluated at position index i and arbitrary p.
double wigner_value(const Wavefunction& psi, int i, double p,
                    WignerBoundary boundary = WignerBoundary::automatic);

/// F(q_j, p_s) = Re[phi(p_s) conj(psi_j) e^{i p_s q_j / hbar}] / sqrt(2 pi hbar)
/// on the standard momentum grid.
QuasiDistribution margenau_hill_transform(const Wavefunction& psi);

/// (sum_k p_k^n F(q, p_k) dp) / rho(q) on the support mask of psi, n in 1..4.
/// Tagged W, MH or classical after the distribution kind. Throws
/// InvalidArgument when F was built on a different grid.
LocalProfile phase_space_local_moment(const QuasiDistribution& f, const Wavefunction& psi,
                                      int n, double mask_eps = kMaskEps);

/// Second minus squared first phase-space local moment.
LocalProfile phase_space_local_variance(const QuasiDistribution& f, const Wavefunction& psi,
                                        double mask_eps = kMaskEps);

/// sum_{i,k} p_k^n F dq dp.
double phase_space_global_moment(const QuasiDistribution& f, int n);

/// G(tau, q) on the lattice hbar*tau = shift*dq.
struct CharacteristicSlice {
  double tau = 0.0;
  int shift = 0;
  std::vector<cplx> values;
  std::vector<std::uint8_t> mask;
};

/// G = psi(q + hbar tau)/(2 psi(q)) + conj(psi(q - hbar tau))/(2 conj(psi(q)))
/// with periodic shifts. Throws InvalidArgument when hbar*tau is not an
/// integer multiple of dq.
CharacteristicSlice characteristic_function_S(const Wavefunction& psi, double tau,
                                              double mask_eps = kMaskEps);
CharacteristicSlice characteristic_function_S_shift(const Wavefunction& psi, int shift,
                                                    double mask_eps = kMaskEps);

/// P^S(p|q) on the standard momentum grid, obtained by a discrete inverse
/// transform of G over the lattice tau_m = m dq / hbar, m = -n/2 .. n/2-1.
struct ConditionalDistribution {
  GridSpec grid{};
  double p_min = 0.0;
  double dp = 0.0;
  int n_p = 0;
  /// row-major, one row per position
  std::vector<double> values;
  /// rows where psi is nonzero
  std::vector<std::uint8_t> row_defined;

  double at(int i, int k) const noexcept { return values[static_cast<std::size_t>(i) * n_p + k]; }
};

/// Rows are defined wherever |psi| exceeds kConditionalAmplitudeFloor.
inline constexpr double kConditionalAmplitudeFloor = 1e-150;

ConditionalDistribution conditional_momentum_S(const Wavefunction& psi);

/// rho(q) P^S(p|q) per cell. Cross-checks the product against the
/// Margenau-Hill transform and throws SelfCheckError when any cell differs
/// by more than tolerance.
QuasiDistribution bayes_product(const Wavefunction& psi, const ConditionalDistribution& p_s,
                                double tolerance = 1e-7);

/// (2 |p psi|^2 - 2 Re[conj(psi) p^2 psi]) / (4 rho) on the mask; equals
/// var_W - var_MH and var_C - var_W.
RealProfile variance_difference_term(const Wavefunction& psi, double mask_eps = kMaskEps);

}  // namespace locmom
