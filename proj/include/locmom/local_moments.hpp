#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "locmom/grid.hpp"

namespace locmom {

/// p^n, n in 1..kMaxObservablePower.
struct MomentumPower {
  int n = 1;
};

/// Diagonal observable g(q), sampled on the grid.
struct PositionFunction {
  std::vector<double> g;
};

/// An operator given only by its action. The square must be supplied
/// separately because its local density is not a pointwise function of the
/// action of A.
struct LinearAction {
  std::function<ComplexField(const Wavefunction&)> apply;
  std::function<ComplexField(const Wavefunction&)> apply_square;
};

using ObservableSpec = std::variant<MomentumPower, PositionFunction, LinearAction>;

inline constexpr int kMaxObservablePower = 4;

/// (A psi)(q_j). Throws InvalidArgument for an out-of-range momentum power,
/// a missing action or a size mismatch.
ComplexField apply_observable(const ObservableSpec& a, const Wavefunction& psi);
/// (A^2 psi)(q_j). Throws InvalidArgument("square action required") when a
/// LinearAction has no apply_square.
ComplexField apply_observable_square(const ObservableSpec& a, const Wavefunction& psi);

/// The position observable q itself.
ObservableSpec position_observable(const GridSpec& grid);

enum class Definition { S, C, MH, W, classical };

std::string to_string(Definition d);
/// Accepts "S", "C", "MH", "W", "classical". Throws InvalidArgument.
Definition parse_definition(std::string_view text);

/// Moment order n >= 1, or the variance tag (n == 0).
struct MomentOrder {
  int n = 1;

  static constexpr MomentOrder variance() { return MomentOrder{0}; }
  bool is_variance() const noexcept { return n == 0; }
  std::string label() const { return is_variance() ? "variance" : std::to_string(n); }
  friend bool operator==(MomentOrder, MomentOrder) = default;
};

struct LocalProfile {
  Definition definition = Definition::S;
  MomentOrder order{};
  RealProfile profile;
};

/// Re[conj(psi) (A psi)] per grid point; integrates to <A>.
RealProfile local_density_S(const Wavefunction& psi, const ObservableSpec& a);

/// local_density_S / rho on the support mask. Throws PreconditionError
/// ("state has no support") when the mask is empty.
LocalProfile local_value_S(const Wavefunction& psi, const ObservableSpec& a,
                           double mask_eps = kMaskEps);

/// Im[(A psi)/psi]^2 on the mask; nonnegative.
LocalProfile local_variance_C(const Wavefunction& psi, const ObservableSpec& a,
                              double mask_eps = kMaskEps);
/// Second route: |A psi|^2 / rho - (local value)^2.
LocalProfile local_variance_C_via_sandwich(const Wavefunction& psi, const ObservableSpec& a,
                                           double mask_eps = kMaskEps);

/// Re[conj(psi) (A^2 psi)] / rho on the mask.
LocalProfile local_second_moment_S(const Wavefunction& psi, const ObservableSpec& a,
                                   double mask_eps = kMaskEps);

/// Second moment minus the squared local value. May be negative.
LocalProfile local_variance_S(const Wavefunction& psi, const ObservableSpec& a,
                              double mask_eps = kMaskEps);

/// |(A psi)(q)|^2 per grid point; nonnegative, integrates to <A^2>.
RealProfile sandwich_density(const Wavefunction& psi, const ObservableSpec& a);

/// max over the mask of |sandwich_density - local_density_S(A^2)|.
double density_inequality_witness(const Wavefunction& psi, const ObservableSpec& a,
                                  double mask_eps = kMaskEps);

/// <psi|A|psi> computed directly (momentum-space for p^n).
double global_average(const Wavefunction& psi, const ObservableSpec& a);

/// <psi|A^2|psi> - <psi|A|psi>^2 computed directly.
double global_variance(const Wavefunction& psi, const ObservableSpec& a);

struct VarianceDecomposition {
  /// integral of the local variance against rho
  double avg_local_variance = 0.0;
  /// integral of (local value - <A>)^2 against rho
  double variance_of_local_avg = 0.0;
  /// avg_local_variance + variance_of_local_avg
  double total = 0.0;
  /// variance computed without passing through local quantities
  double direct_total = 0.0;
  Definition definition = Definition::S;

  double residual() const noexcept;
};

/// Law-of-total-variance split of the variance of A under one definition.
/// MH and W are supported for momentum powers (whose phase-space symbol is
/// p^n) and for position functions. Both components are summed from the
/// density-weighted moments rho*A_1 and rho*A_2, so near-node points keep
/// their finite contribution; quotients by rho are taken where
/// rho > kDensityFloor.
/// Throws PreconditionError when the points outside the mask carry more than
/// kMaskedMassBound of probability.
inline constexpr double kDensityFloor = 1e-300;
inline constexpr double kMaskedMassBound = 1e-8;
VarianceDecomposition variance_decomposition(const Wavefunction& psi, const ObservableSpec& a,
                                             Definition definition,
                                             double mask_eps = kMaskEps);

}  // namespace locmom
