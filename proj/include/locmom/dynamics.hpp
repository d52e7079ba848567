#pragma once

#include <array>
#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "locmom/grid.hpp"
#include "locmom/local_moments.hpp"

namespace locmom {

/// V(q_j) with its analytic gradient. Built-ins only.
struct Potential {
  std::string label;
  std::vector<double> values;
  std::vector<double> gradient;
};

Potential free_potential(const GridSpec& grid);
/// m omega^2 q^2 / 2
Potential harmonic_potential(const GridSpec& grid, double omega);
/// height * exp(-(q - center)^2 / (2 width^2))
Potential barrier_potential(const GridSpec& grid, double height, double width, double center);

/// "free", "harmonic:OMEGA" or "barrier:HEIGHT,WIDTH,CENTER".
/// Throws InvalidArgument (field "potential").
Potential parse_potential(std::string_view text, const GridSpec& grid);

struct PropagationConfig {
  double dt = 1e-3;
  int steps = 100;
  int snapshot_stride = 1;
};

/// Largest p^2/(2m) among momentum modes carrying more than
/// kPopulatedModeWeight of the probability.
double populated_kinetic_max(const Wavefunction& psi);
inline constexpr double kPopulatedModeWeight = 1e-16;
inline constexpr double kStabilityBound = 0.5;

/// Largest dt passing the guard with a 10% margin.
double suggested_dt(const Wavefunction& psi);

/// Throws InvalidArgument for non-positive parameters and
/// PreconditionError (with a suggested dt) when
/// dt * populated_kinetic_max / hbar >= 0.5.
void check_stability(const Wavefunction& psi0, const PropagationConfig& cfg);

using ExtendedField = std::vector<std::complex<long double>>;

/// Snapshots are kept in extended precision; residuals difference nearby
/// snapshots and need the extra digits.
struct EvolutionTrace {
  Potential potential;
  GridSpec grid{};
  double dt = 0.0;
  int snapshot_stride = 1;
  std::vector<double> times;
  std::vector<ExtendedField> amplitudes;

  std::size_t size() const noexcept { return times.size(); }
  Wavefunction snapshot(std::size_t i) const;
  double snapshot_spacing() const noexcept { return dt * snapshot_stride; }
};

/// Strang splitting e^{-iV dt/2} e^{-iT dt} e^{-iV dt/2}. Throws
/// SelfCheckError if any snapshot drifts from unit norm by more than 1e-9.
EvolutionTrace split_step_propagate(const Wavefunction& psi0, const Potential& v,
                                    const PropagationConfig& cfg);

inline constexpr double kNormDriftBound = 1e-9;

/// Source of the first local moment in the continuity residual.
enum class MeanSource { S, MH, W };

/// max over interior snapshots and masked points of
/// |d rho/dt + d(rho pbar / m)/dq|, time derivative by centered difference.
/// Throws InvalidArgument when the trace has fewer than 3 snapshots.
double continuity_residual(const EvolutionTrace& trace, MeanSource source = MeanSource::S);

/// max over interior snapshots and masked points of
/// |d pbar/dt + (pbar/m) d pbar/dq + dV/dq + d(rho var_W)/dq / (m rho)|.
double euler_residual_W(const EvolutionTrace& trace);

/// rho pbar2_W/(2m), rho pbar2_MH/(2m) and |p psi|^2/(2m), in that order,
/// tagged W, MH and C. All three integrate to <p^2>/(2m).
std::array<LocalProfile, 3> kinetic_energy_densities(const Wavefunction& psi);

double expected_energy(const Wavefunction& psi, const Potential& v);
double mean_position(const Wavefunction& psi);

/// Residuals and state differences at dt and dt/2 for the same final time.
struct ConvergenceReport {
  double dt = 0.0;
  double final_time = 0.0;
  double continuity = 0.0;
  double continuity_half = 0.0;
  double euler = 0.0;
  double euler_half = 0.0;
  /// ||psi_dt - psi_{dt/2}|| / ||psi_{dt/2} - psi_{dt/4}||
  double state_ratio = 0.0;

  double continuity_ratio() const noexcept { return continuity / continuity_half; }
  double euler_ratio() const noexcept { return euler / euler_half; }
};

/// Propagates with dt, dt/2 and dt/4 to t = dt * steps (snapshot stride 1).
ConvergenceReport convergence_study(const Wavefunction& psi0, const Potential& v, double dt,
                                    int steps);

}  // namespace locmom
