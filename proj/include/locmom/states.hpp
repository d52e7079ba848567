#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "locmom/grid.hpp"

namespace locmom {

struct GaussianRecipe {
  double s = 1.0;
  double k0 = 0.0;
  double q0 = 0.0;
};

/// e^{ikq}; k must be commensurate with the window length.
struct PlaneWaveRecipe {
  double k = 0.0;
};

/// Harmonic-oscillator eigenstate centred at q = 0 for the grid's mass.
struct OscillatorRecipe {
  int level = 0;
  double omega = 1.0;
};

struct StateRecipe;
struct SuperpositionBranch;

struct SuperpositionRecipe {
  std::vector<SuperpositionBranch> branches;
};

struct StateRecipe {
  std::variant<GaussianRecipe, PlaneWaveRecipe, OscillatorRecipe, SuperpositionRecipe> kind;
};

struct SuperpositionBranch {
  cplx coeff{1.0, 0.0};
  StateRecipe recipe;
};

inline constexpr int kMaxOscillatorLevel = 4;

/// Canonical text, e.g. "gaussian(s=1,k0=2,q0=0)" or
/// "superposition[(1,0)*gaussian(s=1,k0=0,q0=-4),(1,0)*gaussian(s=1,k0=0,q0=4)]".
/// Numbers are printed with 17 significant digits, so
/// format_recipe(parse_recipe(format_recipe(r))) == format_recipe(r).
std::string format_recipe(const StateRecipe& recipe);

/// Throws InvalidArgument (field "state") naming the offending token.
StateRecipe parse_recipe(std::string_view text);

/// Builds the normalized state. Throws PreconditionError naming the failed
/// check when the recipe does not fit the grid.
Wavefunction synthesize(const StateRecipe& recipe, const GridSpec& grid);

/// sum_i c_i * synthesize(branch_i), before the final renormalization.
ComplexField superposition_amplitudes(const SuperpositionRecipe& recipe,
                                      const GridSpec& grid);

/// True when every leaf of the recipe is a localized state.
bool recipe_is_localized(const StateRecipe& recipe);

/// Convenience constructors.
StateRecipe gaussian(double s, double k0, double q0);
StateRecipe plane_wave(double k);
StateRecipe oscillator(int level, double omega);
StateRecipe superposition(std::vector<SuperpositionBranch> branches);

/// Wavenumber with exactly `cycles` periods across the window.
double commensurate_wavenumber(const GridSpec& grid, int cycles);

/// Closed-form local momentum profiles of a Gaussian packet.
struct GaussianOracle {
  double s = 1.0;
  double k0 = 0.0;
  double q0 = 0.0;
  double hbar = 1.0;

  double density(double q) const;
  double mean_p(double q) const;
  double second_moment_S(double q) const;
  double second_moment_W(double q) const;
  /// |p psi|^2 / rho
  double sandwich_over_density(double q) const;
  double variance_C(double q) const;
  double variance_S(double q) const;
  double variance_W(double q) const;
  /// <p^2> over the whole state.
  double global_p2() const;
};

/// Throws InvalidArgument when the recipe is not a Gaussian.
GaussianOracle gaussian_oracle(const StateRecipe& recipe, double hbar = 1.0);

}  // namespace locmom
