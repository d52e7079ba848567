#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "locmom/grid.hpp"
#include "locmom/spectral.hpp"
#include "locmom/states.hpp"

namespace testing {

using locmom::cplx;

inline constexpr double kPi = std::numbers::pi;

/// n = 512 on [-20, 20), hbar = m = 1.
inline locmom::GridSpec desk_grid() { return locmom::make_grid(512, -20.0, 20.0); }

inline locmom::StateRecipe reference_gaussian() { return locmom::gaussian(1.0, 2.0, 0.0); }

inline locmom::StateRecipe two_gaussians(double separation = 4.0) {
  return locmom::superposition({{cplx{1, 0}, locmom::gaussian(1.0, 0.0, -separation)},
                                {cplx{1, 0}, locmom::gaussian(1.0, 0.0, separation)}});
}

/// Index of the grid point closest to q.
inline int index_of(const locmom::GridSpec& g, double q) {
  return static_cast<int>(std::lround((q - g.q_min) / g.dq));
}

/// Local S mean and variance of p at an off-grid q, from the band-limited
/// interpolants of psi, p psi and p^2 psi.
struct OffGridS {
  double mean;
  double variance;
};
inline OffGridS local_S_at(const locmom::Wavefunction& psi, double q) {
  const auto& g = psi.grid();
  const cplx v = locmom::interpolate(g, psi.view(), q);
  const cplx u1 = locmom::interpolate(g, locmom::apply_momentum_power(psi, 1), q);
  const cplx u2 = locmom::interpolate(g, locmom::apply_momentum_power(psi, 2), q);
  const double rho = std::norm(v);
  const double mean = (std::conj(v) * u1).real() / rho;
  return {mean, (std::conj(v) * u2).real() / rho - mean * mean};
}

/// max |profile - expected(q)| over the profile's mask.
template <class Profile, class F>
double max_error_on_mask(const Profile& p, F&& expected) {
  double worst = 0.0;
  for (int j = 0; j < p.size(); ++j)
    if (p.defined(j)) worst = std::max(worst, std::abs(p.values[j] - expected(p.grid.q(j))));
  return worst;
}

template <class Profile>
double max_difference(const Profile& a, const Profile& b) {
  double worst = 0.0;
  for (int j = 0; j < a.size(); ++j)
    if (a.defined(j) && b.defined(j)) worst = std::max(worst, std::abs(a.values[j] - b.values[j]));
  return worst;
}

/// Seeded generator of random test states.
class StateGen {
 public:
  explicit StateGen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  locmom::StateRecipe gaussian() {
    return locmom::gaussian(uniform(0.7, 1.5), uniform(-3.0, 3.0), uniform(-4.0, 4.0));
  }

  locmom::StateRecipe superposition() {
    std::vector<locmom::SuperpositionBranch> b;
    const int count = integer(2, 3);
    for (int i = 0; i < count; ++i)
      b.push_back({cplx{uniform(-1, 1), uniform(-1, 1)}, gaussian()});
    return locmom::superposition(std::move(b));
  }

  locmom::StateRecipe any() {
    switch (integer(0, 2)) {
      case 0: return gaussian();
      case 1: return superposition();
      default: return locmom::oscillator(integer(0, 4), uniform(0.5, 2.0));
    }
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace testing
