#pragma once

#include <functional>
#include <vector>

#include "locmom/grid.hpp"
#include "locmom/local_moments.hpp"
#include "locmom/phase_space.hpp"
#include "locmom/states.hpp"

namespace locmom {

/// Nonnegative normalized F(q, p) on the q grid times a uniform p axis.
/// Row-major with one row per position, like QuasiDistribution.
struct PhaseSpaceDensity {
  GridSpec grid{};
  double p_min = 0.0;
  double dp = 0.0;
  int n_p = 0;
  std::vector<double> values;

  double p(int k) const noexcept { return p_min + k * dp; }
  double at(int i, int k) const noexcept { return values[static_cast<std::size_t>(i) * n_p + k]; }
  /// P(q_i) = sum_k F dp
  std::vector<double> position_marginal() const;
};

inline constexpr double kDensityNormTolerance = 1e-10;

/// Validates nonnegativity and unit normalization within 1e-10
/// (PreconditionError otherwise).
PhaseSpaceDensity make_phase_space_density(const GridSpec& grid, double p_min, double dp,
                                           int n_p, std::vector<double> values);

/// Bivariate normal sampled on the lattice and renormalized on it.
struct BivariateGaussian {
  double mean_q = 0.0;
  double mean_p = 0.0;
  double sigma_q = 1.0;
  double sigma_p = 1.0;
  double correlation = 0.0;
};
PhaseSpaceDensity sample_bivariate_gaussian(const GridSpec& grid, double p_min, double dp,
                                            int n_p, const BivariateGaussian& params);

/// Sampled symbol a(q_i, p_k), same layout as the density it is used with.
struct ClassicalObservable {
  std::vector<double> values;
};

ClassicalObservable momentum_symbol(const PhaseSpaceDensity& f);
ClassicalObservable position_symbol(const PhaseSpaceDensity& f, const std::vector<double>& g);
ClassicalObservable sample_symbol(const PhaseSpaceDensity& f,
                                  const std::function<double(double, double)>& a);

/// (sum_k a^n F dp) / P(q) where P(q) > kMaskEps * max P. Throws
/// PreconditionError on empty support, InvalidArgument for n outside 1..4.
RealProfile classical_local_moment(const PhaseSpaceDensity& f, const ClassicalObservable& a,
                                   int n);

/// Conditional variance by a two-pass sum; nonnegative.
RealProfile classical_local_variance(const PhaseSpaceDensity& f, const ClassicalObservable& a);

/// Histogram realization of P(a), P(a, q) and P(a|q).
struct ObservableDistribution {
  /// bin_count + 1 ascending edges; bins are [e_b, e_{b+1}) except the last,
  /// which also includes its top edge.
  std::vector<double> edges;
  double da = 0.0;
  int bin_count = 0;
  GridSpec grid{};
  /// joint[b * n + j] = P(a_b, q_j)
  std::vector<double> joint;
  /// P(a_b)
  std::vector<double> marginal;
  /// P(q_j)
  std::vector<double> position;
  /// conditional[b * n + j] = P(a_b | q_j) on rows where mask_j is set
  std::vector<double> conditional;
  std::vector<std::uint8_t> mask;

  double center(int b) const noexcept { return 0.5 * (edges[b] + edges[b + 1]); }
};

inline constexpr int kMinBinCount = 16;

/// Each cell deposits F dq dp into the bin containing a. The value range is
/// taken from cells with F > kMaskEps * max F; other cells clamp to the end
/// bins. A constant observable yields a single unit-mass bin.
ObservableDistribution observable_distribution(const PhaseSpaceDensity& f,
                                               const ClassicalObservable& a, int bin_count);

/// sum_b center_b P(a_b|q) da on the distribution mask.
RealProfile local_mean_from_distribution(const ObservableDistribution& d);

/// Classical law of total variance; sums over every row with P(q) > 0.
VarianceDecomposition classical_variance_decomposition(const PhaseSpaceDensity& f,
                                                       const ClassicalObservable& a);

/// The Wigner function of a Gaussian recipe as a classical density. Negative
/// cells of magnitude below 1e-9 are clipped to zero. Throws
/// PreconditionError ("Wigner not nonnegative") for other recipes.
PhaseSpaceDensity wigner_as_classical(const StateRecipe& recipe, const GridSpec& grid);

/// The same density viewed as a QuasiDistribution of kind classical.
QuasiDistribution as_quasi_distribution(const PhaseSpaceDensity& f);

}  // namespace locmom
