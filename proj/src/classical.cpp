#include "locmom/classical.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "kernels/kernels.hpp"
#include "locmom/error.hpp"

namespace locmom {
namespace {

constexpr double kClipMagnitude = 1e-9;

struct RowStats {
  std::vector<double> mass;
  std::vector<double> mean;
  std::vector<double> variance;
};

RowStats row_stats(const PhaseSpaceDensity& f, const ClassicalObservable& a) {
  if (a.values.size() != f.values.size())
    throw InvalidArgument("observable", "classical observable does not match the density lattice");
  const auto n = static_cast<std::size_t>(f.grid.n);
  RowStats s{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  kernels::openmp::row_stats({f.values, a.values, f.n_p, f.dp}, {s.mass, s.mean, s.variance});
  return s;
}

std::vector<std::uint8_t> support(const std::vector<double>& mass) {
  const double peak = *std::max_element(mass.begin(), mass.end());
  if (!(peak > 0)) throw PreconditionError("state has no support");
  std::vector<std::uint8_t> mask(mass.size());
  for (std::size_t j = 0; j < mass.size(); ++j) mask[j] = mass[j] > kMaskEps * peak ? 1 : 0;
  return mask;
}

}  // namespace

std::vector<double> PhaseSpaceDensity::position_marginal() const {
  const std::vector<double> w(static_cast<std::size_t>(n_p), dp);
  std::vector<double> out(static_cast<std::size_t>(grid.n));
  kernels::openmp::row_dot({values, w, n_p}, out);
  return out;
}

PhaseSpaceDensity make_phase_space_density(const GridSpec& grid, double p_min, double dp,
                                           int n_p, std::vector<double> values) {
  if (n_p < 1 || !(dp > 0))
    throw InvalidArgument("momentum axis needs at least one point and positive spacing");
  if (values.size() != static_cast<std::size_t>(grid.n) * n_p)
    throw InvalidArgument("density values do not match the lattice");
  double total = 0.0;
  for (double v : values) {
    if (!std::isfinite(v) || v < 0)
      throw PreconditionError("classical density must be finite and nonnegative");
    total += v;
  }
  total *= grid.dq * dp;
  if (std::abs(total - 1.0) > kDensityNormTolerance) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", total);
    throw PreconditionError(std::string("classical density is not normalized: total mass ") + buf);
  }
  return PhaseSpaceDensity{grid, p_min, dp, n_p, std::move(values)};
}

PhaseSpaceDensity sample_bivariate_gaussian(const GridSpec& grid, double p_min, double dp,
                                            int n_p, const BivariateGaussian& g) {
  if (!(g.sigma_q > 0) || !(g.sigma_p > 0) || !(std::abs(g.correlation) < 1))
    throw InvalidArgument("bivariate Gaussian needs positive widths and |correlation| < 1");
  const double r = g.correlation;
  std::vector<double> v(static_cast<std::size_t>(grid.n) * n_p);
  double total = 0.0;
  for (int i = 0; i < grid.n; ++i) {
    const double x = (grid.q(i) - g.mean_q) / g.sigma_q;
    for (int k = 0; k < n_p; ++k) {
      const double y = (p_min + k * dp - g.mean_p) / g.sigma_p;
      const double e = std::exp(-(x * x - 2 * r * x * y + y * y) / (2 * (1 - r * r)));
      v[static_cast<std::size_t>(i) * n_p + k] = e;
      total += e;
    }
  }
  const double scale = 1.0 / (total * grid.dq * dp);
  for (auto& e : v) e *= scale;
  return make_phase_space_density(grid, p_min, dp, n_p, std::move(v));
}

ClassicalObservable momentum_symbol(const PhaseSpaceDensity& f) {
  return sample_symbol(f, [](double, double p) { return p; });
}

ClassicalObservable position_symbol(const PhaseSpaceDensity& f, const std::vector<double>& g) {
  if (static_cast<int>(g.size()) != f.grid.n)
    throw InvalidArgument("observable", "position function does not match the grid");
  ClassicalObservable a;
  a.values.resize(f.values.size());
  for (int i = 0; i < f.grid.n; ++i)
    std::fill_n(a.values.begin() + static_cast<std::ptrdiff_t>(i) * f.n_p, f.n_p, g[i]);
  return a;
}

ClassicalObservable sample_symbol(const PhaseSpaceDensity& f,
                                  const std::function<double(double, double)>& fn) {
  ClassicalObservable a;
  a.values.resize(f.values.size());
  for (int i = 0; i < f.grid.n; ++i)
    for (int k = 0; k < f.n_p; ++k) {
      const double v = fn(f.grid.q(i), f.p(k));
      if (!std::isfinite(v)) throw InvalidArgument("observable", "classical observable is not finite");
      a.values[static_cast<std::size_t>(i) * f.n_p + k] = v;
    }
  return a;
}

RealProfile classical_local_moment(const PhaseSpaceDensity& f, const ClassicalObservable& a,
                                   int n) {
  if (n < 1 || n > kMaxObservablePower)
    throw InvalidArgument("order", "classical moment order must be in 1..4");
  if (a.values.size() != f.values.size())
    throw InvalidArgument("observable", "classical observable does not match the density lattice");
  const auto mass = f.position_marginal();
  auto mask = support(mass);
  std::vector<double> w(a.values.size());
  for (std::size_t c = 0; c < w.size(); ++c) w[c] = std::pow(a.values[c], n) * f.dp;
  std::vector<double> sums(mass.size());
  kernels::openmp::row_dot({f.values, w, f.n_p}, sums);

  RealProfile out;
  out.grid = f.grid;
  out.values.assign(mass.size(), 0.0);
  for (std::size_t j = 0; j < mass.size(); ++j)
    if (mask[j]) out.values[j] = sums[j] / mass[j];
  out.mask = std::move(mask);
  return out;
}

RealProfile classical_local_variance(const PhaseSpaceDensity& f, const ClassicalObservable& a) {
  auto stats = row_stats(f, a);
  auto mask = support(stats.mass);
  RealProfile out;
  out.grid = f.grid;
  out.values.assign(stats.mass.size(), 0.0);
  for (std::size_t j = 0; j < mask.size(); ++j)
    if (mask[j]) out.values[j] = stats.variance[j];
  out.mask = std::move(mask);
  return out;
}

ObservableDistribution observable_distribution(const PhaseSpaceDensity& f,
                                               const ClassicalObservable& a, int bin_count) {
  if (bin_count < kMinBinCount)
    throw InvalidArgument("bins", "bin_count must be at least " + std::to_string(kMinBinCount));
  if (a.values.size() != f.values.size())
    throw InvalidArgument("observable", "classical observable does not match the density lattice");

  const double peak = *std::max_element(f.values.begin(), f.values.end());
  double lo = INFINITY;
  double hi = -INFINITY;
  for (std::size_t c = 0; c < f.values.size(); ++c)
    if (f.values[c] > kMaskEps * peak) {
      lo = std::min(lo, a.values[c]);
      hi = std::max(hi, a.values[c]);
    }
  if (!(hi >= lo)) throw PreconditionError("state has no support");
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }

  const int n = f.grid.n;
  ObservableDistribution d;
  d.bin_count = bin_count;
  d.grid = f.grid;
  d.da = (hi - lo) / bin_count;
  d.edges.resize(static_cast<std::size_t>(bin_count) + 1);
  for (int b = 0; b <= bin_count; ++b) d.edges[b] = lo + b * d.da;
  d.edges.back() = hi;

  d.joint.assign(static_cast<std::size_t>(bin_count) * n, 0.0);
  const double cell = f.dp / d.da;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < f.n_p; ++k) {
      const auto c = static_cast<std::size_t>(i) * f.n_p + k;
      const double v = a.values[c];
      int b = static_cast<int>(std::floor((v - lo) / d.da));
      b = std::clamp(b, 0, bin_count - 1);
      d.joint[static_cast<std::size_t>(b) * n + i] += f.values[c] * cell;
    }

  d.position = f.position_marginal();
  d.mask = support(d.position);
  d.marginal.assign(static_cast<std::size_t>(bin_count), 0.0);
  d.conditional.assign(d.joint.size(), 0.0);
  for (int b = 0; b < bin_count; ++b)
    for (int i = 0; i < n; ++i) {
      const double pj = d.joint[static_cast<std::size_t>(b) * n + i];
      d.marginal[b] += pj * f.grid.dq;
      if (d.mask[i]) d.conditional[static_cast<std::size_t>(b) * n + i] = pj / d.position[i];
    }
  return d;
}

RealProfile local_mean_from_distribution(const ObservableDistribution& d) {
  const int n = d.grid.n;
  RealProfile out;
  out.grid = d.grid;
  out.values.assign(static_cast<std::size_t>(n), 0.0);
  out.mask = d.mask;
  for (int b = 0; b < d.bin_count; ++b)
    for (int i = 0; i < n; ++i)
      if (d.mask[i]) out.values[i] += d.center(b) * d.conditional[static_cast<std::size_t>(b) * n + i] * d.da;
  return out;
}

VarianceDecomposition classical_variance_decomposition(const PhaseSpaceDensity& f,
                                                       const ClassicalObservable& a) {
  const auto stats = row_stats(f, a);
  double mean = 0.0;
  for (std::size_t c = 0; c < f.values.size(); ++c) mean += a.values[c] * f.values[c];
  mean *= f.grid.dq * f.dp;
  double direct = 0.0;
  for (std::size_t c = 0; c < f.values.size(); ++c) {
    const double d = a.values[c] - mean;
    direct += d * d * f.values[c];
  }

  VarianceDecomposition out;
  out.definition = Definition::classical;
  out.direct_total = direct * f.grid.dq * f.dp;
  for (int i = 0; i < f.grid.n; ++i) {
    if (!(stats.mass[i] > 0)) continue;
    const double d = stats.mean[i] - mean;
    out.avg_local_variance += stats.variance[i] * stats.mass[i] * f.grid.dq;
    out.variance_of_local_avg += d * d * stats.mass[i] * f.grid.dq;
  }
  out.total = out.avg_local_variance + out.variance_of_local_avg;
  return out;
}

PhaseSpaceDensity wigner_as_classical(const StateRecipe& recipe, const GridSpec& grid) {
  if (!std::holds_alternative<GaussianRecipe>(recipe.kind))
    throw PreconditionError("Wigner not nonnegative: only gaussian recipes have a nonnegative Wigner function");
  const auto psi = synthesize(recipe, grid);
  auto w = wigner_transform(psi, WignerBoundary::aperiodic);
  for (auto& v : w.values) {
    if (v >= 0) continue;
    if (v < -kClipMagnitude) throw PreconditionError("Wigner not nonnegative");
    v = 0.0;
  }
  return make_phase_space_density(grid, w.p_min, w.dp, w.n_p, std::move(w.values));
}

QuasiDistribution as_quasi_distribution(const PhaseSpaceDensity& f) {
  QuasiDistribution q;
  q.kind = DistributionKind::classical;
  q.grid = f.grid;
  q.p_min = f.p_min;
  q.dp = f.dp;
  q.n_p = f.n_p;
  q.values = f.values;
  q.min_cell = locate_minimum(q);
  return q;
}

}  // namespace locmom
