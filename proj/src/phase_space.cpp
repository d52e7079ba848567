#include "locmom/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "kernels/kernels.hpp"
#include "locmom/error.hpp"
#include "locmom/spectral.hpp"

namespace locmom {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<std::uint8_t> mask_with_support(const Wavefunction& psi, double mask_eps) {
  auto mask = support_mask(psi, mask_eps);
  if (std::find(mask.begin(), mask.end(), std::uint8_t{1}) == mask.end())
    throw PreconditionError("state has no support");
  return mask;
}

bool use_periodic(const Wavefunction& psi, WignerBoundary boundary) {
  switch (boundary) {
    case WignerBoundary::periodic: return true;
    case WignerBoundary::aperiodic:
      if (!is_localized(psi))
        throw PreconditionError(
            "aperiodic Wigner transform needs a localized state: edge density exceeds 1e-12");
      return false;
    case WignerBoundary::automatic: return !is_localized(psi);
  }
  return false;
}

Definition definition_of(DistributionKind k) {
  switch (k) {
    case DistributionKind::weyl_wigner: return Definition::W;
    case DistributionKind::margenau_hill: return Definition::MH;
    case DistributionKind::classical: return Definition::classical;
  }
  return Definition::W;
}

std::vector<double> row_sums(const QuasiDistribution& f, std::span<const double> weights) {
  std::vector<double> out(static_cast<std::size_t>(f.grid.n));
  kernels::openmp::row_dot({f.values, weights, f.n_p}, out);
  return out;
}

}  // namespace

std::string to_string(DistributionKind k) {
  switch (k) {
    case DistributionKind::weyl_wigner: return "wigner";
    case DistributionKind::margenau_hill: return "mh";
    case DistributionKind::classical: return "classical";
  }
  return "?";
}

DistributionKind parse_distribution_kind(std::string_view text) {
  if (text == "wigner") return DistributionKind::weyl_wigner;
  if (text == "mh") return DistributionKind::margenau_hill;
  if (text == "classical") return DistributionKind::classical;
  throw InvalidArgument("kind", "unknown distribution kind '" + std::string(text) + "'");
}

std::vector<double> QuasiDistribution::pgrid() const {
  std::vector<double> out(static_cast<std::size_t>(n_p));
  for (int k = 0; k < n_p; ++k) out[k] = p(k);
  return out;
}

std::vector<double> QuasiDistribution::q_marginal() const {
  const std::vector<double> w(static_cast<std::size_t>(n_p), dp);
  std::vector<double> out(static_cast<std::size_t>(grid.n));
  kernels::openmp::row_dot({values, w, n_p}, out);
  return out;
}

std::vector<double> QuasiDistribution::p_marginal() const {
  std::vector<double> out(static_cast<std::size_t>(n_p), 0.0);
  for (int i = 0; i < grid.n; ++i)
    for (int k = 0; k < n_p; ++k) out[k] += at(i, k);
  for (auto& v : out) v *= grid.dq;
  return out;
}

double QuasiDistribution::total() const {
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc * grid.dq * dp;
}

CellLocation locate_minimum(const QuasiDistribution& f) {
  const auto it = std::min_element(f.values.begin(), f.values.end());
  if (it == f.values.end()) return {};
  const auto idx = static_cast<int>(it - f.values.begin());
  CellLocation c;
  c.q_index = idx / f.n_p;
  c.p_index = idx % f.n_p;
  c.q = f.grid.q(c.q_index);
  c.p = f.p(c.p_index);
  c.value = *it;
  return c;
}

QuasiDistribution wigner_transform(const Wavefunction& psi, WignerBoundary boundary) {
  const auto& g = psi.grid();
  const bool periodic = use_periodic(psi, boundary);
  QuasiDistribution f;
  f.kind = DistributionKind::weyl_wigner;
  f.grid = g;
  f.n_p = g.n;
  f.dp = kPi * g.hbar / (g.n * g.dq);
  f.p_min = -(g.n / 2) * f.dp;
  f.values.resize(static_cast<std::size_t>(g.n) * g.n);
  kernels::openmp::wigner_rows({psi.view(), periodic, g.dq / (kPi * g.hbar)}, f.values);
  f.min_cell = locate_minimum(f);
  return f;
}

double wigner_value(const Wavefunction& psi, int i, double p, WignerBoundary boundary) {
  const auto& g = psi.grid();
  if (i < 0 || i >= g.n) throw InvalidArgument("position index out of range");
  const bool periodic = use_periodic(psi, boundary);
  const int n = g.n;
  cplx acc{};
  for (int j = -n / 2; j < n / 2; ++j) {
    int a = i + j;
    int b = i - j;
    if (periodic) {
      a = ((a % n) + n) % n;
      b = ((b % n) + n) % n;
    } else if (a < 0 || a >= n || b < 0 || b >= n) {
      continue;
    }
    acc += std::conj(psi[a]) * psi[b] * std::polar(1.0, 2 * p * j * g.dq / g.hbar);
  }
  return acc.real() * g.dq / (kPi * g.hbar);
}

QuasiDistribution margenau_hill_transform(const Wavefunction& psi) {
  const auto& g = psi.grid();
  const auto phi = momentum_representation(psi);
  const double norm = 1.0 / std::sqrt(2 * kPi * g.hbar);
  ComplexField a(static_cast<std::size_t>(g.n));
  for (int s = 0; s < g.n; ++s)
    a[s] = phi.phi[s] * std::polar(norm, g.momentum(s) * g.q_min / g.hbar);

  QuasiDistribution f;
  f.kind = DistributionKind::margenau_hill;
  f.grid = g;
  f.n_p = g.n;
  f.dp = g.dp;
  f.p_min = g.momentum(0);
  f.values.resize(static_cast<std::size_t>(g.n) * g.n);
  kernels::openmp::margenau_hill_rows({psi.view(), a}, f.values);
  f.min_cell = locate_minimum(f);
  return f;
}

LocalProfile phase_space_local_moment(const QuasiDistribution& f, const Wavefunction& psi,
                                      int n, double mask_eps) {
  if (!(f.grid == psi.grid()))
    throw InvalidArgument("distribution and state live on different grids");
  if (n < 1 || n > kMaxObservablePower)
    throw InvalidArgument("order", "phase-space moment order must be in 1..4");
  auto mask = mask_with_support(psi, mask_eps);
  std::vector<double> w(static_cast<std::size_t>(f.n_p));
  for (int k = 0; k < f.n_p; ++k) w[k] = std::pow(f.p(k), n) * f.dp;
  const auto sums = row_sums(f, w);

  RealProfile prof;
  prof.grid = psi.grid();
  prof.values.assign(sums.size(), 0.0);
  for (std::size_t j = 0; j < sums.size(); ++j)
    if (mask[j]) prof.values[j] = sums[j] / std::norm(psi[static_cast<int>(j)]);
  prof.mask = std::move(mask);
  return {definition_of(f.kind), MomentOrder{n}, std::move(prof)};
}

LocalProfile phase_space_local_variance(const QuasiDistribution& f, const Wavefunction& psi,
                                        double mask_eps) {
  const auto first = phase_space_local_moment(f, psi, 1, mask_eps);
  auto second = phase_space_local_moment(f, psi, 2, mask_eps);
  for (int j = 0; j < second.profile.size(); ++j)
    if (second.profile.defined(j))
      second.profile.values[j] -= first.profile.values[j] * first.profile.values[j];
  second.order = MomentOrder::variance();
  return second;
}

double phase_space_global_moment(const QuasiDistribution& f, int n) {
  std::vector<double> w(static_cast<std::size_t>(f.n_p));
  for (int k = 0; k < f.n_p; ++k) w[k] = std::pow(f.p(k), n) * f.dp;
  const auto sums = row_sums(f, w);
  double acc = 0.0;
  for (double v : sums) acc += v;
  return acc * f.grid.dq;
}

CharacteristicSlice characteristic_function_S(const Wavefunction& psi, double tau,
                                              double mask_eps) {
  const auto& g = psi.grid();
  const double shift = g.hbar * tau / g.dq;
  const double rounded = std::round(shift);
  if (!std::isfinite(shift) || std::abs(shift - rounded) > 1e-9 * std::max(1.0, std::abs(shift)))
    throw InvalidArgument("tau", "hbar*tau must be an integer multiple of dq");
  return characteristic_function_S_shift(psi, static_cast<int>(rounded), mask_eps);
}

CharacteristicSlice characteristic_function_S_shift(const Wavefunction& psi, int shift,
                                                    double mask_eps) {
  const auto& g = psi.grid();
  const int n = g.n;
  CharacteristicSlice out;
  out.shift = shift;
  out.tau = shift * g.dq / g.hbar;
  out.mask = mask_with_support(psi, mask_eps);
  out.values.assign(static_cast<std::size_t>(n), cplx{});
  for (int j = 0; j < n; ++j) {
    if (!out.mask[j]) continue;
    const cplx fwd = psi[((j + shift) % n + n) % n];
    const cplx bwd = psi[((j - shift) % n + n) % n];
    out.values[j] = fwd / (2.0 * psi[j]) + std::conj(bwd) / (2.0 * std::conj(psi[j]));
  }
  return out;
}

ConditionalDistribution conditional_momentum_S(const Wavefunction& psi) {
  const auto& g = psi.grid();
  ConditionalDistribution out;
  out.grid = g;
  out.n_p = g.n;
  out.dp = g.dp;
  out.p_min = g.momentum(0);
  out.values.resize(static_cast<std::size_t>(g.n) * g.n);
  out.row_defined.resize(static_cast<std::size_t>(g.n));
  kernels::openmp::conditional_rows(
      {psi.view(), kConditionalAmplitudeFloor, g.dq / (2 * kPi * g.hbar)}, out.values,
      out.row_defined);
  return out;
}

QuasiDistribution bayes_product(const Wavefunction& psi, const ConditionalDistribution& p_s,
                                double tolerance) {
  if (!(p_s.grid == psi.grid()))
    throw InvalidArgument("conditional distribution and state live on different grids");
  const auto mh = margenau_hill_transform(psi);
  QuasiDistribution f = mh;
  double worst = 0.0;
  for (int i = 0; i < psi.size(); ++i) {
    const double rho = std::norm(psi[i]);
    for (int k = 0; k < f.n_p; ++k) {
      const double v = p_s.row_defined[i] ? rho * p_s.at(i, k) : 0.0;
      f.values[static_cast<std::size_t>(i) * f.n_p + k] = v;
      worst = std::max(worst, std::abs(v - mh.at(i, k)));
    }
  }
  if (!(worst <= tolerance)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", worst);
    throw SelfCheckError(std::string("rho * P^S(p|q) deviates from the Margenau-Hill function by ") +
                         buf);
  }
  f.min_cell = locate_minimum(f);
  return f;
}

RealProfile variance_difference_term(const Wavefunction& psi, double mask_eps) {
  auto mask = mask_with_support(psi, mask_eps);
  const auto u1 = apply_momentum_power(psi, 1);
  const auto u2 = apply_momentum_power(psi, 2);
  RealProfile out;
  out.grid = psi.grid();
  out.values.assign(u1.size(), 0.0);
  for (int j = 0; j < psi.size(); ++j) {
    if (!mask[j]) continue;
    const double sandwich = std::norm(u1[j]);
    const double sym = (std::conj(psi[j]) * u2[j]).real();
    out.values[j] = (2 * sandwich - 2 * sym) / (4 * std::norm(psi[j]));
  }
  out.mask = std::move(mask);
  return out;
}

}  // namespace locmom
