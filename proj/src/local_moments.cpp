#include "locmom/local_moments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "locmom/error.hpp"
#include "locmom/phase_space.hpp"
#include "locmom/spectral.hpp"

namespace locmom {
namespace {

std::vector<std::uint8_t> mask_with_support(const Wavefunction& psi, double mask_eps) {
  auto mask = support_mask(psi, mask_eps);
  if (std::find(mask.begin(), mask.end(), std::uint8_t{1}) == mask.end())
    throw PreconditionError("state has no support");
  return mask;
}

void check_field(const ComplexField& f, const Wavefunction& psi, const char* what) {
  if (static_cast<int>(f.size()) != psi.size())
    throw InvalidArgument("observable", std::string(what) + " returned a field of the wrong size");
}

/// values_j / rho_j on the mask, zero elsewhere.
RealProfile divide_by_density(const Wavefunction& psi, const std::vector<double>& values,
                              std::vector<std::uint8_t> mask) {
  RealProfile out;
  out.grid = psi.grid();
  out.values.assign(values.size(), 0.0);
  for (std::size_t j = 0; j < values.size(); ++j)
    if (mask[j]) out.values[j] = values[j] / std::norm(psi[static_cast<int>(j)]);
  out.mask = std::move(mask);
  return out;
}

int momentum_power_checked(const MomentumPower& m) {
  if (m.n < 1 || m.n > kMaxObservablePower)
    throw InvalidArgument("order", "momentum power must be in 1.." +
                                       std::to_string(kMaxObservablePower));
  return m.n;
}

const std::vector<double>& position_values_checked(const PositionFunction& f,
                                                   const Wavefunction& psi) {
  if (static_cast<int>(f.g.size()) != psi.size())
    throw InvalidArgument("observable", "position function does not match the grid");
  return f.g;
}

}  // namespace

ComplexField apply_observable(const ObservableSpec& a, const Wavefunction& psi) {
  if (const auto* m = std::get_if<MomentumPower>(&a))
    return apply_momentum_power(psi, momentum_power_checked(*m));
  if (const auto* f = std::get_if<PositionFunction>(&a)) {
    const auto& g = position_values_checked(*f, psi);
    ComplexField out(psi.amp());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] *= g[j];
    return out;
  }
  const auto& act = std::get<LinearAction>(a);
  if (!act.apply) throw InvalidArgument("observable", "operator action required");
  auto out = act.apply(psi);
  check_field(out, psi, "operator action");
  return out;
}

ComplexField apply_observable_square(const ObservableSpec& a, const Wavefunction& psi) {
  if (const auto* m = std::get_if<MomentumPower>(&a))
    return apply_momentum_power(psi, 2 * momentum_power_checked(*m));
  if (const auto* f = std::get_if<PositionFunction>(&a)) {
    const auto& g = position_values_checked(*f, psi);
    ComplexField out(psi.amp());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] *= g[j] * g[j];
    return out;
  }
  const auto& act = std::get<LinearAction>(a);
  if (!act.apply_square) throw InvalidArgument("observable", "square action required");
  auto out = act.apply_square(psi);
  check_field(out, psi, "square action");
  return out;
}

ObservableSpec position_observable(const GridSpec& grid) {
  return PositionFunction{grid.positions()};
}

std::string to_string(Definition d) {
  switch (d) {
    case Definition::S: return "S";
    case Definition::C: return "C";
    case Definition::MH: return "MH";
    case Definition::W: return "W";
    case Definition::classical: return "classical";
  }
  return "?";
}

Definition parse_definition(std::string_view text) {
  if (text == "S") return Definition::S;
  if (text == "C") return Definition::C;
  if (text == "MH") return Definition::MH;
  if (text == "W") return Definition::W;
  if (text == "classical") return Definition::classical;
  throw InvalidArgument("definition", "unknown definition '" + std::string(text) + "'");
}

RealProfile local_density_S(const Wavefunction& psi, const ObservableSpec& a) {
  const auto ap = apply_observable(a, psi);
  std::vector<double> v(ap.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = (std::conj(psi[static_cast<int>(j)]) * ap[j]).real();
  return RealProfile::from_values(psi.grid(), std::move(v));
}

RealProfile sandwich_density(const Wavefunction& psi, const ObservableSpec& a) {
  const auto ap = apply_observable(a, psi);
  std::vector<double> v(ap.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::norm(ap[j]);
  return RealProfile::from_values(psi.grid(), std::move(v));
}

LocalProfile local_value_S(const Wavefunction& psi, const ObservableSpec& a, double mask_eps) {
  auto mask = mask_with_support(psi, mask_eps);
  const auto dens = local_density_S(psi, a);
  return {Definition::S, MomentOrder{1}, divide_by_density(psi, dens.values, std::move(mask))};
}

LocalProfile local_variance_C(const Wavefunction& psi, const ObservableSpec& a,
                              double mask_eps) {
  auto mask = mask_with_support(psi, mask_eps);
  const auto ap = apply_observable(a, psi);
  RealProfile out;
  out.grid = psi.grid();
  out.values.assign(ap.size(), 0.0);
  for (std::size_t j = 0; j < ap.size(); ++j) {
    if (!mask[j]) continue;
    const double im = (ap[j] / psi[static_cast<int>(j)]).imag();
    out.values[j] = im * im;
  }
  out.mask = std::move(mask);
  return {Definition::C, MomentOrder::variance(), std::move(out)};
}

LocalProfile local_variance_C_via_sandwich(const Wavefunction& psi, const ObservableSpec& a,
                                           double mask_eps) {
  auto mask = mask_with_support(psi, mask_eps);
  const auto ap = apply_observable(a, psi);
  RealProfile out;
  out.grid = psi.grid();
  out.values.assign(ap.size(), 0.0);
  for (std::size_t j = 0; j < ap.size(); ++j) {
    if (!mask[j]) continue;
    const cplx c = psi[static_cast<int>(j)];
    const double rho = std::norm(c);
    const double mean = (std::conj(c) * ap[j]).real() / rho;
    out.values[j] = std::norm(ap[j]) / rho - mean * mean;
  }
  out.mask = std::move(mask);
  return {Definition::C, MomentOrder::variance(), std::move(out)};
}

LocalProfile local_second_moment_S(const Wavefunction& psi, const ObservableSpec& a,
                                   double mask_eps) {
  auto mask = mask_with_support(psi, mask_eps);
  const auto a2 = apply_observable_square(a, psi);
  std::vector<double> v(a2.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = (std::conj(psi[static_cast<int>(j)]) * a2[j]).real();
  return {Definition::S, MomentOrder{2}, divide_by_density(psi, v, std::move(mask))};
}

LocalProfile local_variance_S(const Wavefunction& psi, const ObservableSpec& a,
                              double mask_eps) {
  const auto mean = local_value_S(psi, a, mask_eps);
  auto second = local_second_moment_S(psi, a, mask_eps);
  for (int j = 0; j < second.profile.size(); ++j)
    if (second.profile.defined(j)) second.profile.values[j] -= mean.profile.values[j] * mean.profile.values[j];
  second.order = MomentOrder::variance();
  return second;
}

double density_inequality_witness(const Wavefunction& psi, const ObservableSpec& a,
                                  double mask_eps) {
  const auto mask = mask_with_support(psi, mask_eps);
  const auto sandwich = sandwich_density(psi, a);
  const auto a2 = apply_observable_square(a, psi);
  double worst = 0.0;
  for (int j = 0; j < psi.size(); ++j) {
    if (!mask[j]) continue;
    const double sym = (std::conj(psi[j]) * a2[j]).real();
    worst = std::max(worst, std::abs(sandwich.values[j] - sym));
  }
  return worst;
}

namespace {

/// sum_s p_s^power |phi_s|^2 dp
double momentum_moment(const Wavefunction& psi, int power) {
  const auto phi = momentum_representation(psi);
  double acc = 0.0;
  for (int s = 0; s < psi.size(); ++s) acc += std::pow(phi.grid.momentum(s), power) * std::norm(phi.phi[s]);
  return acc * phi.grid.dp;
}

double position_moment(const Wavefunction& psi, const std::vector<double>& g, int power) {
  double acc = 0.0;
  for (int j = 0; j < psi.size(); ++j) acc += std::pow(g[j], power) * std::norm(psi[j]);
  return acc * psi.grid().dq;
}

double overlap_real(const Wavefunction& psi, const ComplexField& f) {
  double acc = 0.0;
  for (int j = 0; j < psi.size(); ++j) acc += (std::conj(psi[j]) * f[j]).real();
  return acc * psi.grid().dq;
}

}  // namespace

double global_average(const Wavefunction& psi, const ObservableSpec& a) {
  if (const auto* m = std::get_if<MomentumPower>(&a))
    return momentum_moment(psi, momentum_power_checked(*m));
  if (const auto* f = std::get_if<PositionFunction>(&a))
    return position_moment(psi, position_values_checked(*f, psi), 1);
  return overlap_real(psi, apply_observable(a, psi));
}

double global_variance(const Wavefunction& psi, const ObservableSpec& a) {
  const double mean = global_average(psi, a);
  double second = 0.0;
  if (const auto* m = std::get_if<MomentumPower>(&a))
    second = momentum_moment(psi, 2 * momentum_power_checked(*m));
  else if (const auto* f = std::get_if<PositionFunction>(&a))
    second = position_moment(psi, position_values_checked(*f, psi), 2);
  else
    second = overlap_real(psi, apply_observable_square(a, psi));
  return second - mean * mean;
}

double VarianceDecomposition::residual() const noexcept {
  return std::abs(total - direct_total);
}

namespace {

/// rho * (local first moment) and rho * (local second moment) at every point.
struct MomentDensities {
  std::vector<double> first;
  std::vector<double> second;
};

std::vector<double> real_product(const Wavefunction& psi, const ComplexField& f) {
  std::vector<double> v(f.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = (std::conj(psi[static_cast<int>(j)]) * f[j]).real();
  return v;
}

std::vector<double> row_moment_density(const QuasiDistribution& f, int n) {
  std::vector<double> out(static_cast<std::size_t>(f.grid.n), 0.0);
  for (int i = 0; i < f.grid.n; ++i) {
    double acc = 0.0;
    for (int k = 0; k < f.n_p; ++k) acc += std::pow(f.p(k), n) * f.at(i, k);
    out[i] = acc * f.dp;
  }
  return out;
}

MomentDensities phase_space_densities(const Wavefunction& psi, const ObservableSpec& a,
                                      Definition definition) {
  if (const auto* f = std::get_if<PositionFunction>(&a)) {
    const auto& g = position_values_checked(*f, psi);
    MomentDensities out{std::vector<double>(g.size()), std::vector<double>(g.size())};
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double rho = std::norm(psi[static_cast<int>(j)]);
      out.first[j] = g[j] * rho;
      out.second[j] = g[j] * g[j] * rho;
    }
    return out;
  }
  const auto* m = std::get_if<MomentumPower>(&a);
  if (!m)
    throw InvalidArgument("observable", to_string(definition) +
                                            " local variance needs a phase-space symbol; "
                                            "only momentum powers and position functions have one");
  const int n = momentum_power_checked(*m);
  if (2 * n > kMaxObservablePower)
    throw InvalidArgument("order", "phase-space local variance of p^n needs n <= 2");
  const auto dist = definition == Definition::W ? wigner_transform(psi)
                                                : margenau_hill_transform(psi);
  return {row_moment_density(dist, n), row_moment_density(dist, 2 * n)};
}

MomentDensities moment_densities(const Wavefunction& psi, const ObservableSpec& a,
                                 Definition definition) {
  switch (definition) {
    case Definition::S:
      return {real_product(psi, apply_observable(a, psi)),
              real_product(psi, apply_observable_square(a, psi))};
    case Definition::C: {
      const auto ap = apply_observable(a, psi);
      std::vector<double> second(ap.size());
      for (std::size_t j = 0; j < ap.size(); ++j) second[j] = std::norm(ap[j]);
      return {real_product(psi, ap), std::move(second)};
    }
    case Definition::MH:
    case Definition::W: return phase_space_densities(psi, a, definition);
    case Definition::classical: break;
  }
  throw InvalidArgument("definition", "use classical_variance_decomposition for classical densities");
}

}  // namespace

VarianceDecomposition variance_decomposition(const Wavefunction& psi, const ObservableSpec& a,
                                             Definition definition, double mask_eps) {
  const auto mask = mask_with_support(psi, mask_eps);
  const double dq = psi.grid().dq;
  double excluded = 0.0;
  for (int j = 0; j < psi.size(); ++j)
    if (!mask[j]) excluded += std::norm(psi[j]) * dq;
  if (excluded > kMaskedMassBound)
    throw PreconditionError("masked region excludes non-negligible probability; decomposition unreliable");

  const auto m = moment_densities(psi, a, definition);
  const double mean = global_average(psi, a);
  VarianceDecomposition out;
  out.definition = definition;
  for (int j = 0; j < psi.size(); ++j) {
    // at an exact node rho*A_1 vanishes but rho*A_2 need not
    out.avg_local_variance += m.second[j] * dq;
    const double rho = std::norm(psi[j]);
    if (!(rho > kDensityFloor)) continue;
    const double spread = m.first[j] - mean * rho;
    out.avg_local_variance -= m.first[j] * m.first[j] / rho * dq;
    out.variance_of_local_avg += spread * spread / rho * dq;
  }
  out.total = out.avg_local_variance + out.variance_of_local_avg;
  out.direct_total = global_variance(psi, a);
  return out;
}

}  // namespace locmom
