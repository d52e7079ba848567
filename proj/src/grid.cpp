#include "locmom/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "locmom/error.hpp"

namespace locmom {

std::vector<double> GridSpec::positions() const {
  std::vector<double> q(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) q[j] = this->q(j);
  return q;
}

std::vector<double> GridSpec::momenta() const {
  std::vector<double> p(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) p[s] = momentum(s);
  return p;
}

GridSpec make_grid(int n, double q_min, double q_max, double hbar, double mass) {
  if (n < 8 || n % 2 != 0) throw InvalidArgument("grid-n", "n must be even and >= 8");
  if (!std::isfinite(q_min) || !std::isfinite(q_max) || !(q_max > q_min))
    throw InvalidArgument("q-max", "q_max must exceed q_min");
  if (!std::isfinite(hbar) || !(hbar > 0)) throw InvalidArgument("hbar", "hbar must be positive");
  if (!std::isfinite(mass) || !(mass > 0)) throw InvalidArgument("mass", "mass must be positive");

  GridSpec g;
  g.n = n;
  g.q_min = q_min;
  g.q_max = q_max;
  g.dq = (q_max - q_min) / n;
  g.dp = 2.0 * std::numbers::pi * hbar / (n * g.dq);
  g.hbar = hbar;
  g.mass = mass;
  return g;
}

Wavefunction::Wavefunction(GridSpec grid, ComplexField amp)
    : grid_(grid), amp_(std::move(amp)) {
  if (static_cast<int>(amp_.size()) != grid_.n)
    throw InvalidArgument("wavefunction size " + std::to_string(amp_.size()) +
                          " does not match grid n = " + std::to_string(grid_.n));
  for (const auto& a : amp_)
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw InvalidArgument("wavefunction has non-finite amplitudes");
}

double Wavefunction::norm_squared() const noexcept {
  double s = 0.0;
  for (const auto& a : amp_) s += std::norm(a);
  return s * grid_.dq;
}

std::vector<double> Wavefunction::density() const {
  std::vector<double> rho(amp_.size());
  for (std::size_t j = 0; j < amp_.size(); ++j) rho[j] = std::norm(amp_[j]);
  return rho;
}

Wavefunction Wavefunction::normalized() const {
  const double nrm = norm_squared();
  if (!(nrm > 0)) throw PreconditionError("cannot normalize the zero state");
  const double scale = 1.0 / std::sqrt(nrm);
  ComplexField out(amp_);
  for (auto& a : out) a *= scale;
  return Wavefunction(grid_, std::move(out));
}

RealProfile RealProfile::filled(const GridSpec& grid, double value) {
  RealProfile r;
  r.grid = grid;
  r.values.assign(static_cast<std::size_t>(grid.n), value);
  r.mask.assign(static_cast<std::size_t>(grid.n), 1);
  return r;
}

RealProfile RealProfile::from_values(const GridSpec& grid, std::vector<double> values) {
  RealProfile r;
  r.grid = grid;
  r.values = std::move(values);
  r.mask.assign(r.values.size(), 1);
  return r;
}

int RealProfile::count_defined() const noexcept {
  return static_cast<int>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

std::vector<std::uint8_t> support_mask(const Wavefunction& psi, double mask_eps) {
  const auto rho = psi.density();
  const double peak = rho.empty() ? 0.0 : *std::max_element(rho.begin(), rho.end());
  const double cut = mask_eps * peak;
  std::vector<std::uint8_t> mask(rho.size());
  for (std::size_t j = 0; j < rho.size(); ++j) mask[j] = (peak > 0 && rho[j] > cut) ? 1 : 0;
  return mask;
}

double edge_density(const Wavefunction& psi) noexcept {
  const auto& a = psi.amp();
  if (a.empty()) return 0.0;
  return std::max(std::norm(a.front()), std::norm(a.back()));
}

bool is_localized(const Wavefunction& psi) noexcept {
  return edge_density(psi) < kEdgeDensityBound;
}

}  // namespace locmom
