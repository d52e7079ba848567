#include "locmom/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "locmom/error.hpp"
#include "locmom/fft.hpp"
#include "locmom/phase_space.hpp"
#include "locmom/spectral.hpp"
#include "spectral_impl.hpp"

namespace locmom {
namespace {

using ld = long double;
using cld = std::complex<ld>;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double parse_number(const std::string& token, const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (token.empty() || *end != '\0' || !std::isfinite(v))
    throw InvalidArgument("potential", "malformed potential '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

/// Local hydrodynamic fields of one snapshot, from u_k = p^k psi.
struct Fields {
  std::vector<ld> rho, drho, j, dj, e2, de2;
  std::vector<std::uint8_t> mask;
};

Fields local_fields(const GridSpec& g, const ExtendedField& psi) {
  const auto u = detail::momentum_powers<ld>(g, std::span<const cld>(psi), 3);
  const ld hbar = g.hbar;
  const std::size_t n = psi.size();
  Fields f;
  for (auto* v : {&f.rho, &f.drho, &f.j, &f.dj, &f.e2, &f.de2}) v->resize(n);
  ld peak = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const cld c = std::conj(psi[i]);
    f.rho[i] = std::norm(psi[i]);
    f.drho[i] = -2 * std::imag(c * u[1][i]) / hbar;
    f.j[i] = std::real(c * u[1][i]);
    f.dj[i] = -std::imag(c * u[2][i]) / hbar;
    f.e2[i] = (std::norm(u[1][i]) + std::real(c * u[2][i])) / 2;
    f.de2[i] = -(std::imag(std::conj(u[1][i]) * u[2][i]) + std::imag(c * u[3][i])) / (2 * hbar);
    peak = std::max(peak, f.rho[i]);
  }
  f.mask.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.mask[i] = (peak > 0 && f.rho[i] > ld(kMaskEps) * peak) ? 1 : 0;
  return f;
}

void require_snapshots(const EvolutionTrace& trace) {
  if (trace.size() < 3) throw InvalidArgument("steps", "residuals need at least 3 snapshots");
}

std::vector<Fields> all_fields(const EvolutionTrace& trace) {
  std::vector<Fields> out;
  out.reserve(trace.size());
  for (const auto& a : trace.amplitudes) out.push_back(local_fields(trace.grid, a));
  return out;
}

/// rho pbar from a quasi-distribution's first moment, differentiated spectrally.
std::vector<double> current_gradient_from(const Wavefunction& psi, MeanSource source) {
  const auto f = source == MeanSource::W ? wigner_transform(psi) : margenau_hill_transform(psi);
  RealProfile j = RealProfile::filled(psi.grid(), 0.0);
  for (int i = 0; i < f.grid.n; ++i) {
    double acc = 0.0;
    for (int k = 0; k < f.n_p; ++k) acc += f.p(k) * f.at(i, k);
    j.values[i] = acc * f.dp;
  }
  return spatial_derivative(j).values;
}

ld state_distance(const ExtendedField& a, const ExtendedField& b, double dq) {
  ld acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::norm(a[i] - b[i]);
  return std::sqrt(acc * dq);
}

}  // namespace

Potential free_potential(const GridSpec& grid) {
  const auto n = static_cast<std::size_t>(grid.n);
  return {"free", std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
}

Potential harmonic_potential(const GridSpec& grid, double omega) {
  if (!std::isfinite(omega) || !(omega > 0))
    throw InvalidArgument("potential", "harmonic omega must be positive");
  char label[64];
  std::snprintf(label, sizeof label, "harmonic:%.17g", omega);
  Potential v{label, {}, {}};
  const double k = grid.mass * omega * omega;
  for (int j = 0; j < grid.n; ++j) {
    const double q = grid.q(j);
    v.values.push_back(0.5 * k * q * q);
    v.gradient.push_back(k * q);
  }
  return v;
}

Potential barrier_potential(const GridSpec& grid, double height, double width, double center) {
  if (!std::isfinite(height) || !std::isfinite(center) || !(width > 0))
    throw InvalidArgument("potential", "barrier needs finite height/center and positive width");
  char label[96];
  std::snprintf(label, sizeof label, "barrier:%.17g,%.17g,%.17g", height, width, center);
  Potential v{label, {}, {}};
  for (int j = 0; j < grid.n; ++j) {
    const double x = grid.q(j) - center;
    const double e = height * std::exp(-x * x / (2 * width * width));
    v.values.push_back(e);
    v.gradient.push_back(-x / (width * width) * e);
  }
  return v;
}

Potential parse_potential(std::string_view text, const GridSpec& grid) {
  const std::string s(text);
  if (s == "free") return free_potential(grid);
  const auto colon = s.find(':');
  const std::string name = s.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : s.substr(colon + 1);
  if (name == "harmonic" && colon != std::string::npos)
    return harmonic_potential(grid, parse_number(args, s));
  if (name == "barrier" && colon != std::string::npos) {
    const auto parts = split(args, ',');
    if (parts.size() != 3)
      throw InvalidArgument("potential", "barrier needs height,width,center: '" + s + "'");
    return barrier_potential(grid, parse_number(parts[0], s), parse_number(parts[1], s),
                             parse_number(parts[2], s));
  }
  throw InvalidArgument("potential", "unknown potential '" + s + "'");
}

double populated_kinetic_max(const Wavefunction& psi) {
  const auto phi = momentum_representation(psi);
  double t_max = 0.0;
  for (int s = 0; s < psi.size(); ++s)
    if (std::norm(phi.phi[s]) * phi.grid.dp > kPopulatedModeWeight) {
      const double p = phi.grid.momentum(s);
      t_max = std::max(t_max, p * p / (2 * phi.grid.mass));
    }
  return t_max;
}

double suggested_dt(const Wavefunction& psi) {
  const double t_max = populated_kinetic_max(psi);
  return t_max > 0 ? 0.9 * kStabilityBound * psi.grid().hbar / t_max : INFINITY;
}

void check_stability(const Wavefunction& psi0, const PropagationConfig& cfg) {
  if (!std::isfinite(cfg.dt) || !(cfg.dt > 0)) throw InvalidArgument("dt", "dt must be positive");
  if (cfg.steps < 1) throw InvalidArgument("steps", "steps must be positive");
  if (cfg.snapshot_stride < 1) throw InvalidArgument("stride", "stride must be positive");
  const double guard = cfg.dt * populated_kinetic_max(psi0) / psi0.grid().hbar;
  if (!(guard < kStabilityBound))
    throw PreconditionError("stability guard violated: dt * T_max / hbar = " + fmt(guard) +
                            " >= 0.5; suggested dt = " + fmt(suggested_dt(psi0)));
}

Wavefunction EvolutionTrace::snapshot(std::size_t i) const {
  const auto& a = amplitudes.at(i);
  ComplexField out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j)
    out[j] = cplx(static_cast<double>(a[j].real()), static_cast<double>(a[j].imag()));
  return Wavefunction(grid, std::move(out));
}

EvolutionTrace split_step_propagate(const Wavefunction& psi0, const Potential& v,
                                    const PropagationConfig& cfg) {
  const auto& g = psi0.grid();
  const int n = g.n;
  if (static_cast<int>(v.values.size()) != n)
    throw InvalidArgument("potential", "potential does not match the grid");
  check_stability(psi0, cfg);

  const ld dt = cfg.dt;
  const ld hbar = g.hbar;
  const auto p = detail::wrapped_momenta<ld>(g);
  ExtendedField half_v(static_cast<std::size_t>(n));
  ExtendedField kinetic(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    half_v[j] = std::polar(ld(1), -ld(v.values[j]) * dt / (2 * hbar));
    kinetic[j] = std::polar(ld(1), -p[j] * p[j] / (2 * ld(g.mass)) * dt / hbar) / ld(n);
  }

  EvolutionTrace trace;
  trace.potential = v;
  trace.grid = g;
  trace.dt = cfg.dt;
  trace.snapshot_stride = cfg.snapshot_stride;
  ExtendedField psi(psi0.amp().begin(), psi0.amp().end());
  const double norm0 = psi0.norm_squared();
  auto record = [&](int step) {
    ld acc = 0;
    for (const auto& a : psi) acc += std::norm(a);
    const double drift = std::abs(static_cast<double>(acc * ld(g.dq)) - norm0);
    if (!(drift < kNormDriftBound))
      throw SelfCheckError("norm drifted by " + fmt(drift) + " during propagation");
    trace.times.push_back(step * cfg.dt);
    trace.amplitudes.push_back(psi);
  };

  record(0);
  for (int step = 1; step <= cfg.steps; ++step) {
    for (int j = 0; j < n; ++j) psi[j] *= half_v[j];
    fft::forward(std::span(psi));
    for (int j = 0; j < n; ++j) psi[j] *= kinetic[j];
    fft::backward(std::span(psi));
    for (int j = 0; j < n; ++j) psi[j] *= half_v[j];
    if (step % cfg.snapshot_stride == 0) record(step);
  }
  return trace;
}

double continuity_residual(const EvolutionTrace& trace, MeanSource source) {
  require_snapshots(trace);
  const auto fields = all_fields(trace);
  const ld dt = trace.snapshot_spacing();
  const ld mass = trace.grid.mass;
  ld worst = 0;
  for (std::size_t t = 1; t + 1 < fields.size(); ++t) {
    const auto& f = fields[t];
    std::vector<double> dj_alt;
    if (source != MeanSource::S) dj_alt = current_gradient_from(trace.snapshot(t), source);
    for (std::size_t i = 0; i < f.rho.size(); ++i) {
      if (!f.mask[i]) continue;
      const ld drho_dt = (fields[t + 1].rho[i] - fields[t - 1].rho[i]) / (2 * dt);
      const ld dj = source == MeanSource::S ? f.dj[i] : ld(dj_alt[i]);
      worst = std::max(worst, std::fabs(drho_dt + dj / mass));
    }
  }
  return static_cast<double>(worst);
}

double euler_residual_W(const EvolutionTrace& trace) {
  require_snapshots(trace);
  const auto fields = all_fields(trace);
  const ld dt = trace.snapshot_spacing();
  const ld mass = trace.grid.mass;
  ld worst = 0;
  for (std::size_t t = 1; t + 1 < fields.size(); ++t) {
    const auto& f = fields[t];
    const auto& prev = fields[t - 1];
    const auto& next = fields[t + 1];
    for (std::size_t i = 0; i < f.rho.size(); ++i) {
      if (!f.mask[i]) continue;
      const ld r = f.rho[i];
      const ld pbar = f.j[i] / r;
      const ld dpbar_dt = (next.j[i] / next.rho[i] - prev.j[i] / prev.rho[i]) / (2 * dt);
      const ld dpbar_dq = (f.dj[i] * r - f.j[i] * f.drho[i]) / (r * r);
      // d/dq of rho var_W = E2 - j^2/rho
      const ld dpressure =
          f.de2[i] - (2 * f.j[i] * f.dj[i] * r - f.j[i] * f.j[i] * f.drho[i]) / (r * r);
      const ld res = dpbar_dt + pbar / mass * dpbar_dq + ld(trace.potential.gradient[i]) +
                     dpressure / (mass * r);
      worst = std::max(worst, std::fabs(res));
    }
  }
  return static_cast<double>(worst);
}

std::array<LocalProfile, 3> kinetic_energy_densities(const Wavefunction& psi) {
  const auto& g = psi.grid();
  const double inv_2m = 1.0 / (2 * g.mass);
  auto second_moment_density = [&](const QuasiDistribution& f) {
    RealProfile out = RealProfile::filled(g, 0.0);
    for (int i = 0; i < g.n; ++i) {
      double acc = 0.0;
      for (int k = 0; k < f.n_p; ++k) acc += f.p(k) * f.p(k) * f.at(i, k);
      out.values[i] = acc * f.dp * inv_2m;
    }
    return out;
  };
  RealProfile cohen = sandwich_density(psi, MomentumPower{1});
  for (auto& v : cohen.values) v *= inv_2m;
  return {LocalProfile{Definition::W, MomentOrder{2}, second_moment_density(wigner_transform(psi))},
          LocalProfile{Definition::MH, MomentOrder{2},
                       second_moment_density(margenau_hill_transform(psi))},
          LocalProfile{Definition::C, MomentOrder{2}, std::move(cohen)}};
}

double expected_energy(const Wavefunction& psi, const Potential& v) {
  const auto phi = momentum_representation(psi);
  double kinetic = 0.0;
  for (int s = 0; s < psi.size(); ++s) {
    const double p = phi.grid.momentum(s);
    kinetic += p * p * std::norm(phi.phi[s]);
  }
  kinetic *= phi.grid.dp / (2 * phi.grid.mass);
  double potential = 0.0;
  for (int j = 0; j < psi.size(); ++j) potential += v.values[j] * std::norm(psi[j]);
  return kinetic + potential * psi.grid().dq;
}

double mean_position(const Wavefunction& psi) {
  double acc = 0.0;
  for (int j = 0; j < psi.size(); ++j) acc += psi.grid().q(j) * std::norm(psi[j]);
  return acc * psi.grid().dq;
}

ConvergenceReport convergence_study(const Wavefunction& psi0, const Potential& v, double dt,
                                    int steps) {
  const auto full = split_step_propagate(psi0, v, {dt, steps, 1});
  const auto half = split_step_propagate(psi0, v, {dt / 2, 2 * steps, 1});
  const auto quarter = split_step_propagate(psi0, v, {dt / 4, 4 * steps, 1});
  ConvergenceReport r;
  r.dt = dt;
  r.final_time = dt * steps;
  r.continuity = continuity_residual(full);
  r.continuity_half = continuity_residual(half);
  r.euler = euler_residual_W(full);
  r.euler_half = euler_residual_W(half);
  const double dq = psi0.grid().dq;
  r.state_ratio = static_cast<double>(
      state_distance(full.amplitudes.back(), half.amplitudes.back(), dq) /
      state_distance(half.amplitudes.back(), quarter.amplitudes.back(), dq));
  return r;
}

}  // namespace locmom
