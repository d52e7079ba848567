#include <cmath>

#include "doctest.h"
#include "locmom/error.hpp"
#include "locmom/grid.hpp"
#include "locmom/spectral.hpp"
#include "locmom/states.hpp"
#include "support.hpp"

using namespace locmom;
using testing::kPi;

TEST_CASE("grid spacing follows from the window") {
  const auto g = make_grid(8, -4, 4);
  CHECK(g.dq == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g.dp == doctest::Approx(2 * kPi / 8).epsilon(1e-15));
  CHECK(make_grid(512, -20, 20).dq == 0.078125);
}

TEST_CASE("grid rejects bad parameters") {
  CHECK_THROWS_WITH_AS(make_grid(7, -4, 4), "n must be even and >= 8", InvalidArgument);
  CHECK_THROWS_AS(make_grid(6, -4, 4), InvalidArgument);
  CHECK_THROWS_AS(make_grid(8, 4, -4), InvalidArgument);
  CHECK_THROWS_AS(make_grid(8, -4, 4, 0.0), InvalidArgument);
  CHECK_THROWS_AS(make_grid(8, -4, 4, 1.0, -1.0), InvalidArgument);
}

TEST_CASE("momentum ordering is ascending and centred") {
  const auto g = make_grid(8, -4, 4);
  const auto p = g.momenta();
  CHECK(p.front() == doctest::Approx(-4 * g.dp));
  CHECK(p.back() == doctest::Approx(3 * g.dp));
  for (int s = 0; s < g.n; ++s) CHECK(g.wrapped_momentum(g.wrapped_index(s)) == doctest::Approx(p[s]));
}

TEST_CASE("wavefunction rejects non-finite amplitudes and size mismatch") {
  const auto g = make_grid(8, -4, 4);
  CHECK_THROWS_AS(Wavefunction(g, ComplexField(7)), InvalidArgument);
  ComplexField bad(8, cplx{1, 0});
  bad[3] = cplx{NAN, 0};
  CHECK_THROWS_AS(Wavefunction(g, bad), InvalidArgument);
  CHECK_THROWS_AS(Wavefunction(g, ComplexField(8)).normalized(), PreconditionError);
}

TEST_CASE("plane wave is a single momentum bin") {
  const auto g = testing::desk_grid();
  const auto psi = synthesize(plane_wave(commensurate_wavenumber(g, 4)), g);
  const auto phi = momentum_representation(psi);
  const int hit = g.n / 2 + 4;
  for (int s = 0; s < g.n; ++s)
    if (s != hit) CHECK(std::abs(phi.phi[s]) < 1e-10);
  CHECK(std::norm(phi.phi[hit]) * g.dp == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Gaussian momentum density matches its analytic transform") {
  const auto g = testing::desk_grid();
  const auto phi = momentum_representation(synthesize(testing::reference_gaussian(), g));
  double worst = 0;
  for (int s = 0; s < g.n; ++s) {
    const double p = g.momentum(s);
    const double expected = std::sqrt(2 / kPi) * std::exp(-2 * (p - 2) * (p - 2));
    worst = std::max(worst, std::abs(std::norm(phi.phi[s]) - expected));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("transform round trip and Parseval on generated states") {
  const auto g = testing::desk_grid();
  testing::StateGen gen(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto psi = synthesize(gen.any(), g);
    const auto phi = momentum_representation(psi);
    CHECK(std::abs(phi.norm_squared() - psi.norm_squared()) < 1e-10);
    const auto back = position_representation(phi);
    double worst = 0;
    for (int j = 0; j < g.n; ++j) worst = std::max(worst, std::abs(back[j] - psi[j]));
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("direct momentum amplitude agrees with the FFT on grid momenta") {
  const auto g = testing::desk_grid();
  const auto psi = synthesize(testing::reference_gaussian(), g);
  const auto phi = momentum_representation(psi);
  for (int s : {200, 256, 281, 300})
    CHECK(std::abs(momentum_amplitude_at(psi, g.momentum(s)) - phi.phi[s]) < 1e-12);
}

TEST_CASE("momentum power on eigenstates and the Gaussian log-derivative") {
  const auto g = testing::desk_grid();
  const double k = commensurate_wavenumber(g, 4);
  const auto pw = synthesize(plane_wave(k), g);
  const auto p2 = apply_momentum_power(pw, 2);
  double worst = 0;
  for (int j = 0; j < g.n; ++j) worst = std::max(worst, std::abs(p2[j] - k * k * pw[j]));
  CHECK(worst < 1e-10);

  const auto id = apply_momentum_power(pw, 0);
  for (int j = 0; j < g.n; ++j) CHECK(id[j] == pw[j]);

  const auto gauss = synthesize(testing::reference_gaussian(), g);
  const auto p1 = apply_momentum_power(gauss, 1);
  const int j1 = testing::index_of(g, 1.0);
  const cplx ratio = p1[j1] / gauss[j1];
  CHECK(ratio.real() == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(ratio.imag() == doctest::Approx(g.q(j1) / 2).epsilon(1e-10));

  CHECK_THROWS_AS(apply_momentum_power(gauss, kMaxMomentumPower + 1), InvalidArgument);
  CHECK_THROWS_AS(apply_momentum_power(gauss, -1), InvalidArgument);
}

TEST_CASE("momentum powers compose") {
  const auto g = testing::desk_grid();
  testing::StateGen gen(5);
  for (int trial = 0; trial < 5; ++trial) {
    const auto psi = synthesize(gen.gaussian(), g);
    for (int a = 0; a <= 4; ++a)
      for (int b = 0; a + b <= 4; ++b) {
        const auto first = apply_momentum_power(psi, a);
        const auto composed = apply_momentum_power(g, first, b);
        const auto direct = apply_momentum_power(psi, a + b);
        double worst = 0;
        for (int j = 0; j < g.n; ++j) worst = std::max(worst, std::abs(composed[j] - direct[j]));
        CHECK(worst < 1e-9);
      }
  }
}

TEST_CASE("integration") {
  const auto g = testing::desk_grid();
  const auto psi = synthesize(gaussian(1, 0, 1), g);
  CHECK(integrate(RealProfile::from_values(g, psi.density())) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(integrate(RealProfile::filled(make_grid(8, -4, 4), 1.0)) == doctest::Approx(8.0));
  auto rho = psi.density();
  for (int j = 0; j < g.n; ++j) rho[j] *= g.q(j);
  CHECK(std::abs(integrate(g, rho) - 1.0) < 1e-8);

  auto masked = RealProfile::filled(g, 1.0);
  masked.mask[0] = 0;
  CHECK(integrate(masked) == doctest::Approx(40.0 - g.dq));
}

TEST_CASE("spectral derivative") {
  const auto g = testing::desk_grid();
  const double L = g.length();
  std::vector<double> s(g.n);
  for (int j = 0; j < g.n; ++j) s[j] = std::sin(2 * kPi * g.q(j) / L);
  const auto ds = spatial_derivative(RealProfile::from_values(g, s));
  double worst = 0;
  for (int j = 0; j < g.n; ++j)
    worst = std::max(worst, std::abs(ds.values[j] - 2 * kPi / L * std::cos(2 * kPi * g.q(j) / L)));
  CHECK(worst < 1e-10);

  const auto dc = spatial_derivative(RealProfile::filled(g, 3.0));
  for (double v : dc.values) CHECK(std::abs(v) < 1e-12);

  const auto psi = synthesize(gaussian(1, 0, 0), g);
  const auto drho = spatial_derivative(RealProfile::from_values(g, psi.density()));
  worst = 0;
  for (int j = 0; j < g.n; ++j) worst = std::max(worst, std::abs(drho.values[j] + g.q(j) * std::norm(psi[j])));
  CHECK(worst < 1e-8);
}

TEST_CASE("spectral derivative obeys the product rule on Gaussian fields") {
  const auto g = testing::desk_grid();
  testing::StateGen gen(17);
  for (int trial = 0; trial < 5; ++trial) {
    const auto recipe = gen.gaussian();
    const auto oracle = gaussian_oracle(recipe);
    const auto psi = synthesize(recipe, g);
    std::vector<double> rho(g.n), pbar(g.n), prod(g.n);
    for (int j = 0; j < g.n; ++j) {
      rho[j] = std::norm(psi[j]);
      // a nonconstant periodic factor alongside the constant local momentum
      pbar[j] = oracle.mean_p(g.q(j)) + std::cos(2 * kPi * 3 * g.q(j) / g.length());
      prod[j] = rho[j] * pbar[j];
    }
    const auto dprod = spatial_derivative(RealProfile::from_values(g, prod));
    const auto drho = spatial_derivative(RealProfile::from_values(g, rho));
    const auto dpbar = spatial_derivative(RealProfile::from_values(g, pbar));
    double worst = 0;
    for (int j = 0; j < g.n; ++j)
      worst = std::max(worst, std::abs(dprod.values[j] - (drho.values[j] * pbar[j] + rho[j] * dpbar.values[j])));
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("complex spatial derivative is (i/hbar) p") {
  const auto g = make_grid(256, -20, 20, 0.5);
  const auto psi = synthesize(gaussian(1, 1, 0), g);
  const auto d = spatial_derivative(g, psi.view());
  const int j = testing::index_of(g, 0.5);
  const cplx expected = psi[j] * cplx(-g.q(j) / 2, 1.0);
  CHECK(std::abs(d[j] - expected) < 1e-9);
}
