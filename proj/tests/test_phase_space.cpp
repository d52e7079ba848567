#include <cmath>

#include "doctest.h"
#include "locmom/error.hpp"
#include "locmom/local_moments.hpp"
#include "locmom/phase_space.hpp"
#include "locmom/spectral.hpp"
#include "locmom/states.hpp"
#include "support.hpp"

using namespace locmom;
using testing::kPi;

namespace {

const GridSpec& grid() {
  static const GridSpec g = testing::desk_grid();
  return g;
}

Wavefunction state(const StateRecipe& r) { return synthesize(r, grid()); }

double wave_k() { return commensurate_wavenumber(grid(), 4); }

std::vector<StateRecipe> localized_states() {
  return {testing::reference_gaussian(), oscillator(1, 1.0), testing::two_gaussians(),
          superposition({{cplx{1, 0}, gaussian(0.8, 1.5, -2)}, {cplx{0.3, -0.7}, oscillator(3, 1.2)}})};
}

}  // namespace

TEST_CASE("Wigner function of the reference Gaussian") {
  const auto psi = state(testing::reference_gaussian());
  const auto w = wigner_transform(psi);
  CHECK(w.min_cell.value >= -1e-9);
  CHECK(wigner_value(psi, testing::index_of(grid(), 0), 2.0) == doctest::Approx(1 / kPi).epsilon(1e-6));
  CHECK(w.dp == doctest::Approx(kPi / (grid().n * grid().dq)));
  // on-lattice cell: q = 0, p = 2 lies on the half-spacing grid only if 2/dp is integral
  double worst = 0;
  for (int i = 200; i < 312; i += 7)
    for (int k = 0; k < w.n_p; k += 5) {
      const double q = grid().q(i), p = w.p(k);
      worst = std::max(worst, std::abs(w.at(i, k) - std::exp(-q * q / 2 - 2 * (p - 2) * (p - 2)) / kPi));
    }
  CHECK(worst < 1e-9);
}

TEST_CASE("Wigner function of the first excited oscillator state is negative at the origin") {
  const auto psi = state(oscillator(1, 1.0));
  CHECK(wigner_value(psi, testing::index_of(grid(), 0), 0.0) == doctest::Approx(-1 / kPi).epsilon(1e-6));
  const auto w = wigner_transform(psi);
  CHECK(w.min_cell.value == doctest::Approx(-1 / kPi).epsilon(1e-6));
  CHECK(std::abs(w.min_cell.q) < 1e-12);
  CHECK(std::abs(w.min_cell.p) < 1e-12);
}

TEST_CASE("quasi-distribution marginals") {
  for (const auto& r : localized_states()) {
    CAPTURE(format_recipe(r));
    const auto psi = state(r);
    for (const auto& f : {wigner_transform(psi), margenau_hill_transform(psi)}) {
      CAPTURE(to_string(f.kind));
      const auto qm = f.q_marginal();
      double worst = 0;
      for (int j = 0; j < grid().n; ++j) worst = std::max(worst, std::abs(qm[j] - std::norm(psi[j])));
      CHECK(worst < 1e-8);

      const auto pm = f.p_marginal();
      worst = 0;
      for (int k = 0; k < f.n_p; ++k)
        worst = std::max(worst, std::abs(pm[k] - std::norm(momentum_amplitude_at(psi, f.p(k)))));
      CHECK(worst < 1e-8);
      CHECK(std::abs(f.total() - 1) < 1e-8);
    }
  }
}

TEST_CASE("plane wave phase-space functions") {
  const auto psi = state(plane_wave(wave_k()));
  CHECK_THROWS_AS(wigner_transform(psi, WignerBoundary::aperiodic), PreconditionError);
  const auto w = wigner_transform(psi);
  const auto mh = margenau_hill_transform(psi);
  CHECK(mh.min_cell.value >= -1e-10);
  const int hit = grid().n / 2 + 4;
  for (int i = 0; i < grid().n; i += 37)
    for (int k = 0; k < mh.n_p; ++k) {
      if (k == hit) CHECK(mh.at(i, k) * mh.dp == doctest::Approx(1.0 / 40).epsilon(1e-10));
      else CHECK(std::abs(mh.at(i, k)) < 1e-10);
    }
  // the Wigner delta sits on the half-spacing grid at index n/2 + 8
  const auto pm = w.p_marginal();
  CHECK(pm[grid().n / 2 + 8] * w.dp == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(phase_space_local_variance(w, psi).profile.values[10]) < 1e-10);
  CHECK(phase_space_local_moment(w, psi, 2).profile.values[10] == doctest::Approx(wave_k() * wave_k()).epsilon(1e-10));
}

TEST_CASE("Margenau-Hill function of a cat state is negative") {
  for (int n : {512, 1024}) {
    const auto g = make_grid(n, -20, 20);
    const auto mh = margenau_hill_transform(synthesize(testing::two_gaussians(), g));
    CHECK(mh.min_cell.value < -1e-3);
  }
}

TEST_CASE("phase-space local moments of the reference Gaussian") {
  const auto psi = state(testing::reference_gaussian());
  const auto w = wigner_transform(psi);
  const auto mh = margenau_hill_transform(psi);
  const auto o = gaussian_oracle(testing::reference_gaussian());
  CHECK(testing::max_error_on_mask(phase_space_local_moment(mh, psi, 1).profile, [](double) { return 2.0; }) < 1e-7);
  CHECK(phase_space_local_moment(w, psi, 2).profile.values[testing::index_of(grid(), 0)] ==
        doctest::Approx(4.25).epsilon(1e-8));
  const auto vw = phase_space_local_variance(w, psi);
  CHECK(vw.definition == Definition::W);
  CHECK(testing::max_error_on_mask(vw.profile, [&](double q) { return o.variance_W(q); }) < 1e-7);
  const auto vmh = phase_space_local_variance(mh, psi);
  CHECK(vmh.definition == Definition::MH);
  const int j2 = testing::index_of(grid(), 2);
  CHECK(vmh.profile.values[j2] == doctest::Approx(o.variance_S(grid().q(j2))).epsilon(1e-7));
}

TEST_CASE("MH local moments equal S local moments for momentum powers") {
  testing::StateGen gen(43);
  for (int trial = 0; trial < 6; ++trial) {
    const auto psi = state(gen.any());
    const auto mh = margenau_hill_transform(psi);
    for (int n = 1; n <= 2; ++n) {
      const auto ps = phase_space_local_moment(mh, psi, n).profile;
      const auto s = local_value_S(psi, MomentumPower{n}).profile;
      CHECK(testing::max_difference(ps, s) < 1e-7);
    }
  }
}

TEST_CASE("W second moment is the mean of the MH second moment and the sandwich quotient") {
  for (const auto& r : localized_states()) {
    const auto psi = state(r);
    const auto w2 = phase_space_local_moment(wigner_transform(psi), psi, 2).profile;
    const auto mh2 = phase_space_local_moment(margenau_hill_transform(psi), psi, 2).profile;
    const auto sandwich = sandwich_density(psi, MomentumPower{1});
    double worst = 0;
    for (int j = 0; j < psi.size(); ++j)
      if (w2.defined(j))
        worst = std::max(worst, std::abs(w2.values[j] - 0.5 * (mh2.values[j] + sandwich.values[j] / std::norm(psi[j]))));
    CHECK(worst < 1e-7);
  }
}

TEST_CASE("first local moment agrees across W, MH and S") {
  for (const auto& r : localized_states()) {
    const auto psi = state(r);
    const auto s = local_value_S(psi, MomentumPower{1}).profile;
    CHECK(testing::max_difference(phase_space_local_moment(wigner_transform(psi), psi, 1).profile, s) < 1e-7);
    CHECK(testing::max_difference(phase_space_local_moment(margenau_hill_transform(psi), psi, 1).profile, s) < 1e-7);
  }
}

TEST_CASE("global momentum moments from phase space") {
  for (const auto& r : localized_states()) {
    const auto psi = state(r);
    for (int n = 1; n <= 2; ++n) {
      const double expected = global_average(psi, MomentumPower{n});
      CHECK(std::abs(phase_space_global_moment(wigner_transform(psi), n) - expected) < 1e-8);
      CHECK(std::abs(phase_space_global_moment(margenau_hill_transform(psi), n) - expected) < 1e-8);
    }
  }
}

TEST_CASE("grid mismatch between distribution and state") {
  const auto psi = state(testing::reference_gaussian());
  const auto other = synthesize(testing::reference_gaussian(), make_grid(256, -20, 20));
  CHECK_THROWS_AS(phase_space_local_moment(wigner_transform(other), psi, 1), InvalidArgument);
  CHECK_THROWS_AS(phase_space_local_moment(wigner_transform(psi), psi, 5), InvalidArgument);
}

TEST_CASE("characteristic function") {
  const auto psi = state(testing::reference_gaussian());
  const auto g0 = characteristic_function_S(psi, 0.0);
  for (int j = 0; j < psi.size(); ++j)
    if (g0.mask[j]) CHECK(std::abs(g0.values[j] - 1.0) < 1e-15);
  CHECK_THROWS_AS(characteristic_function_S(psi, 0.3 * grid().dq), InvalidArgument);

  const auto pw = state(plane_wave(wave_k()));
  for (int m : {1, 5, -3}) {
    const auto slice = characteristic_function_S_shift(pw, m);
    for (int j = 0; j < pw.size(); j += 31)
      CHECK(std::abs(slice.values[j] - std::polar(1.0, slice.tau * wave_k())) < 1e-10);
  }
  for (int a : {1, 4})
    for (int b : {2, -7}) {
      const auto ga = characteristic_function_S_shift(pw, a);
      const auto gb = characteristic_function_S_shift(pw, b);
      const auto gab = characteristic_function_S_shift(pw, a + b);
      for (int j = 0; j < pw.size(); j += 17) CHECK(std::abs(gab.values[j] - ga.values[j] * gb.values[j]) < 1e-10);
    }
}

TEST_CASE("characteristic function matches its Taylor series in local S moments") {
  const auto psi = state(testing::reference_gaussian());
  const double tau = grid().dq;
  const auto slice = characteristic_function_S(psi, tau);
  std::vector<std::vector<double>> moments;
  for (int n = 1; n <= 4; ++n) moments.push_back(local_value_S(psi, MomentumPower{n}).profile.values);
  for (double q : {-2.0, -0.5, 0.0, 1.0, 2.5}) {
    const int j = testing::index_of(grid(), q);
    cplx series = 1.0;
    cplx term = 1.0;
    for (int n = 1; n <= 4; ++n) {
      term *= cplx(0, tau) / double(n);
      series += term * moments[n - 1][j];
    }
    // |p|^5 is bounded by a few times (k0 + 3 sigma)^5 on the state's support
    const double remainder = std::pow(tau * 5.0, 5) / 120.0;
    CAPTURE(q);
    CHECK(slice.mask[j]);
    CHECK(std::abs(slice.values[j] - series) < remainder);
  }
}

TEST_CASE("conditional momentum distribution") {
  const auto psi = state(testing::reference_gaussian());
  const auto cond = conditional_momentum_S(psi);
  const auto mask = support_mask(psi);
  for (int j = 0; j < psi.size(); ++j) {
    if (!mask[j]) continue;
    double norm = 0, mean = 0;
    for (int k = 0; k < cond.n_p; ++k) {
      norm += cond.at(j, k) * cond.dp;
      mean += cond.at(j, k) * (cond.p_min + k * cond.dp) * cond.dp;
    }
    CHECK(std::abs(norm - 1) < 1e-8);
    CHECK(std::abs(mean - 2.0) < 1e-7);
  }

  const auto pw = state(plane_wave(wave_k()));
  const auto cpw = conditional_momentum_S(pw);
  const int hit = grid().n / 2 + 4;
  for (int j = 0; j < pw.size(); j += 29)
    for (int k = 0; k < cpw.n_p; ++k)
      CHECK(std::abs(cpw.at(j, k) * cpw.dp - (k == hit ? 1.0 : 0.0)) < 1e-10);
}

TEST_CASE("Bayes product reconstructs the Margenau-Hill function") {
  for (const auto& r : localized_states()) {
    const auto psi = state(r);
    const auto f = bayes_product(psi, conditional_momentum_S(psi), 1e-7);
    CHECK(f.kind == DistributionKind::margenau_hill);
  }
  const auto pw = state(plane_wave(wave_k()));
  CHECK_NOTHROW(bayes_product(pw, conditional_momentum_S(pw), 1e-10));

  const auto psi = state(testing::reference_gaussian());
  auto tampered = conditional_momentum_S(psi);
  tampered.values[static_cast<std::size_t>(grid().n / 2) * grid().n + grid().n / 2] += 1e-3 / std::norm(psi[grid().n / 2]);
  CHECK_THROWS_AS(bayes_product(psi, tampered), SelfCheckError);
}

TEST_CASE("variance difference term") {
  const auto psi = state(testing::reference_gaussian());
  const auto term = variance_difference_term(psi);
  const auto o = gaussian_oracle(testing::reference_gaussian());
  CHECK(o.variance_W(2) - o.variance_S(2) == doctest::Approx(0.75));
  CHECK(testing::max_error_on_mask(term, [&](double q) { return o.variance_W(q) - o.variance_S(q); }) < 1e-8);
  CHECK(term.values[testing::index_of(grid(), 0)] == doctest::Approx(-0.25).epsilon(1e-8));
  for (double v : variance_difference_term(state(plane_wave(wave_k()))).values) CHECK(std::abs(v) < 1e-10);
}

TEST_CASE("difference relations hold pointwise") {
  for (const auto& r : localized_states()) {
    CAPTURE(format_recipe(r));
    const auto psi = state(r);
    const auto term = variance_difference_term(psi);
    const auto vw = phase_space_local_variance(wigner_transform(psi), psi).profile;
    const auto vmh = phase_space_local_variance(margenau_hill_transform(psi), psi).profile;
    const auto vc = local_variance_C(psi, MomentumPower{1}).profile;
    double worst = 0;
    for (int j = 0; j < psi.size(); ++j) {
      if (!term.defined(j)) continue;
      worst = std::max(worst, std::abs(vw.values[j] - vmh.values[j] - term.values[j]));
      worst = std::max(worst, std::abs(vw.values[j] - vc.values[j] + term.values[j]));
    }
    CHECK(worst < 1e-7);
  }
}

TEST_CASE("distribution kind names") {
  for (auto k : {DistributionKind::weyl_wigner, DistributionKind::margenau_hill, DistributionKind::classical})
    CHECK(parse_distribution_kind(to_string(k)) == k);
  CHECK_THROWS_AS(parse_distribution_kind("husimi"), InvalidArgument);
}
