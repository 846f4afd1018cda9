#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "helfrich/analysis.hpp"
#include "helfrich/discoid.hpp"
#include "helfrich/errors.hpp"

using namespace helfrich;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

// root of 2 r log r = 1 (where sin(phi) = -1 for c_o = 1, A = 0), by bisection
double equator_radius_oracle() {
  double lo = 1.0, hi = 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (2 * mid * std::log(mid) < 1 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ProfileCurve gridded(const DiscoidSpec& spec, double ds) {
  SolverConfig cfg;
  cfg.output_step = ds;
  return discoid_profile(spec, cfg);
}

}  // namespace

TEST_CASE("closed-form values") {
  const DiscoidSpec s{1.0, 0.0};
  CHECK(discoid_sin_phi(1 / kE, s) == doctest::Approx(2 / kE).epsilon(1e-14));
  CHECK(discoid_sin_phi(1.0, s) == 0.0);
  CHECK(discoid_H(1.0, s) == doctest::Approx(-1.0));
  CHECK(discoid_H(1 / kE, s) + s.c_o == doctest::Approx(2.0));
  CHECK_THROWS_AS(discoid_H(0.0, s), std::invalid_argument);
  CHECK_THROWS_AS(discoid_H(-1.0, s), std::invalid_argument);
  // logarithmic blow-up at the pole
  CHECK(discoid_H(1e-12, s) > 50.0);
  // phi -> 0 at the axis
  CHECK(std::abs(discoid_sin_phi(1e-9, s)) < 1e-7);
}

TEST_CASE("profile runs from the pole to the vertical tangent") {
  const auto d = discoid_profile({1.0, 0.0}, {});
  REQUIRE(d.termination == Termination::EquatorReached);
  const auto& end = d.samples.back();
  CHECK(end.r == doctest::Approx(equator_radius_oracle()).epsilon(1e-7));
  CHECK(end.phi == doctest::Approx(-kPi / 2));
  CHECK(end.z == 0.0);
  const auto& start = d.samples.front();
  CHECK(start.phi == doctest::Approx(std::asin(discoid_sin_phi(start.r, {1.0, 0.0}))).epsilon(1e-12));
  CHECK(std::abs(start.phi) < 1e-4);
  CHECK(d.params.z_0 == d.samples.front().z);
  // the tangent turns from rising to falling exactly as r crosses the rim r = 1
  int turns = 0;
  for (std::size_t i = 1; i < d.samples.size(); ++i) {
    const auto& a = d.samples[i - 1];
    const auto& b = d.samples[i];
    if (a.phi > 0 && b.phi <= 0) {
      ++turns;
      CHECK(a.r < 1.0);
      CHECK(b.r >= 1.0);
    }
  }
  CHECK(turns == 1);
}

TEST_CASE("r_max stops at the rim or reports the arcsine domain") {
  const auto d = discoid_profile({1.0, 0.0}, {}, 1.0);
  CHECK(d.termination == Termination::MaxArcLength);
  CHECK(d.samples.back().r == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(d.samples.back().phi) < 1e-9);
  CHECK_THROWS_AS(discoid_profile({1.0, 5.0}, {}, 1.0), DomainExceeded);
  CHECK_THROWS_AS(discoid_profile({1.0, 0.0}, {}, -1.0), std::invalid_argument);
}

TEST_CASE("geometric mean curvature matches the closed form") {
  const DiscoidSpec s{1.0, 0.0};
  const auto d = gridded(s, 1e-3);
  int checked = 0;
  for (const auto& q : d.samples) {
    if (q.r < 1e-3 || std::abs(std::sin(q.phi)) > 0.999) continue;
    CHECK(std::abs(curvature_at(q).H - discoid_H(q.r, s)) <= 1e-6);
    ++checked;
  }
  CHECK(checked > 1000);
  // phi' from differences of the integrated angle, away from the pole
  int diffs = 0;
  for (std::size_t i = 1; i + 1 < d.samples.size(); ++i) {
    const auto& q = d.samples[i];
    if (q.r < 0.05 || std::abs(std::sin(q.phi)) > 0.99) continue;
    const double ds = d.samples[i + 1].s - d.samples[i - 1].s;
    if (std::abs(ds - 2e-3) > 1e-12) continue;
    const double fd = (d.samples[i + 1].phi - d.samples[i - 1].phi) / ds;
    CHECK(std::abs(fd - discoid_dphi(q.r, s)) <= 1e-3);
    ++diffs;
  }
  CHECK(diffs > 500);
}

TEST_CASE("Euler-Lagrange residual away from the poles") {
  const DiscoidSpec s{1.0, 0.0};
  const auto d4 = gridded(s, 4e-3), d2 = gridded(s, 2e-3), d1 = gridded(s, 1e-3);
  const double r1 = discoid_el_residual(d1, 0.05);
  CHECK(r1 <= 1e-3);
  CHECK(std::log2(discoid_el_residual(d4, 0.05) / discoid_el_residual(d2, 0.05)) >= 1.8);
  CHECK(discoid_el_residual(d1, 0.5) < r1);
  CHECK_THROWS_AS(discoid_el_residual(d1, 0.0), std::invalid_argument);
  // c_o = 0, A = 1 is the unit sphere
  CHECK(discoid_el_residual(gridded({0.0, 1.0}, 1e-3), 0.05) <= 1e-6);
}

TEST_CASE("discoids do not satisfy the reduced membrane equation") {
  CHECK(rme_residual(discoid_profile({1.0, 0.0}, {})) > 0.1);
}

TEST_CASE("pole flux gives the 8 pi c_o defect") {
  const DiscoidSpec s{1.0, 0.0};
  const auto d = discoid_profile(s, {});
  const auto f = boundary_flux(d, s, {1e-2, 1e-3, 1e-4, 1e-5});
  CHECK(f.target == doctest::Approx(-4 * kPi));
  CHECK(std::abs(f.extrapolated_limit + 4 * kPi) <= 0.01 * 4 * kPi);
  CHECK(std::abs(f.dirac_total - 8 * kPi) <= 0.01 * 8 * kPi);
  // convergence toward the target over the final three levels
  const auto n = f.flux_values.size();
  CHECK(std::abs(f.flux_values[n - 1] - f.target) < std::abs(f.flux_values[n - 2] - f.target));
  CHECK(std::abs(f.flux_values[n - 2] - f.target) < std::abs(f.flux_values[n - 3] - f.target));
  // the gradient-of-psi term vanishes and the psi term is exactly zero
  for (std::size_t i = 1; i < n; ++i)
    CHECK(std::abs(f.gradient_values[i]) < std::abs(f.gradient_values[i - 1]));
  for (std::size_t i = 0; i < n; ++i) {
    const double e = f.epsilons[i];
    const double sp = discoid_sin_phi(e, s);
    CHECK(f.gradient_values[i] == doctest::Approx(2 * kPi * e * (-2 * std::log(e)) * std::sqrt(1 - sp * sp)));
  }
  for (const double v : f.psi_term_values) CHECK(v == 0.0);
  CHECK(discoid_verdict(s, f).rfind("not critical", 0) == 0);
}

TEST_CASE("flux scales with c_o and vanishes on the sphere") {
  const DiscoidSpec half{0.5, 0.0};
  const auto f = boundary_flux(discoid_profile(half, {}), half, {1e-2, 1e-3, 1e-4, 1e-5});
  CHECK(f.dirac_total == doctest::Approx(4 * kPi).epsilon(0.01));
  const DiscoidSpec sphere{0.0, 1.0};
  const auto g = boundary_flux(discoid_profile(sphere, {}), sphere, {1e-2, 1e-3, 1e-4, 1e-5});
  CHECK(std::abs(g.dirac_total) <= 1e-8);
  CHECK(discoid_verdict(sphere, g) == "critical (Willmore sphere)");
}

TEST_CASE("boundary_flux input checks") {
  const DiscoidSpec s{1.0, 0.0};
  const auto d = discoid_profile(s, {});
  CHECK_THROWS_AS(boundary_flux(d, s, {1e-2, 1e-3, 1e-4}), std::invalid_argument);
  CHECK_THROWS_AS(boundary_flux(d, s, {1e-2, 1e-3, 1e-3, 1e-5}), std::invalid_argument);
  CHECK_THROWS_AS(boundary_flux(d, s, {1e-2, 1e-3, 1e-4, 1e-9}), std::invalid_argument);
}
