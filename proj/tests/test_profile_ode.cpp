#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "helfrich/errors.hpp"
#include "helfrich/profile_ode.hpp"

using namespace helfrich;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("rhs matches the system at a regular point") {
  const ProfileState q{0.0, 0.5, 2.0, 0.3};
  const auto d = rhs(q, 1.5);
  CHECK(d.dr == doctest::Approx(std::cos(0.3)).epsilon(1e-15));
  CHECK(d.dz == doctest::Approx(std::sin(0.3)).epsilon(1e-15));
  CHECK(d.dphi == doctest::Approx(-2 * std::cos(0.3) / 2.0 - std::sin(0.3) / 0.5 - 3.0).epsilon(1e-15));
}

TEST_CASE("rhs refuses the singular sets") {
  CHECK_THROWS_AS(rhs({0, 0.0, 1.0, 0.0}, 1.0), DomainError);
  CHECK_THROWS_AS(rhs({0, 1.0, 0.0, 0.0}, 1.0), DomainError);
}

TEST_CASE("axis curvature and series start") {
  CHECK(initial_curvature({1.0, 0.4}) == doctest::Approx(-3.5));
  CHECK(initial_curvature({0.0, 2.0}) == doctest::Approx(-0.5));
  CHECK(initial_curvature({1.0, -1.0}) == 0.0);

  const ShootingParams p{1.0, 0.4};
  const double h = 1e-3, k = -3.5;
  const auto q = series_start(p, h);
  CHECK(q.s == h);
  CHECK(q.r == doctest::Approx(h - k * k * h * h * h / 6).epsilon(1e-15));
  CHECK(q.z == doctest::Approx(0.4 + k * h * h / 2).epsilon(1e-15));
  CHECK(q.phi == doctest::Approx(k * h).epsilon(1e-15));

  // exact circle of radius 1: r = sin h, z = cos h, phi = -h
  const auto c = series_start({0.0, 1.0}, 1e-2);
  CHECK(std::abs(c.r - std::sin(1e-2)) < 1e-11);
  CHECK(std::abs(c.z - std::cos(1e-2)) < 1e-9);
  CHECK(std::abs(c.phi + 1e-2) < 1e-15);
}

TEST_CASE("equator angle follows the side of the plane") {
  CHECK(equator_angle({1.0, 2.0}) == doctest::Approx(-kPi / 2));
  CHECK(equator_angle({1.0, -0.5}) == doctest::Approx(kPi / 2));
}

TEST_CASE("config defaults and validation") {
  SolverConfig c;
  CHECK(c.h0_for({1.0, 0.5}) == doctest::Approx(1e-6));
  CHECK(c.h0_for({1.0, 4.0}) == doctest::Approx(4e-6));
  CHECK(c.z_stop_for({1.0, 4.0}) == doctest::Approx(4e-4));
  CHECK(c.s_max_for({0.5, 1.0}) == doctest::Approx(50.0));
  CHECK(c.s_max_for({4.0, 1.0}) == doctest::Approx(12.5));
  CHECK_NOTHROW(c.validate({1.0, 1.0}));
  CHECK_THROWS_AS(c.validate({1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(c.validate({NAN, 1.0}), std::invalid_argument);
  SolverConfig bad = c;
  bad.rel_tol = -1;
  CHECK_THROWS_AS(bad.validate({1.0, 1.0}), std::invalid_argument);
  bad = c;
  bad.z_stop = 2.0;
  CHECK_THROWS_AS(bad.validate({1.0, 1.0}), std::invalid_argument);
  bad = c;
  bad.h0 = 0.5;
  CHECK_THROWS_AS(bad.validate({1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(integrate_profile({1.0, 0.0}, c), std::invalid_argument);
}

TEST_CASE("c_o = 0 gives circles of radius |z0|") {
  for (const double R : {1.0, 2.0, 0.3}) {
    const auto curve = integrate_profile({0.0, R}, {});
    REQUIRE(curve.termination == Termination::EquatorReached);
    double err = 0, rate_err = 0;
    for (const auto& q : curve.samples) {
      err = std::max(err, std::abs(q.r - R * std::sin(q.s / R)));
      err = std::max(err, std::abs(q.z - R * std::cos(q.s / R)));
      err = std::max(err, std::abs(q.phi + q.s / R));
      // phi' is evaluated from the state through cos(phi)/z, which amplifies
      // state errors by 1/|z| next to the equator
      rate_err = std::max(rate_err, std::abs(q.dphi + 1 / R) * std::abs(q.z));
    }
    CHECK(err <= 1e-8 * std::max(1.0, R));
    CHECK(rate_err <= 1e-8);
    CHECK(curve.stop_height <= curve.z_stop * (1 + 1e-9));
  }
}

TEST_CASE("z0 = -1/c_o stays on the horizontal line") {
  SolverConfig c;
  c.s_max = 20.0;
  const auto curve = integrate_profile({1.0, -1.0}, c);
  CHECK(curve.termination == Termination::MaxArcLength);
  CHECK(curve.samples.back().s == doctest::Approx(20.0));
  for (const auto& q : curve.samples) {
    CHECK(std::abs(q.z + 1.0) <= 1e-8);
    CHECK(std::abs(q.phi) <= 1e-8);
    CHECK(std::abs(q.r - q.s) <= 1e-8);
  }
}

TEST_CASE("output_step emits a uniform grid") {
  SolverConfig c;
  c.output_step = 1e-2;
  const auto curve = integrate_profile({1.0, 0.8}, c);
  REQUIRE(curve.samples.size() > 10);
  for (std::size_t i = 1; i + 1 < curve.samples.size(); ++i)
    CHECK(curve.samples[i].s - curve.samples[i - 1].s == doctest::Approx(1e-2).epsilon(1e-9));
}

TEST_CASE("nodoid-type trajectories run to the arc-length cap") {
  const auto curve = integrate_profile({1.0, -2.0}, {});
  CHECK(curve.termination == Termination::MaxArcLength);
  CHECK(curve.samples.back().phi < -kPi);  // the angle winds past any bound
}

TEST_CASE("first integral holds on all classes") {
  for (const auto& p : {ShootingParams{1.0, 0.4}, ShootingParams{1.0, 3.0}, ShootingParams{2.0, -0.3},
                        ShootingParams{1.0, -2.5}, ShootingParams{0.7, -4.0}, ShootingParams{0.0, 1.0}}) {
    const auto curve = integrate_profile(p, {});
    CHECK(conserved_residual(curve) <= 1e-6);
  }
}

TEST_CASE("dilation and reflection covariance") {
  SolverConfig a, b;
  a.h0 = 1e-6;
  a.output_step = 1e-3;
  b.h0 = 3e-6;
  b.output_step = 3e-3;
  const auto base = integrate_profile({1.0, 0.7}, a);
  const auto scaled = apply_scaling(base, 3.0);
  CHECK(scaled.params.c_o == doctest::Approx(1.0 / 3));
  CHECK(scaled.params.z_0 == doctest::Approx(2.1));
  const auto direct = integrate_profile(scaled.params, b);
  std::size_t compared = 0;
  for (std::size_t i = 0; i + 1 < std::min(direct.samples.size(), scaled.samples.size()); ++i) {
    const auto& p = scaled.samples[i];
    const auto& q = direct.samples[i];
    if (std::abs(p.s - q.s) > 1e-9) break;
    CHECK(std::abs(p.r - q.r) <= 1e-6);
    CHECK(std::abs(p.z - q.z) <= 1e-6);
    CHECK(std::abs(p.phi - q.phi) <= 1e-6);
    ++compared;
  }
  CHECK(compared > 100);

  // l = -1: (c, z0) -> (-c, -z0) with phi -> -phi
  const auto mirrored = apply_scaling(base, -1.0);
  CHECK(mirrored.params.c_o == -1.0);
  CHECK(mirrored.params.z_0 == -0.7);
  const auto direct_m = integrate_profile(mirrored.params, a);
  REQUIRE(direct_m.termination == Termination::EquatorReached);
  for (std::size_t i = 0; i + 1 < std::min(direct_m.samples.size(), mirrored.samples.size()); ++i) {
    CHECK(std::abs(mirrored.samples[i].z - direct_m.samples[i].z) <= 1e-8);
    CHECK(std::abs(mirrored.samples[i].phi - direct_m.samples[i].phi) <= 1e-8);
  }
}

TEST_CASE("continue_profile reaches a lower stop height from an interior state") {
  const auto curve = integrate_profile({1.0, 1.0}, {});
  const auto& from = curve.samples[curve.samples.size() / 2];
  const auto tail = continue_profile({1.0, 1.0}, {from.s, from.r, from.z, from.phi}, 1e-7, {});
  CHECK(tail.termination == Termination::EquatorReached);
  CHECK(tail.stop_height <= 1e-7 * (1 + 1e-9));
  CHECK(tail.samples.back().r == doctest::Approx(curve.samples.back().r).epsilon(1e-3));
}

TEST_CASE("termination names") {
  CHECK(to_string(Termination::EquatorReached) == "EquatorReached");
  CHECK(to_string(Termination::MaxArcLength) == "MaxArcLength");
  CHECK(to_string(Termination::StepFailure) == "StepFailure");
}
