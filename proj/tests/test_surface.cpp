#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "helfrich/discoid.hpp"
#include "helfrich/errors.hpp"
#include "helfrich/surface.hpp"

using namespace helfrich;

namespace {

constexpr double kPi = std::numbers::pi;

const ClosedSurface& unit_sphere() {
  static const ClosedSurface s = [] {
    const auto cap = make_cap({0.0, 1.0}, {});
    return glue(cap, cap);
  }();
  return s;
}

double nu3(const FieldPoint& q) { return q.nu3; }
double two_h_nu3(const FieldPoint& q) { return 2 * q.H * q.nu3; }

}  // namespace

TEST_CASE("make_cap refuses caps that miss the equator") {
  CHECK_THROWS_AS(make_cap({1.0, -2.0}, {}), std::runtime_error);
}

TEST_CASE("unit sphere integrals") {
  const auto& s = unit_sphere();
  CHECK(s.symmetric);
  CHECK(s.r_star == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(area(s).value - 4 * kPi) <= 1e-5);
  CHECK(std::abs(helfrich_energy(s, 0.0).value - 4 * kPi) <= 1e-5);
  // H = -1 everywhere, so the energy with c_o = 1 vanishes
  CHECK(std::abs(helfrich_energy(s, 1.0).value) <= 1e-8);
  const auto rc = rescaling_integral(s, 0.0);
  CHECK(std::abs(rc.value + 4 * kPi) <= 1e-5);
  CHECK(rc.top == doctest::Approx(rc.bottom));
  CHECK(area(s).error < 1e-8);
}

TEST_CASE("per-cap boundary identities") {
  // divergence theorem on a cap closed by its equator disc:
  // int nu_3 = pi r*^2 and int 2 H nu_3 = -2 pi r*
  for (const auto& p : {ShootingParams{0.0, 1.0}, ShootingParams{1.0, 0.4}, ShootingParams{1.0, 2.5},
                        ShootingParams{2.0, 0.7}, ShootingParams{1.0, 5.0}}) {
    const auto cap = make_cap(p, {});
    const double r = cap.endpoint.r_star;
    CHECK(std::abs(cap_integral(cap, nu3, false).value - kPi * r * r) <= 1e-8);
    CHECK(std::abs(cap_integral(cap, two_h_nu3, false).value + 2 * kPi * r) <= 1e-8);
    // reflection flips nu_3 and keeps H
    CHECK(std::abs(cap_integral(cap, nu3, true).value + kPi * r * r) <= 1e-8);
  }
}

TEST_CASE("flux identity ties quadrature to the endpoint extrapolation") {
  for (const auto& p : {ShootingParams{1.0, 0.4}, ShootingParams{1.0, 1.0}, ShootingParams{1.0, 3.0},
                        ShootingParams{2.0, 0.5}, ShootingParams{0.5, 4.0}}) {
    const auto cap = make_cap(p, {});
    const auto s = glue(cap, cap);
    const auto rc = rescaling_integral(s, p.c_o);
    const auto& e = cap.endpoint;
    // per cap: int (H + c) = -pi r*^2 phi''(ell) / (2 c)
    CHECK(std::abs(rc.top + kPi * e.r_star * e.r_star * e.ddphi / (2 * p.c_o)) <= 1e-6 * (1 + std::abs(e.ddphi)));
    CHECK(rc.top == doctest::Approx(rc.bottom).epsilon(1e-12));
    // symmetric gluing: c3_gap = |phi''(ell)|
    const auto rep = regularity_report(s);
    CHECK(rep.c1_gap == 0.0);
    CHECK(rep.c2_gap == 0.0);
    CHECK(rep.c3_gap == doctest::Approx(std::abs(e.ddphi)));
    CHECK(rep.dH_top == doctest::Approx(e.ddphi / 2));
  }
}

TEST_CASE("first Helfrich sphere at c_o = 1") {
  const auto cap = make_cap({1.0, 1.852633875360}, {});
  const auto s = glue(cap, cap);
  const auto rep = regularity_report(s);
  CHECK(rep.critical(1e-4));
  const double a = area(s).value;
  CHECK(std::abs(rescaling_integral(s, 1.0).value) <= 1e-5 * a);
  const double energy = helfrich_energy(s, 1.0).value;
  CHECK(energy > 0);
  // regression pin, stable under grid refinement
  const auto fine = make_cap({1.0, 1.852633875360}, {}, 5e-4);
  const double energy_fine = helfrich_energy(glue(fine, fine), 1.0).value;
  CHECK(std::abs(energy - energy_fine) <= 1e-4);
  CHECK(energy == doctest::Approx(1.4791648).epsilon(1e-6));
}

TEST_CASE("Helfrich energy is scale invariant") {
  // (c, z0) -> (c / l, l z0) leaves int (H + c)^2 unchanged
  const auto a = make_cap({1.0, 0.6}, {});
  const auto b = make_cap({2.0, 0.3}, {});
  CHECK(helfrich_energy(glue(a, a), 1.0).value ==
        doctest::Approx(helfrich_energy(glue(b, b), 2.0).value).epsilon(1e-7));
  CHECK(area(glue(a, a)).value == doctest::Approx(4 * area(glue(b, b)).value).epsilon(1e-7));
}

TEST_CASE("gluing checks") {
  const auto a = make_cap({1.0, 1.0}, {});
  const auto b = make_cap({1.0, 2.0}, {});
  CHECK_THROWS_AS(glue(a, b), RadiusMismatch);
  const auto loose = glue(a, b, 1.0);
  CHECK_FALSE(loose.symmetric);
  const auto up = make_cap({1.0, -0.5}, {});
  CHECK_THROWS_AS(glue(up, up), std::invalid_argument);
}

TEST_CASE("mesh of the unit sphere") {
  const auto& s = unit_sphere();
  CHECK_THROWS_AS(revolve_mesh(s, 7), std::invalid_argument);
  const auto m = revolve_mesh(s, 64);
  CHECK(euler_characteristic(m) == 2);
  CHECK(std::abs(mesh_area(m) - 4 * kPi) <= 0.005 * 4 * kPi);
  CHECK(mesh_volume(m) > 0);
  CHECK(m.vertices.size() == m.normals.size());
  CHECK(m.H.size() == m.vertices.size());
  // normals point away from the centre
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    const auto& v = m.vertices[i];
    const auto& n = m.normals[i];
    CHECK(v[0] * n[0] + v[1] * n[1] + v[2] * n[2] > 0.99);
  }
  // poles: exact axis points with vertical normals
  CHECK(m.vertices.front()[2] == doctest::Approx(1.0));
  CHECK(m.normals.front()[2] == doctest::Approx(1.0));
  CHECK(m.vertices.back()[2] == doctest::Approx(-1.0));
  CHECK(m.normals.back()[2] == doctest::Approx(-1.0));
}

TEST_CASE("mesh integrals converge at second order in n_theta") {
  const auto cap = make_cap({1.0, 1.852633875360}, {});
  const auto s = glue(cap, cap);
  const double a = area(s).value;
  const double w = helfrich_energy(s, 1.0).value;
  auto err = [&](int n) {
    const auto m = revolve_mesh(s, n);
    CHECK(euler_characteristic(m) == 2);
    return std::make_pair(std::abs(mesh_area(m) - a),
                          std::abs(mesh_integral(m, [](double H, double) { return (H + 1) * (H + 1); }) - w));
  };
  const auto e32 = err(32), e64 = err(64), e128 = err(128);
  CHECK(std::log2(e32.first / e64.first) == doctest::Approx(2.0).epsilon(0.1));
  CHECK(std::log2(e64.first / e128.first) == doctest::Approx(2.0).epsilon(0.1));
  CHECK(std::log2(e64.second / e128.second) >= 1.7);
}

TEST_CASE("discoid mirror double is a closed genus-zero mesh") {
  SolverConfig cfg;
  const auto d = discoid_profile({1.0, 0.0}, cfg);
  const auto m = revolve_profile(d, 48);
  CHECK(euler_characteristic(m) == 2);
  CHECK(mesh_volume(m) > 0);
  // the c_o = 0 discoid is the unit sphere, traced from the bottom pole
  const auto sphere = revolve_profile(discoid_profile({0.0, 1.0}, cfg), 64);
  CHECK(std::abs(mesh_area(sphere) - 4 * kPi) <= 0.005 * 4 * kPi);
  CHECK(mesh_volume(sphere) > 0);
  for (std::size_t i = 0; i < sphere.vertices.size(); ++i) {
    const auto& v = sphere.vertices[i];
    const auto& n = sphere.normals[i];
    CHECK(v[0] * n[0] + v[1] * n[1] + v[2] * n[2] > 0.99);
  }
}
