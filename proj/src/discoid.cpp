#include "helfrich/discoid.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "helfrich/analysis.hpp"
#include "helfrich/detail/dopri5.hpp"
#include "helfrich/errors.hpp"

namespace helfrich {

double discoid_sin_phi(double r, const DiscoidSpec& spec) {
  return -2.0 * spec.c_o * r * std::log(r) + spec.A * r;
}

double discoid_dphi(double r, const DiscoidSpec& spec) {
  return -2.0 * spec.c_o * std::log(r) - 2.0 * spec.c_o + spec.A;
}

double discoid_H(double r, const DiscoidSpec& spec) {
  if (!(r > 0)) throw std::invalid_argument("discoid_H: r must be positive");
  return -2.0 * spec.c_o * std::log(r) + spec.A - spec.c_o;
}

ProfileCurve discoid_profile(const DiscoidSpec& spec, const SolverConfig& config,
                             std::optional<double> r_max) {
  if (!std::isfinite(spec.c_o) || !std::isfinite(spec.A)) throw std::invalid_argument("discoid: non-finite spec");
  if (r_max && !(*r_max > 0)) throw std::invalid_argument("discoid: r_max must be positive");
  const double h0 = config.h0.value_or(1e-6);
  if (!(h0 > 0)) throw std::invalid_argument("discoid: h0 must be positive");
  constexpr double gap = 1e-8;  // stop where |f| = 1 - gap, cos(phi) ~ 1.4e-4

  ProfileCurve curve;
  curve.params = {spec.c_o, 0.0};
  curve.h0 = h0;
  curve.z_stop = 0.0;

  if (std::abs(discoid_sin_phi(h0, spec)) >= 1.0 - gap)
    throw DomainExceeded("discoid: arcsine argument leaves [-1, 1] at the pole");

  detail::DriveOptions opt;
  opt.rel_tol = std::min(config.rel_tol, 1e-13);
  opt.abs_tol = std::min(config.abs_tol, 1e-13);
  opt.h_init = h0;
  opt.h_min = 1e-16;
  opt.s_max = config.s_max.value_or(50.0);
  if (config.max_step > 0) opt.h_max = config.max_step;
  opt.output_step = config.output_step;
  opt.grid_origin = h0;

  // state (r, z)
  auto f = [&](double, const detail::Vec<2>& y) {
    const double sp = discoid_sin_phi(y[0], spec);
    return detail::Vec<2>{std::sqrt(std::max(0.0, 1.0 - sp * sp)), sp};
  };
  auto event = [&](const detail::Vec<2>& y) {
    const double edge = 1.0 - gap - std::abs(discoid_sin_phi(y[0], spec));
    return r_max ? std::min(edge, *r_max - y[0]) : edge;
  };
  auto guard = [&](const detail::Vec<2>& y) {
    return y[0] > 0 && std::abs(discoid_sin_phi(y[0], spec)) < 1.0;
  };
  auto emit = [&](double s, const detail::Vec<2>& y, const detail::Vec<2>&) {
    curve.samples.push_back({s, y[0], y[1], std::asin(discoid_sin_phi(y[0], spec)), discoid_dphi(y[0], spec)});
  };
  const auto end = detail::drive<2>(f, h0, detail::Vec<2>{h0, 0.0}, opt, event, guard, emit);
  if (end == detail::DriveEnd::Failure) {
    curve.termination = Termination::StepFailure;
    return curve;
  }
  if (end == detail::DriveEnd::MaxArcLength) {
    curve.termination = Termination::MaxArcLength;
  } else {
    const auto last = curve.samples.back();
    const bool at_edge = std::abs(discoid_sin_phi(last.r, spec)) >= 1.0 - 2.0 * gap;
    if (r_max && at_edge && last.r < *r_max * (1.0 - 1e-12))
      throw DomainExceeded("discoid: arcsine argument leaves [-1, 1] before r_max");
    if (at_edge) {
      // osculating-circle closure to the vertical tangent
      const double k = last.dphi;
      const double phi_eq = std::copysign(std::numbers::pi / 2, last.phi);
      const double ds = (phi_eq - last.phi) / k;
      if (ds > 0 && std::isfinite(ds)) {
        const double r_eq = last.r + (std::sin(phi_eq) - std::sin(last.phi)) / k;
        const double z_eq = last.z - (std::cos(phi_eq) - std::cos(last.phi)) / k;
        curve.samples.push_back({last.s + ds, r_eq, z_eq, phi_eq, discoid_dphi(r_eq, spec)});
      }
      curve.termination = Termination::EquatorReached;
    } else {
      curve.termination = Termination::MaxArcLength;  // stopped at r_max
    }
  }
  const double z_shift = curve.samples.back().z;
  for (auto& q : curve.samples) q.z -= z_shift;
  curve.params.z_0 = curve.samples.front().z;
  curve.stop_height = 0.0;
  return curve;
}

double discoid_el_residual(const ProfileCurve& curve, double r_min, int stencil_order) {
  if (!(r_min > 0)) throw std::invalid_argument("discoid_el_residual: r_min must be positive");
  ElOptions opt;
  opt.stencil_order = stencil_order;
  opt.axis_exclusion = 0.0;
  opt.equator_exclusion = 0.0;
  opt.r_min = r_min;
  return el_residual(curve, opt);
}

FluxEstimate boundary_flux(const ProfileCurve& curve, const DiscoidSpec& spec,
                           const std::vector<double>& epsilons) {
  if (epsilons.size() < 4) throw std::invalid_argument("boundary_flux: at least four radii are required");
  if (curve.samples.empty()) throw std::invalid_argument("boundary_flux: empty profile");
  double r_lo = curve.samples.front().r, r_hi = r_lo;
  for (const auto& q : curve.samples) r_hi = std::max(r_hi, q.r);
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    const double e = epsilons[i];
    if (!(e >= r_lo && e <= r_hi)) throw std::invalid_argument("boundary_flux: radius outside the profile");
    if (i > 0 && !(e < epsilons[i - 1])) throw std::invalid_argument("boundary_flux: radii must decrease");
  }

  // geometric mean curvature from the profile angle, sin(phi)/(2r) + phi'/2
  auto h_geom = [&](double r) { return 0.5 * (discoid_sin_phi(r, spec) / r + discoid_dphi(r, spec)); };

  FluxEstimate out;
  out.epsilons = epsilons;
  out.target = -4.0 * std::numbers::pi * spec.c_o;
  for (const double e : epsilons) {
    const double sp = discoid_sin_phi(e, spec);
    const double cp = std::sqrt(1.0 - sp * sp);
    const double dr = 1e-4 * e;
    const double dh_dr = (h_geom(e + dr) - h_geom(e - dr)) / (2.0 * dr);
    // outward conormal of the disc {r < eps} is the profile tangent, so
    // dH/dn = dH/ds = dH/dr cos(phi)
    out.flux_values.push_back(2.0 * std::numbers::pi * e * dh_dr * cp);
    out.gradient_values.push_back(2.0 * std::numbers::pi * e * (h_geom(e) + spec.c_o) * cp);
    out.psi_term_values.push_back(0.0);
  }

  const auto n = static_cast<Eigen::Index>(epsilons.size());
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double e = epsilons[static_cast<std::size_t>(i)];
    const double l = std::log(e);
    a(i, 0) = 1.0;
    a(i, 1) = e * e * l * l;
    a(i, 2) = e * e;
    b(i) = out.flux_values[static_cast<std::size_t>(i)];
  }
  out.extrapolated_limit = a.colPivHouseholderQr().solve(b)(0);
  out.dirac_total = 0.0 - 2.0 * out.extrapolated_limit;  // no negative zero
  return out;
}

std::string discoid_verdict(const DiscoidSpec& spec, const FluxEstimate& flux) {
  if (spec.c_o == 0 && std::abs(flux.dirac_total) <= 1e-8) return "critical (Willmore sphere)";
  return "not critical (pole defect " + std::to_string(flux.dirac_total) + " psi(0))";
}

}  // namespace helfrich
