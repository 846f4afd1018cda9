#include "helfrich/profile_ode.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "helfrich/detail/dopri5.hpp"
#include "helfrich/errors.hpp"

namespace helfrich {

namespace {

using detail::Vec;
constexpr double kHalfPi = std::numbers::pi / 2;

// Reduced to c_o >= 0 through the l = -1 scaling.
struct Normalized {
  double c_o;
  double z_0;
};

Normalized normalize(const ShootingParams& p) {
  if (p.c_o < 0) return {-p.c_o, -p.z_0};
  return {p.c_o, p.z_0};
}

bool reaches_equator(const ShootingParams& p) {
  const auto n = normalize(p);
  if (n.c_o == 0) return true;
  return n.z_0 > -1.0 / n.c_o;
}

inline double phi_rate(double r, double z, double phi, double c_o) {
  return -2.0 * std::cos(phi) / z - std::sin(phi) / r - 2.0 * c_o;
}

struct ProfileRhs {
  double c_o;
  Vec<3> operator()(double, const Vec<3>& y) const {
    return {std::cos(y[2]), std::sin(y[2]), phi_rate(y[0], y[1], y[2], c_o)};
  }
};

ProfileCurve run(const ShootingParams& p, const ProfileState& start, double stop_height,
                 const SolverConfig& config, double grid_origin) {
  ProfileCurve curve;
  curve.params = p;
  curve.h0 = config.h0_for(p);
  curve.z_stop = stop_height;
  curve.stop_height = std::abs(start.z);

  const bool equator_bound = reaches_equator(p);
  const double z_sign = p.z_0 > 0 ? 1.0 : -1.0;

  detail::DriveOptions opt;
  opt.rel_tol = config.rel_tol;
  opt.abs_tol = config.abs_tol;
  opt.h_init = std::max(start.s, curve.h0);
  opt.s_max = config.s_max_for(p);
  opt.h_min = 1e-14 * std::max(1.0, std::abs(p.z_0));
  if (config.max_step > 0) opt.h_max = config.max_step;
  opt.output_step = config.output_step;
  opt.grid_origin = grid_origin;

  auto event = [&](const Vec<3>& y) {
    return equator_bound ? z_sign * y[1] - stop_height : 1.0;
  };
  auto guard = [&](const Vec<3>& y) {
    if (!(y[0] > 0)) return false;
    if (equator_bound && !(y[2] > -std::numbers::pi && y[2] < std::numbers::pi)) return false;
    return z_sign * y[1] > 0 || !equator_bound;
  };
  auto emit = [&](double s, const Vec<3>& y, const Vec<3>& k) {
    curve.samples.push_back({s, y[0], y[1], y[2], k[2]});
    curve.stop_height = std::min(curve.stop_height, std::abs(y[1]));
  };

  const Vec<3> y0{start.r, start.z, start.phi};
  const auto end = detail::drive<3>(ProfileRhs{p.c_o}, start.s, y0, opt, event, guard, emit);
  switch (end) {
    case detail::DriveEnd::Event: {
      const auto& last = curve.samples.back();
      curve.termination = std::abs(last.phi - equator_angle(p)) <= config.equator_window
                              ? Termination::EquatorReached
                              : Termination::StepFailure;
      break;
    }
    case detail::DriveEnd::MaxArcLength:
      curve.termination = Termination::MaxArcLength;
      break;
    case detail::DriveEnd::Failure:
      curve.termination = Termination::StepFailure;
      break;
  }
  return curve;
}

}  // namespace

std::string to_string(Termination t) {
  switch (t) {
    case Termination::EquatorReached:
      return "EquatorReached";
    case Termination::MaxArcLength:
      return "MaxArcLength";
    case Termination::StepFailure:
      return "StepFailure";
  }
  return "StepFailure";
}

double SolverConfig::h0_for(const ShootingParams& p) const {
  return h0.value_or(1e-6 * std::max(1.0, std::abs(p.z_0)));
}

double SolverConfig::z_stop_for(const ShootingParams& p) const {
  return z_stop.value_or(1e-4 * std::abs(p.z_0));
}

double SolverConfig::s_max_for(const ShootingParams& p) const {
  return s_max.value_or(50.0 / std::max(std::abs(p.c_o), 1.0));
}

void SolverConfig::validate(const ShootingParams& p) const {
  if (p.z_0 == 0 || !std::isfinite(p.z_0) || !std::isfinite(p.c_o))
    throw std::invalid_argument("z_0 must be finite and nonzero");
  const double h = h0_for(p), zs = z_stop_for(p), sm = s_max_for(p);
  if (!(h > 0) || !(rel_tol > 0) || !(abs_tol > 0) || !(zs > 0) || !(sm > 0))
    throw std::invalid_argument("solver settings must be positive");
  if (richardson_levels < 1) throw std::invalid_argument("richardson_levels must be >= 1");
  if (!(zs < std::abs(p.z_0))) throw std::invalid_argument("z_stop must be below |z_0|");
  if (!(h < 1e-2 * std::abs(p.z_0))) throw std::invalid_argument("h0 must be much smaller than |z_0|");
  if (max_step < 0 || output_step < 0) throw std::invalid_argument("step bounds must be >= 0");
}

Rates rhs(const ProfileState& state, double c_o) {
  if (!(state.r > 0)) throw DomainError("rhs: r <= 0 is the axis singularity; use series_start");
  if (state.z == 0) throw DomainError("rhs: z == 0 is the equator singularity");
  return {std::cos(state.phi), std::sin(state.phi), phi_rate(state.r, state.z, state.phi, c_o)};
}

double equator_angle(const ShootingParams& p) { return p.z_0 > 0 ? -kHalfPi : kHalfPi; }

double initial_curvature(const ShootingParams& p) { return -1.0 / p.z_0 - p.c_o; }

ProfileState series_start(const ShootingParams& p, double h0) {
  if (!(h0 > 0)) throw std::invalid_argument("series_start: h0 must be positive");
  if (p.z_0 == 0) throw std::invalid_argument("series_start: z_0 must be nonzero");
  const double k = initial_curvature(p);
  return {h0, h0 - k * k * h0 * h0 * h0 / 6.0, p.z_0 + 0.5 * k * h0 * h0, k * h0};
}

ProfileCurve integrate_profile(const ShootingParams& p, const SolverConfig& config) {
  config.validate(p);
  const double h0 = config.h0_for(p);
  return run(p, series_start(p, h0), config.z_stop_for(p), config, h0);
}

ProfileCurve continue_profile(const ShootingParams& p, const ProfileState& from,
                              double stop_height, const SolverConfig& config) {
  return run(p, from, stop_height, config, from.s);
}

double conserved_residual(const ProfileCurve& curve) {
  const auto& smp = curve.samples;
  if (smp.empty()) return 0.0;
  const double c = curve.params.c_o;
  // g = r cos^2(phi) / z and its first two arc-length derivatives along the
  // trajectory, for two-point Hermite quadrature
  struct Jet {
    double g, dg, ddg;
  };
  auto jet = [](const ProfileSample& q) {
    const double C = std::cos(q.phi), S = std::sin(q.phi), p = q.dphi;
    const double dp = 2.0 * S * p / q.z + 2.0 * C * S / (q.z * q.z) - C * p / q.r + S * C / (q.r * q.r);
    const double u = q.r * C * C;
    const double du = C * C * C - 2.0 * q.r * C * S * p;
    const double ddu = -5.0 * C * C * S * p + 2.0 * q.r * p * p * (S * S - C * C) - 2.0 * q.r * C * S * dp;
    const double iz = 1.0 / q.z;
    return Jet{u * iz, du * iz - u * S * iz * iz,
               ddu * iz - 2.0 * du * S * iz * iz - u * C * p * iz * iz + 2.0 * u * S * S * iz * iz * iz};
  };
  // [0, s_first]: the integrand is s / z_0 + O(s^3) at the axis
  double integral = smp.front().s * smp.front().s / (2.0 * curve.params.z_0);
  double worst = 0.0;
  Jet prev = jet(smp.front());
  for (std::size_t i = 0; i < smp.size(); ++i) {
    if (i > 0) {
      // quintic Hermite rule, O(h^7) per interval
      const Jet cur = jet(smp[i]);
      const double h = smp[i].s - smp[i - 1].s;
      integral += 0.5 * h * (prev.g + cur.g) + h * h / 10.0 * (prev.dg - cur.dg) +
                  h * h * h / 120.0 * (prev.ddg + cur.ddg);
      prev = cur;
    }
    const auto& q = smp[i];
    worst = std::max(worst, std::abs(q.r * (std::sin(q.phi) + c * q.r) + 2.0 * integral));
  }
  return worst;
}

ProfileCurve apply_scaling(const ProfileCurve& curve, double lambda) {
  if (lambda == 0 || !std::isfinite(lambda)) throw std::invalid_argument("apply_scaling: lambda must be nonzero");
  const double a = std::abs(lambda);
  const double sg = lambda > 0 ? 1.0 : -1.0;
  ProfileCurve out = curve;
  out.params = {curve.params.c_o / lambda, lambda * curve.params.z_0};
  out.h0 = a * curve.h0;
  out.z_stop = a * curve.z_stop;
  out.stop_height = a * curve.stop_height;
  for (auto& q : out.samples) {
    q.s *= a;
    q.r *= a;
    q.z *= lambda;
    q.phi *= sg;
    q.dphi /= lambda;
  }
  return out;
}

}  // namespace helfrich
