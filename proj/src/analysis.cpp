#include "helfrich/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "helfrich/errors.hpp"

namespace helfrich {

std::string to_string(CurveClass c) {
  switch (c) {
    case CurveClass::UnduloidType:
      return "UnduloidType";
    case CurveClass::OvaloidType:
      return "OvaloidType";
    case CurveClass::NodoidType:
      return "NodoidType";
    case CurveClass::HorizontalLine:
      return "HorizontalLine";
    case CurveClass::Circle:
      return "Circle";
  }
  return "Circle";
}

CurveClass classify(const ShootingParams& p) {
  if (p.z_0 == 0) throw std::invalid_argument("classify: z_0 must be nonzero");
  double c = p.c_o, z = p.z_0;
  if (c < 0) {
    c = -c;
    z = -z;
  }
  if (c == 0) return CurveClass::Circle;
  if (z > 0) return CurveClass::UnduloidType;
  const double line = -1.0 / c;
  if (z == line) return CurveClass::HorizontalLine;
  return z > line ? CurveClass::OvaloidType : CurveClass::NodoidType;
}

double endpoint_dphi_identity(double c_o, double phi_end, double r_star) {
  return 2.0 * c_o + std::sin(phi_end) / r_star;
}

namespace {

struct EquatorGuess {
  double ell;
  double r_star;
};

// The last sample sits at height |z| = O(z_stop) with |phi| close to pi/2; to
// leading order the remaining arc is |z| long and r' = cos(phi) decays
// linearly to zero over it.
EquatorGuess guess_equator(const ProfileSample& q) {
  const double t = std::abs(q.z) / std::max(std::abs(std::sin(q.phi)), 0.5);
  return {q.s + t, q.r + 0.5 * std::cos(q.phi) * t};
}

// Least-squares polynomial coefficients in x = tau / w for the given powers.
Eigen::VectorXd poly_fit(const std::vector<double>& tau, const std::vector<double>& y,
                         const std::vector<int>& powers, double w) {
  Eigen::MatrixXd a(static_cast<Eigen::Index>(tau.size()), static_cast<Eigen::Index>(powers.size()));
  Eigen::VectorXd b(static_cast<Eigen::Index>(tau.size()));
  for (std::size_t i = 0; i < tau.size(); ++i) {
    const double x = tau[i] / w;
    for (std::size_t j = 0; j < powers.size(); ++j)
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::pow(x, powers[j]);
    b(static_cast<Eigen::Index>(i)) = y[i];
  }
  return a.colPivHouseholderQr().solve(b);
}

}  // namespace

EndpointData endpoint_extrapolate(const ProfileCurve& curve, const SolverConfig& config) {
  if (curve.termination != Termination::EquatorReached || curve.samples.size() < 2)
    throw std::invalid_argument("endpoint_extrapolate: curve did not reach the equator");
  const ShootingParams& p = curve.params;
  const double c = p.c_o;
  const double phi_e = equator_angle(p);

  const EquatorGuess g0 = guess_equator(curve.samples.back());
  const double w = 0.05 * std::min({g0.r_star, g0.ell, std::abs(p.z_0)});

  std::size_t first = 0;
  for (std::size_t i = curve.samples.size(); i-- > 0;) {
    if (g0.ell - curve.samples[i].s >= 3.0 * w) {
      first = i;
      break;
    }
  }

  SolverConfig tail_cfg = config;
  tail_cfg.max_step = w / 32.0;
  tail_cfg.output_step = 0.0;
  // the tail decides phi''(ell); local errors committed at distance t from the
  // equator move it by about err / t^2, so the tail runs at tighter tolerances
  tail_cfg.rel_tol = std::min(config.rel_tol, 1e-13);
  tail_cfg.abs_tol = std::min(config.abs_tol, 1e-13);

  const auto& q0 = curve.samples[first];
  ProfileState state{q0.s, q0.r, q0.z, q0.phi};
  std::vector<ProfileSample> tail;
  const double z_stop = curve.z_stop > 0 ? curve.z_stop : config.z_stop_for(p);
  const int levels = std::max(1, config.richardson_levels);

  EndpointData out;
  out.phi_end = phi_e;
  EquatorGuess eq{};
  for (int k = 0; k <= levels; ++k) {
    const auto seg = continue_profile(p, state, z_stop / std::ldexp(1.0, k), tail_cfg);
    if (seg.termination != Termination::EquatorReached)
      throw ExtrapolationDiverged("endpoint_extrapolate: tail re-integration lost the equator");
    tail.insert(tail.end(), seg.samples.begin() + (tail.empty() ? 0 : 1), seg.samples.end());
    const auto& last = tail.back();
    state = {last.s, last.r, last.z, last.phi};
    eq = guess_equator(last);

    // phi - phi_e - phi'_id tau = sum_{j=2..5} a_j tau^j on [ell - w, ell]
    const double slope = endpoint_dphi_identity(c, phi_e, eq.r_star);
    std::vector<double> tau, y;
    for (const auto& q : tail) {
      const double t = q.s - eq.ell;
      if (t < 0 && t >= -w) {
        tau.push_back(t);
        y.push_back(q.phi - phi_e - slope * t);
      }
    }
    if (tau.size() < 8) throw ExtrapolationDiverged("endpoint_extrapolate: too few samples near the equator");
    const auto coef = poly_fit(tau, y, {2, 3, 4, 5}, w);
    out.level_ddphi.push_back(2.0 * coef(0) / (w * w));
  }

  // independent estimate from phi' = sum_{j=0..4} b_j tau^j, away from the
  // last few samples where phi' loses digits to the cos(phi)/z cancellation
  {
    std::vector<double> tau, y;
    for (const auto& q : tail) {
      const double t = q.s - eq.ell;
      if (t <= -w / 50.0 && t >= -w) {
        tau.push_back(t);
        y.push_back(q.dphi);
      }
    }
    if (tau.size() < 8) throw ExtrapolationDiverged("endpoint_extrapolate: too few samples near the equator");
    const auto coef = poly_fit(tau, y, {0, 1, 2, 3, 4}, w);
    out.dphi = coef(0);
    out.ddphi_alt = coef(1) / w;
  }

  out.ell = eq.ell;
  out.r_star = eq.r_star;
  out.ddphi = out.level_ddphi.back();

  const double scale = std::abs(out.ddphi);
  const double floor = 1e-12 / (w * w) + 1e-10 * scale;
  std::vector<double> change;
  for (std::size_t k = 1; k < out.level_ddphi.size(); ++k)
    change.push_back(std::abs(out.level_ddphi[k] - out.level_ddphi[k - 1]));
  for (std::size_t k = 1; k < change.size(); ++k) {
    if (change[k] > std::max(0.5 * change[k - 1], floor))
      throw ExtrapolationDiverged("endpoint_extrapolate: stop-threshold levels do not contract");
  }
  out.fit_uncertainty = std::max(change.empty() ? 0.0 : change.back(), std::abs(out.ddphi - out.ddphi_alt));
  return out;
}

CurvatureSample curvature_at(const ProfileSample& q) {
  const double sp = std::sin(q.phi);
  return {q.s, 0.5 * (sp / q.r + q.dphi), q.dphi * sp / q.r, std::cos(q.phi)};
}

std::vector<CurvatureSample> curvature_fields(const ProfileCurve& curve) {
  std::vector<CurvatureSample> out;
  out.reserve(curve.samples.size());
  for (const auto& q : curve.samples) out.push_back(curvature_at(q));
  return out;
}

double rme_residual(const ProfileCurve& curve) {
  double worst = 0;
  for (const auto& q : curve.samples) {
    if (q.z == 0) continue;
    const auto k = curvature_at(q);
    worst = std::max(worst, std::abs(k.H + curve.params.c_o + k.nu3 / q.z));
  }
  return worst;
}

ProfileCurve uniform_profile(const ShootingParams& p, const SolverConfig& config, double ds,
                             double grid_tol) {
  if (!(ds > 0)) throw std::invalid_argument("uniform_profile: ds must be positive");
  SolverConfig cfg = config;
  cfg.output_step = ds;
  cfg.rel_tol = std::min(cfg.rel_tol, grid_tol);
  cfg.abs_tol = std::min(cfg.abs_tol, grid_tol);
  return integrate_profile(p, cfg);
}

double el_residual(const ProfileCurve& curve, const ElOptions& options) {
  if (options.stencil_order != 2 && options.stencil_order != 4)
    throw std::invalid_argument("el_residual: stencil order must be 2 or 4");
  const auto& smp = curve.samples;
  if (smp.size() < 3) return 0.0;
  const double ds = smp[1].s - smp[0].s;
  std::size_t n = 2;
  while (n < smp.size() && std::abs((smp[n].s - smp[n - 1].s) - ds) <= 1e-9 * ds) ++n;

  const double c = curve.params.c_o;
  const double axis_cut = options.axis_exclusion >= 0 ? options.axis_exclusion : 5.0 * curve.h0;
  const double eq_cut = options.equator_exclusion >= 0 ? options.equator_exclusion : 10.0 * curve.z_stop;
  const std::size_t half = options.stencil_order == 2 ? 1 : 2;

  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i) h[i] = curvature_at(smp[i]).H;

  double worst = 0;
  for (std::size_t i = half; i + half < n; ++i) {
    const auto& q = smp[i];
    if (q.s < axis_cut || std::abs(q.z) < eq_cut || q.r < options.r_min) continue;
    double d1, d2;
    if (half == 1) {
      d1 = (h[i + 1] - h[i - 1]) / (2.0 * ds);
      d2 = (h[i + 1] - 2.0 * h[i] + h[i - 1]) / (ds * ds);
    } else {
      d1 = (-h[i + 2] + 8.0 * h[i + 1] - 8.0 * h[i - 1] + h[i - 2]) / (12.0 * ds);
      d2 = (-h[i + 2] + 16.0 * h[i + 1] - 30.0 * h[i] + 16.0 * h[i - 1] - h[i - 2]) / (12.0 * ds * ds);
    }
    const auto k = curvature_at(q);
    const double lap = d2 + std::cos(q.phi) / q.r * d1;
    worst = std::max(worst, std::abs(lap + 2.0 * (k.H + c) * (k.H * (k.H - c) - k.K)));
  }
  return worst;
}

}  // namespace helfrich
