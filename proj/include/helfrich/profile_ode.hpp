#ifndef HELFRICH_PROFILE_ODE_HPP
#define HELFRICH_PROFILE_ODE_HPP

// Generating-curve system of an axially symmetric surface satisfying the
// reduced membrane equation H + c_o = -nu_3 / z, in arc length s from the
// axis point (0, z_0):
//
//   r'   = cos(phi)
//   z'   = sin(phi)
//   phi' = -2 cos(phi) / z - sin(phi) / r - 2 c_o
//
// with r(0) = 0, z(0) = z_0, phi(0) = 0. The system is singular at r = 0
// (handled by a series start) and at z = 0 (integration stops at |z| = z_stop;
// the equator itself is reached by extrapolation in analysis.hpp).

#include <optional>
#include <string>
#include <vector>

namespace helfrich {

struct ShootingParams {
  double c_o = 0.0;  // spontaneous curvature, 1/length
  double z_0 = 1.0;  // initial height on the axis, nonzero
};

struct ProfileState {
  double s = 0;
  double r = 0;
  double z = 0;
  double phi = 0;
};

// A stored trajectory point. dphi is phi'(s) of the trajectory itself: the
// right-hand side of the system for integrated caps, the closed-form
// derivative for discoids.
struct ProfileSample {
  double s = 0;
  double r = 0;
  double z = 0;
  double phi = 0;
  double dphi = 0;
};

enum class Termination { EquatorReached, MaxArcLength, StepFailure };

std::string to_string(Termination t);

struct SolverConfig {
  std::optional<double> h0;      // default 1e-6 * max(1, |z_0|)
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  std::optional<double> z_stop;  // default 1e-4 * |z_0|
  std::optional<double> s_max;   // default 50 / max(c_o, 1)
  int richardson_levels = 3;     // stop-threshold refinements z_stop / 2^k
  double equator_window = 0.05;  // allowed |phi -+ pi/2| when the stop height is hit
  double max_step = 0.0;         // 0: unbounded
  double output_step = 0.0;      // > 0: emit a uniform grid s = h0 + k * output_step

  double h0_for(const ShootingParams& p) const;
  double z_stop_for(const ShootingParams& p) const;
  double s_max_for(const ShootingParams& p) const;
  // Throws std::invalid_argument when a resolved value violates the config
  // invariants (positivity, z_stop < |z_0|, h0 much smaller than |z_0|).
  void validate(const ShootingParams& p) const;
};

struct ProfileCurve {
  ShootingParams params;
  std::vector<ProfileSample> samples;
  Termination termination = Termination::StepFailure;
  double stop_height = 0;  // smallest |z| reached
  double h0 = 0;
  double z_stop = 0;
};

struct Rates {
  double dr = 0;
  double dz = 0;
  double dphi = 0;
};

// Right-hand side of the system. Throws DomainError at r <= 0 or z == 0.
Rates rhs(const ProfileState& state, double c_o);

// phi'(0) = -1/z_0 - c_o, the axis limit of the phi equation.
double initial_curvature(const ShootingParams& p);

// Taylor start at s = h0 from phi(0)=0, phi'(0) = -1/z_0 - c_o, phi''(0)=0:
//   r = h0 - phi'(0)^2 h0^3 / 6     (error O(h0^5))
//   z = z_0 + phi'(0) h0^2 / 2      (error O(h0^4))
//   phi = phi'(0) h0                (error O(h0^3))
ProfileState series_start(const ShootingParams& p, double h0);

// Tangent angle at the equator: -pi/2 for caps above z = 0, +pi/2 below.
double equator_angle(const ShootingParams& p);

// Adaptive integration from the series start. Never throws for numerical
// trouble: a failing step controller is recorded as StepFailure.
ProfileCurve integrate_profile(const ShootingParams& p, const SolverConfig& config);

// Continues a trajectory from an arbitrary interior state toward the equator
// with the given stop height; used to refine the tail near z = 0.
ProfileCurve continue_profile(const ShootingParams& p, const ProfileState& from,
                              double stop_height, const SolverConfig& config);

// max over samples of |r (sin phi + c_o r) + 2 int_0^s r cos^2 phi / z dt|
double conserved_residual(const ProfileCurve& curve);

// r~(s) = |l| r(s/|l|), z~(s) = l z(s/|l|), phi~ = sign(l) phi, params
// (c_o / l, l z_0). For l > 0 this is the dilation; for l < 0 it is the
// dilation composed with the reflection across the axis, which keeps r >= 0.
ProfileCurve apply_scaling(const ProfileCurve& curve, double lambda);

}  // namespace helfrich

#endif
