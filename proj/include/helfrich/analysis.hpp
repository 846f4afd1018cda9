#ifndef HELFRICH_ANALYSIS_HPP
#define HELFRICH_ANALYSIS_HPP

// Classification, equator extrapolation and curvature diagnostics.
//
// Orientation convention (used everywhere in the library): the unit normal of
// the surface generated by (r(s), z(s)) is nu = (-sin(phi) e_r, cos(phi)), so
// nu_3 = cos(phi) and the mean curvature H = sin(phi)/(2r) + phi'/2 satisfies
// H + c_o = -nu_3 / z along integrated caps. At the pole H + c_o = -1/z_0.

#include <string>
#include <vector>

#include "helfrich/profile_ode.hpp"

namespace helfrich {

enum class CurveClass { UnduloidType, OvaloidType, NodoidType, HorizontalLine, Circle };

std::string to_string(CurveClass c);

// Negative c_o is reduced through the l = -1 scaling: classify(c, z) ==
// classify(-c, -z).
CurveClass classify(const ShootingParams& p);

struct EndpointData {
  double ell = 0;              // arc length to the equator
  double r_star = 0;           // equator radius
  double phi_end = 0;          // +-pi/2, imposed
  double dphi = 0;             // phi'(ell), reproduced by the fit
  double ddphi = 0;            // phi''(ell), solver-derived
  double ddphi_alt = 0;        // independent estimate from the phi' data
  double fit_uncertainty = 0;  // max(level-to-level change, estimate disagreement)
  std::vector<double> level_ddphi;  // one estimate per stop threshold
};

// Limit identity phi'(ell) = 2 c_o + sin(phi_end) / r_star; for caps that
// reach the equator going down (phi_end = -pi/2) this is 2 c_o - 1 / r_star.
double endpoint_dphi_identity(double c_o, double phi_end, double r_star);

// Re-integrates the last stretch of the curve toward z = 0 with stop heights
// z_stop / 2^k, k = 0..richardson_levels, and fits phi near the equator.
// Throws std::invalid_argument unless the curve reached the equator and
// ExtrapolationDiverged when the level estimates do not settle.
EndpointData endpoint_extrapolate(const ProfileCurve& curve, const SolverConfig& config);

struct CurvatureSample {
  double s = 0;
  double H = 0;
  double K = 0;
  double nu3 = 0;
};

CurvatureSample curvature_at(const ProfileSample& q);
std::vector<CurvatureSample> curvature_fields(const ProfileCurve& curve);

// max |H + c_o + cos(phi)/z| over samples with z != 0
double rme_residual(const ProfileCurve& curve);

// Same trajectory re-integrated so that the samples fall on s = h0 + k ds
// (plus the final stop point). Differencing divides integration error by ds^2
// and the equator adds another 1/|z|, so the grid run uses tolerances of at
// most grid_tol.
ProfileCurve uniform_profile(const ShootingParams& p, const SolverConfig& config, double ds,
                             double grid_tol = 1e-15);

struct ElOptions {
  int stencil_order = 2;     // 2 or 4
  double axis_exclusion = -1;     // exclude s below this; < 0: 5 h0
  double equator_exclusion = -1;  // exclude |z| below this; < 0: 10 z_stop
  double r_min = 0;               // exclude r below this
};

// max |Delta H + 2 (H + c_o)(H (H - c_o) - K)| with Delta H = H'' + cos(phi)/r H'
// by centered differences. Only the leading run of equally spaced samples is
// used, so the curve must come from uniform_profile or an equivalent grid.
double el_residual(const ProfileCurve& uniform_curve, const ElOptions& options = {});

}  // namespace helfrich

#endif
