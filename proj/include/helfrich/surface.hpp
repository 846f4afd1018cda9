#ifndef HELFRICH_SURFACE_HPP
#define HELFRICH_SURFACE_HPP

// Closed genus-zero surfaces of revolution glued from two caps along z = 0.
// The bottom cap is kept in its own frame (z > 0) and reflected on use:
// under the reflection z and nu_3 change sign while H and K do not.

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "helfrich/analysis.hpp"
#include "helfrich/profile_ode.hpp"

namespace helfrich {

struct Cap {
  ProfileCurve curve;    // adaptive samples
  ProfileCurve grid;     // uniform samples, for differencing and quadrature
  EndpointData endpoint;
};

// Throws std::runtime_error when the cap does not reach the equator.
Cap make_cap(const ShootingParams& p, const SolverConfig& config, double ds = 1e-3);

struct ClosedSurface {
  Cap top;
  Cap bottom;
  double r_star = 0;
  bool symmetric = false;
};

// Both caps must reach the equator with phi -> -pi/2 (the bottom one is then
// reflected). Throws RadiusMismatch if the equator radii differ by more than
// tol (default 1e-6 r_star).
ClosedSurface glue(const Cap& top, const Cap& bottom, std::optional<double> tol = std::nullopt);

struct RegularityReport {
  double c1_gap = 0;     // |r*_top - r*_bottom|
  double c2_gap = 0;     // |phi'_top(ell) - phi'_bottom(ell)|
  double dH_top = 0;     // conormal derivative of H at the equator, phi''/2
  double dH_bottom = 0;
  double c3_gap = 0;     // |dH_top + dH_bottom|
  double fit_uncertainty = 0;

  bool critical(double tol) const { return c3_gap <= tol; }
};

RegularityReport regularity_report(const ClosedSurface& surface);

// Field value at a point of the closed surface, in the surface frame.
struct FieldPoint {
  double s = 0;
  double r = 0;
  double z = 0;
  double phi = 0;
  double H = 0;
  double K = 0;
  double nu3 = 0;
};

using SurfaceField = std::function<double(const FieldPoint&)>;

struct SurfaceIntegral {
  double value = 0;
  double top = 0;
  double bottom = 0;
  double error = 0;  // |I(ds) - I(2 ds)| / 15 summed over caps
};

// 2 pi int f r ds over one cap: Simpson on the uniform grid, the analytic
// pole limit on [0, h0] and the equator limits on the last stretch.
SurfaceIntegral cap_integral(const Cap& cap, const SurfaceField& f, bool reflected);
SurfaceIntegral surface_integral(const ClosedSurface& surface, const SurfaceField& f);

// int (H + c_o)^2
SurfaceIntegral helfrich_energy(const ClosedSurface& surface, double c_o);
// int (H + c_o), with per-cap parts
SurfaceIntegral rescaling_integral(const ClosedSurface& surface, double c_o);
SurfaceIntegral area(const ClosedSurface& surface);

struct TriMesh {
  std::vector<std::array<double, 3>> vertices;
  std::vector<std::array<double, 3>> normals;
  std::vector<std::array<int, 3>> faces;
  std::vector<double> H;
  std::vector<double> K;
  std::vector<double> nu3;
};

// Rings equally spaced in arc length on each cap, n_theta vertices per ring,
// triangle fans at both poles. Throws std::invalid_argument for n_theta < 8.
TriMesh revolve_mesh(const ClosedSurface& surface, int n_theta);

// Mirror double of a pole-to-equator profile ending at z = 0 (discoids).
TriMesh revolve_profile(const ProfileCurve& half, int n_theta);

long euler_characteristic(const TriMesh& mesh);
double mesh_area(const TriMesh& mesh);
double mesh_volume(const TriMesh& mesh);
// sum over faces of area times the vertex average of f(H, K)
double mesh_integral(const TriMesh& mesh, const std::function<double(double H, double K)>& f);

}  // namespace helfrich

#endif
