#ifndef HELFRICH_DISCOID_HPP
#define HELFRICH_DISCOID_HPP

// Circular biconcave discoids: sin(phi) = f(r) = -2 c_o r log r + A r.
// Differentiating gives phi' = f'(r) = -2 c_o log r - 2 c_o + A and
// H + c_o = -2 c_o log r + A. These solve the Euler-Lagrange equation for
// r > 0 but are only C^1 at the poles.

#include <optional>
#include <string>
#include <vector>

#include "helfrich/profile_ode.hpp"

namespace helfrich {

struct DiscoidSpec {
  double c_o = 1.0;
  double A = 0.0;
};

double discoid_sin_phi(double r, const DiscoidSpec& spec);
double discoid_dphi(double r, const DiscoidSpec& spec);

// Integrates r' = cos(phi), z' = sin(phi) from the pole with phi taken
// pointwise from f(r). The profile runs to the equator, where |f| = 1 and the
// tangent is vertical; the surface is the mirror double across that parallel,
// and z is shifted so the equator sits at z = 0. The last sliver before
// |f| = 1 (where r' -> 0) is closed with the osculating circle.
//
// With r_max set, the run stops at r = r_max instead and throws
// DomainExceeded if |f| reaches 1 first.
ProfileCurve discoid_profile(const DiscoidSpec& spec, const SolverConfig& config,
                             std::optional<double> r_max = std::nullopt);

// -2 c_o log r + A - c_o; rejects r <= 0.
double discoid_H(double r, const DiscoidSpec& spec);

// Euler-Lagrange residual by fourth-order differences on the uniform part of
// the curve, over samples with r >= r_min.
double discoid_el_residual(const ProfileCurve& curve, double r_min, int stencil_order = 4);

struct FluxEstimate {
  std::vector<double> epsilons;
  std::vector<double> flux_values;       // 2 pi eps dH/dn on the circle r = eps
  std::vector<double> gradient_values;   // 2 pi eps (H + c_o) cos(phi): coefficient of grad psi, -> 0
  std::vector<double> psi_term_values;   // (H + c_o) d psi/dn with psi = 1: exactly 0
  double extrapolated_limit = 0;
  double target = 0;        // -4 pi c_o per pole
  double dirac_total = 0;   // both poles: -2 * limit, expected 8 pi c_o
};

// First-variation boundary terms on shrinking circles around the pole with
// psi = 1 near the pole. The limit is extrapolated by least squares on
// L + a eps^2 log^2 eps + b eps^2 and needs at least four radii.
FluxEstimate boundary_flux(const ProfileCurve& curve, const DiscoidSpec& spec,
                           const std::vector<double>& epsilons);

std::string discoid_verdict(const DiscoidSpec& spec, const FluxEstimate& flux);

}  // namespace helfrich

#endif
