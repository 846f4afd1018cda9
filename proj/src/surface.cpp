#include "helfrich/surface.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <utility>

#include "helfrich/errors.hpp"

namespace helfrich {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// integral over [lo, hi] of the quadratic through (xa, fa), (xb, fb), (xc, fc)
double quadratic_integral(double xa, double xb, double xc, double fa, double fb, double fc, double lo, double hi) {
  // shift to xb for conditioning
  const double a = xa - xb, c = xc - xb, u = lo - xb, v = hi - xb;
  auto prim = [](double p, double q, double t) { return t * t * t / 3.0 - 0.5 * (p + q) * t * t + p * q * t; };
  auto basis = [&](double p, double q, double denom) { return (prim(p, q, v) - prim(p, q, u)) / denom; };
  return fa * basis(0.0, c, a * (a - c)) + fb * basis(a, c, a * c) + fc * basis(a, 0.0, c * (c - a));
}

// composite rule on arbitrary nodes: Simpson on consecutive pairs of
// intervals, the last single interval (if any) from the quadratic through the
// last three nodes
double piecewise_quadratic(const std::vector<double>& x, const std::vector<double>& f) {
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * (x[1] - x[0]) * (f[0] + f[1]);
  double sum = 0.0;
  std::size_t i = 0;
  for (; i + 2 < n; i += 2) sum += quadratic_integral(x[i], x[i + 1], x[i + 2], f[i], f[i + 1], f[i + 2], x[i], x[i + 2]);
  if (i + 1 < n)
    sum += quadratic_integral(x[n - 3], x[n - 2], x[n - 1], f[n - 3], f[n - 2], f[n - 1], x[n - 2], x[n - 1]);
  return sum;
}

FieldPoint field_point(const ProfileSample& q, bool reflected) {
  const auto k = curvature_at(q);
  FieldPoint pt{q.s, q.r, q.z, q.phi, k.H, k.K, k.nu3};
  if (reflected) {
    pt.z = -pt.z;
    pt.nu3 = -pt.nu3;
  }
  return pt;
}

FieldPoint equator_point(const Cap& cap, bool reflected) {
  const auto& e = cap.endpoint;
  const double sp = std::sin(e.phi_end);
  FieldPoint pt{e.ell, e.r_star, 0.0, e.phi_end, 0.5 * (sp / e.r_star + e.dphi), e.dphi * sp / e.r_star, 0.0};
  (void)reflected;  // z = nu_3 = 0 on the equator either way
  return pt;
}

double cap_rule(const Cap& cap, const SurfaceField& f, bool reflected, std::size_t stride) {
  const auto& smp = cap.grid.samples;
  const std::size_t last = smp.size() - 1;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < last; i += stride) idx.push_back(i);
  const double ds = stride * (smp.size() > 2 ? smp[1].s - smp[0].s : 0.0);
  // the stop point is off the grid; a sliver next to it would make the last
  // quadratic ill-conditioned, so its neighbour is dropped instead
  if (idx.size() > 2 && smp[last].s - smp[idx.back()].s < 0.5 * ds) idx.pop_back();
  idx.push_back(last);

  std::vector<double> x, y;
  for (const auto i : idx) {
    x.push_back(smp[i].s);
    y.push_back(kTwoPi * f(field_point(smp[i], reflected)) * smp[i].r);
  }
  // [0, h0]: the integrand grows linearly from the pole
  double sum = 0.5 * y.front() * x.front();
  sum += piecewise_quadratic(x, y);
  const auto eq = equator_point(cap, reflected);
  const double tail = std::max(0.0, cap.endpoint.ell - x.back());
  sum += 0.5 * tail * (y.back() + kTwoPi * f(eq) * eq.r);
  return sum;
}

struct Node {
  double r, z, nr, nz, H, K, nu3;
};

Node make_node(double r, double z, double phi, double H, double K, bool reflected) {
  Node n{r, z, -std::sin(phi), std::cos(phi), H, K, std::cos(phi)};
  if (reflected) {
    n.z = -n.z;
    n.nz = -n.nz;
    n.nu3 = -n.nu3;
  }
  return n;
}

// Nodes equally spaced in arc length from the pole (s = 0) to s_end.
// Beyond the last sample the profile is interpolated toward `end`.
std::vector<Node> sample_nodes(const std::vector<ProfileSample>& smp, const ProfileSample& end, int n_rings,
                               double pole_dphi, bool reflected) {
  std::vector<ProfileSample> pts;
  pts.push_back({0.0, 0.0, smp.front().z, 0.0, pole_dphi});
  pts.insert(pts.end(), smp.begin(), smp.end());
  if (end.s > pts.back().s) pts.push_back(end);
  const double len = pts.back().s;

  std::vector<Node> nodes;
  std::size_t j = 0;
  for (int k = 0; k <= n_rings; ++k) {
    ProfileSample q;
    if (k == 0) {
      q = pts.front();
    } else if (k == n_rings) {
      q = pts.back();
    } else {
      const double s = len * k / n_rings;
      while (j + 2 < pts.size() && pts[j + 1].s < s) ++j;
      const auto& a = pts[j];
      const auto& b = pts[j + 1];
      const double t = (s - a.s) / (b.s - a.s);
      q = {s, a.r + t * (b.r - a.r), a.z + t * (b.z - a.z), a.phi + t * (b.phi - a.phi),
           a.dphi + t * (b.dphi - a.dphi)};
    }
    double H, K;
    if (q.r == 0) {
      H = q.dphi;
      K = q.dphi * q.dphi;
    } else {
      const auto c = curvature_at(q);
      H = c.H;
      K = c.K;
    }
    nodes.push_back(make_node(q.r, q.z, q.phi, H, K, reflected));
  }
  return nodes;
}

int ring_count(const std::vector<ProfileSample>& smp, double len, int n_theta) {
  double r_ref = 0;
  for (const auto& q : smp) r_ref = std::max(r_ref, q.r);
  const double spacing = kTwoPi * r_ref / n_theta;
  const double n = std::ceil(len / spacing);
  return static_cast<int>(std::clamp(n, 4.0, 4000.0));
}

// top: pole to equator; bottom: pole to equator, both in the surface frame,
// sharing the equator ring
TriMesh build_mesh(const std::vector<Node>& top, const std::vector<Node>& bottom, int n_theta) {
  TriMesh m;
  std::vector<Node> rings(top.begin(), top.end());
  for (std::size_t k = bottom.size() - 1; k-- > 0;) rings.push_back(bottom[k]);

  auto add_vertex = [&](const Node& n, double th) {
    const double c = std::cos(th), s = std::sin(th);
    m.vertices.push_back({n.r * c, n.r * s, n.z});
    m.normals.push_back({n.nr * c, n.nr * s, n.nz});
    m.H.push_back(n.H);
    m.K.push_back(n.K);
    m.nu3.push_back(n.nu3);
  };
  std::vector<int> ring_start(rings.size());
  for (std::size_t k = 0; k < rings.size(); ++k) {
    ring_start[k] = static_cast<int>(m.vertices.size());
    const bool pole = (k == 0 || k + 1 == rings.size());
    if (pole) {
      Node n = rings[k];
      n.r = 0.0;
      n.nr = 0.0;
      add_vertex(n, 0.0);
    } else {
      for (int j = 0; j < n_theta; ++j) add_vertex(rings[k], kTwoPi * j / n_theta);
    }
  }
  const std::size_t last = rings.size() - 1;
  for (std::size_t k = 0; k < last; ++k) {
    for (int j = 0; j < n_theta; ++j) {
      const int jn = (j + 1) % n_theta;
      if (k == 0) {
        const int b = ring_start[1];
        m.faces.push_back({ring_start[0], b + j, b + jn});
      } else if (k + 1 == last) {
        const int a = ring_start[k];
        m.faces.push_back({a + j, ring_start[last], a + jn});
      } else {
        const int a = ring_start[k], b = ring_start[k + 1];
        m.faces.push_back({a + j, b + j, b + jn});
        m.faces.push_back({a + j, b + jn, a + jn});
      }
    }
  }
  if (mesh_volume(m) < 0)
    for (auto& f : m.faces) std::swap(f[1], f[2]);
  return m;
}

}  // namespace

Cap make_cap(const ShootingParams& p, const SolverConfig& config, double ds) {
  Cap cap;
  cap.curve = integrate_profile(p, config);
  if (cap.curve.termination != Termination::EquatorReached)
    throw std::runtime_error("make_cap: trajectory ended with " + to_string(cap.curve.termination));
  cap.endpoint = endpoint_extrapolate(cap.curve, config);
  cap.grid = uniform_profile(p, config, ds);
  if (cap.grid.termination != Termination::EquatorReached)
    throw std::runtime_error("make_cap: grid trajectory ended with " + to_string(cap.grid.termination));
  return cap;
}

ClosedSurface glue(const Cap& top, const Cap& bottom, std::optional<double> tol) {
  for (const Cap* c : {&top, &bottom}) {
    if (c->curve.termination != Termination::EquatorReached)
      throw std::invalid_argument("glue: cap did not reach the equator");
    if (c->endpoint.phi_end > 0)
      throw std::invalid_argument("glue: caps must reach the equator going down (z_0 > 0)");
  }
  const double r = 0.5 * (top.endpoint.r_star + bottom.endpoint.r_star);
  const double t = tol.value_or(1e-6 * r);
  if (std::abs(top.endpoint.r_star - bottom.endpoint.r_star) > t)
    throw RadiusMismatch("glue: equator radii differ by " +
                         std::to_string(std::abs(top.endpoint.r_star - bottom.endpoint.r_star)));
  ClosedSurface s;
  s.top = top;
  s.bottom = bottom;
  s.r_star = r;
  s.symmetric = top.curve.params.c_o == bottom.curve.params.c_o && top.curve.params.z_0 == bottom.curve.params.z_0;
  return s;
}

RegularityReport regularity_report(const ClosedSurface& surface) {
  const auto& a = surface.top.endpoint;
  const auto& b = surface.bottom.endpoint;
  RegularityReport rep;
  rep.c1_gap = std::abs(a.r_star - b.r_star);
  rep.c2_gap = std::abs(a.dphi - b.dphi);
  // each cap's conormal points away from its own pole, so in its own frame
  // dH/dn = H'(ell) = phi''(ell) / 2
  rep.dH_top = 0.5 * a.ddphi;
  rep.dH_bottom = 0.5 * b.ddphi;
  rep.c3_gap = std::abs(rep.dH_top + rep.dH_bottom);
  rep.fit_uncertainty = std::max(a.fit_uncertainty, b.fit_uncertainty);
  return rep;
}

SurfaceIntegral cap_integral(const Cap& cap, const SurfaceField& f, bool reflected) {
  if (cap.grid.samples.size() < 3) throw std::invalid_argument("cap_integral: grid too short");
  const double fine = cap_rule(cap, f, reflected, 1);
  const double coarse = cap_rule(cap, f, reflected, 2);
  SurfaceIntegral out;
  out.value = fine;
  (reflected ? out.bottom : out.top) = fine;
  out.error = std::abs(fine - coarse) / 15.0;
  return out;
}

SurfaceIntegral surface_integral(const ClosedSurface& surface, const SurfaceField& f) {
  const auto a = cap_integral(surface.top, f, false);
  const auto b = cap_integral(surface.bottom, f, true);
  return {a.value + b.value, a.value, b.value, a.error + b.error};
}

SurfaceIntegral helfrich_energy(const ClosedSurface& surface, double c_o) {
  return surface_integral(surface, [c_o](const FieldPoint& p) { return (p.H + c_o) * (p.H + c_o); });
}

SurfaceIntegral rescaling_integral(const ClosedSurface& surface, double c_o) {
  return surface_integral(surface, [c_o](const FieldPoint& p) { return p.H + c_o; });
}

SurfaceIntegral area(const ClosedSurface& surface) {
  return surface_integral(surface, [](const FieldPoint&) { return 1.0; });
}

TriMesh revolve_mesh(const ClosedSurface& surface, int n_theta) {
  if (n_theta < 8) throw std::invalid_argument("revolve_mesh: n_theta must be >= 8");
  auto nodes = [&](const Cap& cap, bool reflected) {
    const auto& e = cap.endpoint;
    const ProfileSample end{e.ell, e.r_star, 0.0, e.phi_end, e.dphi};
    const int n = ring_count(cap.grid.samples, e.ell, n_theta);
    return sample_nodes(cap.grid.samples, end, n, initial_curvature(cap.curve.params), reflected);
  };
  return build_mesh(nodes(surface.top, false), nodes(surface.bottom, true), n_theta);
}

TriMesh revolve_profile(const ProfileCurve& half, int n_theta) {
  if (n_theta < 8) throw std::invalid_argument("revolve_profile: n_theta must be >= 8");
  if (half.samples.size() < 2) throw std::invalid_argument("revolve_profile: profile too short");
  const auto& smp = half.samples;
  const int n = ring_count(smp, smp.back().s, n_theta);
  auto top = sample_nodes(smp, smp.back(), n, smp.front().dphi, false);
  auto bottom = sample_nodes(smp, smp.back(), n, smp.front().dphi, true);
  // outward orientation: the radial normal component must be positive on the
  // equator
  if (top.back().nr < 0) {
    for (auto* side : {&top, &bottom})
      for (auto& nd : *side) {
        nd.nr = -nd.nr;
        nd.nz = -nd.nz;
        nd.nu3 = -nd.nu3;
        nd.H = -nd.H;
      }
  }
  return build_mesh(top, bottom, n_theta);
}

long euler_characteristic(const TriMesh& mesh) {
  std::set<std::pair<int, int>> edges;
  for (const auto& f : mesh.faces)
    for (int i = 0; i < 3; ++i) {
      const int a = f[static_cast<std::size_t>(i)], b = f[static_cast<std::size_t>((i + 1) % 3)];
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  return static_cast<long>(mesh.vertices.size()) - static_cast<long>(edges.size()) +
         static_cast<long>(mesh.faces.size());
}

namespace {

double tri_area(const TriMesh& m, const std::array<int, 3>& f) {
  const auto& a = m.vertices[static_cast<std::size_t>(f[0])];
  const auto& b = m.vertices[static_cast<std::size_t>(f[1])];
  const auto& c = m.vertices[static_cast<std::size_t>(f[2])];
  const double ux = b[0] - a[0], uy = b[1] - a[1], uz = b[2] - a[2];
  const double vx = c[0] - a[0], vy = c[1] - a[1], vz = c[2] - a[2];
  const double cx = uy * vz - uz * vy, cy = uz * vx - ux * vz, cz = ux * vy - uy * vx;
  return 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz);
}

}  // namespace

double mesh_area(const TriMesh& mesh) {
  double a = 0;
  for (const auto& f : mesh.faces) a += tri_area(mesh, f);
  return a;
}

double mesh_volume(const TriMesh& mesh) {
  double v = 0;
  for (const auto& f : mesh.faces) {
    const auto& a = mesh.vertices[static_cast<std::size_t>(f[0])];
    const auto& b = mesh.vertices[static_cast<std::size_t>(f[1])];
    const auto& c = mesh.vertices[static_cast<std::size_t>(f[2])];
    v += a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0]);
  }
  return v / 6.0;
}

double mesh_integral(const TriMesh& mesh, const std::function<double(double H, double K)>& f) {
  double sum = 0;
  for (const auto& t : mesh.faces) {
    double avg = 0;
    for (const int i : t) avg += f(mesh.H[static_cast<std::size_t>(i)], mesh.K[static_cast<std::size_t>(i)]);
    sum += tri_area(mesh, t) * avg / 3.0;
  }
  return sum;
}

}  // namespace helfrich
