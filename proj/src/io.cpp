#include "helfrich/io.hpp"

#include <cmath>
#include <cstdio>

namespace helfrich::io {

using nlohmann::json;

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json to_json(const ShootingParams& p) { return {{"c_o", p.c_o}, {"z0", p.z_0}}; }

json to_json(const SolverConfig& c) {
  json j{{"rel_tol", c.rel_tol},
         {"abs_tol", c.abs_tol},
         {"richardson_levels", c.richardson_levels},
         {"equator_window", c.equator_window},
         {"max_step", c.max_step},
         {"output_step", c.output_step}};
  j["h0"] = c.h0 ? json(*c.h0) : json(nullptr);
  j["z_stop"] = c.z_stop ? json(*c.z_stop) : json(nullptr);
  j["s_max"] = c.s_max ? json(*c.s_max) : json(nullptr);
  return j;
}

json to_json(const EndpointData& e) {
  return {{"ell", e.ell},
          {"r_star", e.r_star},
          {"phi_end", e.phi_end},
          {"dphi", e.dphi},
          {"ddphi", e.ddphi},
          {"ddphi_alt", e.ddphi_alt},
          {"fit_uncertainty", e.fit_uncertainty},
          {"level_ddphi", e.level_ddphi}};
}

json to_json(const RegularityReport& r) {
  return {{"c1_gap", r.c1_gap},   {"c2_gap", r.c2_gap}, {"dH_top", r.dH_top},
          {"dH_bottom", r.dH_bottom}, {"c3_gap", r.c3_gap}, {"fit_uncertainty", r.fit_uncertainty}};
}

json to_json(const SurfaceIntegral& i) {
  return {{"value", i.value}, {"top", i.top}, {"bottom", i.bottom}, {"error", i.error}};
}

void write_profile_csv(std::ostream& os, const ProfileCurve& curve, const std::string& schema) {
  os << "# schema: " << schema << "\n";
  os << "# c_o=" << fmt(curve.params.c_o) << " z0=" << fmt(curve.params.z_0)
     << " termination=" << to_string(curve.termination) << "\n";
  os << "s,r,z,phi\n";
  for (const auto& q : curve.samples) os << fmt(q.s) << ',' << fmt(q.r) << ',' << fmt(q.z) << ',' << fmt(q.phi) << '\n';
}

json profile_json(const ProfileCurve& curve, const SolverConfig& config) {
  json samples = json::array();
  for (const auto& q : curve.samples) samples.push_back({q.s, q.r, q.z, q.phi});
  return {{"schema", "profile/1"},
          {"params", to_json(curve.params)},
          {"config", to_json(config)},
          {"termination", to_string(curve.termination)},
          {"sample_columns", {"s", "r", "z", "phi"}},
          {"samples", samples}};
}

void write_scan_csv(std::ostream& os, double c_o, const std::vector<ScanRecord>& records) {
  os << "# schema: scan/1\n";
  os << "# c_o=" << fmt(c_o) << "\n";
  os << "z0,ell,r_star,ddphi,status\n";
  for (const auto& r : records)
    os << fmt(r.z0) << ',' << fmt(r.ell) << ',' << fmt(r.r_star) << ',' << fmt(r.ddphi) << ',' << to_string(r.status)
       << '\n';
}

void write_spiral_csv(std::ostream& os, const std::vector<SpiralPoint>& points) {
  os << "# schema: spiral/1\n";
  os << "z0,ddphi,r_star\n";
  for (const auto& p : points) os << fmt(p.z0) << ',' << fmt(p.ddphi) << ',' << fmt(p.r_star) << '\n';
}

json roots_json(double c_o, const RootSearch& search) {
  json roots = json::array();
  for (const auto& r : search.roots)
    roots.push_back({{"index", r.index},
                     {"z0", r.z0_root},
                     {"bracket", {r.z0_lo, r.z0_hi}},
                     {"evaluations", r.evaluations},
                     {"endpoint", to_json(r.endpoint)}});
  json lost = json::array();
  for (const auto& l : search.lost) lost.push_back({{"bracket", {l.z0_lo, l.z0_hi}}, {"reason", l.reason}});
  return {{"schema", "roots/1"},
          {"c_o", c_o},
          {"round_sphere_family", search.round_sphere_family},
          {"roots", roots},
          {"lost_brackets", lost}};
}

json pairs_json(double c_o, const PairSearch& search) {
  json pairs = json::array();
  for (const auto& p : search.pairs)
    pairs.push_back({{"z0_a", p.z0_a},
                     {"z0_b", p.z0_b},
                     {"r_a", p.r_a},
                     {"r_b", p.r_b},
                     {"ddphi_a", p.ddphi_a},
                     {"ddphi_b", p.ddphi_b}});
  return {{"schema", "pairs/1"}, {"c_o", c_o}, {"candidates", search.candidates}, {"pairs", pairs}};
}

void write_obj(std::ostream& os, const TriMesh& mesh, const std::string& name) {
  os << "# schema: surface-mesh/1\n";
  os << "# per-vertex attributes follow each vertex as '#va H K nu3'\n";
  os << "o " << name << '\n';
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const auto& v = mesh.vertices[i];
    os << "v " << fmt(v[0]) << ' ' << fmt(v[1]) << ' ' << fmt(v[2]) << '\n';
    os << "#va " << fmt(mesh.H[i]) << ' ' << fmt(mesh.K[i]) << ' ' << fmt(mesh.nu3[i]) << '\n';
  }
  for (const auto& n : mesh.normals) os << "vn " << fmt(n[0]) << ' ' << fmt(n[1]) << ' ' << fmt(n[2]) << '\n';
  for (const auto& f : mesh.faces) {
    os << 'f';
    for (const int i : f) os << ' ' << i + 1 << "//" << i + 1;
    os << '\n';
  }
}

}  // namespace helfrich::io
