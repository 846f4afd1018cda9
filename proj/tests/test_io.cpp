#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "helfrich/io.hpp"

using namespace helfrich;
using nlohmann::json;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("number formatting round-trips") {
  for (const double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) CHECK(std::stod(io::fmt(v)) == v);
  CHECK(io::fmt(NAN) == "nan");
  CHECK(io::fmt(INFINITY) == "inf");
  CHECK(io::fmt(1.5) == "1.5");
}

TEST_CASE("profile CSV and JSON carry schema tags") {
  const SolverConfig cfg;
  const auto curve = integrate_profile({0.0, 1.0}, cfg);
  std::ostringstream os;
  io::write_profile_csv(os, curve);
  const auto l = lines(os.str());
  REQUIRE(l.size() == curve.samples.size() + 3);
  CHECK(l[0] == "# schema: profile/1");
  CHECK(l[2] == "s,r,z,phi");
  CHECK(os.str().find('\r') == std::string::npos);
  CHECK(std::stod(l[3].substr(0, l[3].find(','))) == curve.samples[0].s);

  const auto j = io::profile_json(curve, cfg);
  CHECK(j["schema"] == "profile/1");
  CHECK(j["termination"] == "EquatorReached");
  CHECK(j["samples"].size() == curve.samples.size());
  CHECK(j["config"]["h0"].is_null());
  CHECK(j["params"]["z0"] == 1.0);
  // dump and parse back
  CHECK(json::parse(j.dump()) == j);
}

TEST_CASE("scan, spiral, roots and pairs records") {
  ScanRecord ok;
  ok.z0 = 1.0;
  ok.status = ScanStatus::Ok;
  ok.ell = 2.0;
  ok.r_star = 0.5;
  ok.ddphi = -0.25;
  ScanRecord bad;
  bad.z0 = 2.0;
  bad.status = ScanStatus::NodoidType;
  std::ostringstream os;
  io::write_scan_csv(os, 1.0, {ok, bad});
  const auto l = lines(os.str());
  CHECK(l[0] == "# schema: scan/1");
  CHECK(l[2] == "z0,ell,r_star,ddphi,status");
  CHECK(l[3] == "1,2,0.5,-0.25,EquatorReached");
  CHECK(l[4] == "2,nan,nan,nan,NodoidType");

  std::ostringstream sp;
  io::write_spiral_csv(sp, spiral_curve({ok, bad}));
  CHECK(lines(sp.str()).size() == 3);

  RootSearch rs;
  rs.roots.push_back({1.5, 1.4, 1.6, {}, 1, 7});
  rs.lost.push_back({3.0, 3.1, "diverged"});
  const auto rj = io::roots_json(1.0, rs);
  CHECK(rj["schema"] == "roots/1");
  CHECK(rj["roots"][0]["z0"] == 1.5);
  CHECK(rj["lost_brackets"][0]["reason"] == "diverged");

  const auto pj = io::pairs_json(1.0, {});
  CHECK(pj["schema"] == "pairs/1");
  CHECK(pj["pairs"].empty());
}

TEST_CASE("OBJ output") {
  const auto cap = make_cap({0.0, 1.0}, {});
  const auto mesh = revolve_mesh(glue(cap, cap), 16);
  std::ostringstream os;
  io::write_obj(os, mesh, "unit");
  std::size_t v = 0, vn = 0, va = 0, f = 0;
  bool indices_ok = true;
  for (const auto& l : lines(os.str())) {
    if (l.rfind("v ", 0) == 0) ++v;
    if (l.rfind("vn ", 0) == 0) ++vn;
    if (l.rfind("#va ", 0) == 0) ++va;
    if (l.rfind("f ", 0) == 0) {
      ++f;
      std::istringstream is(l.substr(2));
      for (std::string tok; is >> tok;) {
        const long idx = std::stol(tok.substr(0, tok.find('/')));
        indices_ok = indices_ok && idx >= 1 && idx <= static_cast<long>(mesh.vertices.size());
      }
    }
  }
  CHECK(v == mesh.vertices.size());
  CHECK(vn == mesh.vertices.size());
  CHECK(va == mesh.vertices.size());
  CHECK(f == mesh.faces.size());
  CHECK(indices_ok);
  CHECK(os.str().rfind("# schema: surface-mesh/1", 0) == 0);
}
