#ifndef HELFRICH_IO_HPP
#define HELFRICH_IO_HPP

// Versioned text outputs. CSV files start with a "# schema: <tag>" line,
// JSON records carry a "schema" member, numbers in CSV use %.17g so that
// re-running a command reproduces the files byte for byte.

#include <json.hpp>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "helfrich/analysis.hpp"
#include "helfrich/discoid.hpp"
#include "helfrich/profile_ode.hpp"
#include "helfrich/sphere_search.hpp"
#include "helfrich/surface.hpp"

namespace helfrich::io {

std::string fmt(double v);

nlohmann::json to_json(const ShootingParams& p);
nlohmann::json to_json(const SolverConfig& c);
nlohmann::json to_json(const EndpointData& e);
nlohmann::json to_json(const RegularityReport& r);
nlohmann::json to_json(const SurfaceIntegral& i);

// columns s, r, z, phi
void write_profile_csv(std::ostream& os, const ProfileCurve& curve, const std::string& schema = "profile/1");
// {schema: profile/1, params, config, termination, samples}
nlohmann::json profile_json(const ProfileCurve& curve, const SolverConfig& config);

// columns z0, ell, r_star, ddphi, status
void write_scan_csv(std::ostream& os, double c_o, const std::vector<ScanRecord>& records);
// columns z0, ddphi, r_star
void write_spiral_csv(std::ostream& os, const std::vector<SpiralPoint>& points);
nlohmann::json roots_json(double c_o, const RootSearch& search);
nlohmann::json pairs_json(double c_o, const PairSearch& search);

void write_obj(std::ostream& os, const TriMesh& mesh, const std::string& name);

}  // namespace helfrich::io

#endif
