#ifndef HELFRICH_SPHERE_SEARCH_HPP
#define HELFRICH_SPHERE_SEARCH_HPP

// Shooting over the initial height. A symmetric closed sphere is a cap whose
// equator data satisfies phi''(ell) = 0; asymmetric spheres would need two
// caps with equal r_star and opposite phi''(ell).

#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "helfrich/analysis.hpp"
#include "helfrich/profile_ode.hpp"

namespace helfrich {

enum class ScanStatus { Ok, HorizontalLine, NodoidType, MaxArcLength, StepFailure, ExtrapolationDiverged, Invalid };

std::string to_string(ScanStatus s);

struct ScanRecord {
  static constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  double z0 = 0;
  ScanStatus status = ScanStatus::Invalid;
  CurveClass curve_class = CurveClass::Circle;
  double ell = nan;
  double r_star = nan;
  double dphi = nan;
  double ddphi = nan;
  double fit_uncertainty = nan;

  bool has_endpoint() const { return status == ScanStatus::Ok; }
};

// Integrates and extrapolates one cap; throws on any failure.
EndpointData evaluate_endpoint(double c_o, double z0, const SolverConfig& config);

// Never throws for numerical trouble; failures land in status.
ScanRecord scan_point(double c_o, double z0, const SolverConfig& config);

// z_max * i / n for i = 1..n
std::vector<double> uniform_grid(double z_max, int n);

// One record per grid value, sorted by z0. The OpenMP version and the serial
// reference produce identical records.
std::vector<ScanRecord> scan(double c_o, const std::vector<double>& z0_grid, const SolverConfig& config);
std::vector<ScanRecord> scan_serial(double c_o, const std::vector<double>& z0_grid, const SolverConfig& config);

// Adds the midpoint of every interval with an endpoint where |phi''(ell)| <
// threshold and returns the merged, sorted records.
std::vector<ScanRecord> refine_scan(double c_o, const std::vector<ScanRecord>& records,
                                    const SolverConfig& config, double threshold = 0.1);

struct SphereRoot {
  double z0_root = 0;
  double z0_lo = 0;
  double z0_hi = 0;
  EndpointData endpoint;
  int index = 0;
  int evaluations = 0;
};

struct LostBracket {
  double z0_lo = 0;
  double z0_hi = 0;
  std::string reason;
};

struct RootSearch {
  std::vector<SphereRoot> roots;
  std::vector<LostBracket> lost;  // evaluation failed inside the bracket
  bool round_sphere_family = false;
};

using EndpointEvaluator = std::function<EndpointData(double z0)>;

// Every sign change of ddphi between consecutive Ok records is refined with
// TOMS 748 until |phi''| <= max(tol, fit_uncertainty) or the bracket is below
// 1e-10 z0.
RootSearch bracket_and_refine(const std::vector<ScanRecord>& records, double tol, const EndpointEvaluator& eval);

// c_o = 0 is refused: every cap closes into a round sphere.
RootSearch bracket_and_refine(const std::vector<ScanRecord>& records, double tol, double c_o,
                              const SolverConfig& config);

struct SpiralPoint {
  double z0 = 0;
  double ddphi = 0;
  double r_star = 0;
};

std::vector<SpiralPoint> spiral_curve(const std::vector<ScanRecord>& records);

struct AsymmetricPair {
  double z0_a = 0;
  double z0_b = 0;
  double r_a = 0;
  double r_b = 0;
  double ddphi_a = 0;
  double ddphi_b = 0;
};

struct PairSearch {
  std::vector<AsymmetricPair> pairs;
  int candidates = 0;  // polyline self-mirror intersections examined
};

// (ddphi, r_star) at a given z0
using PairEvaluator = std::function<std::pair<double, double>(double z0)>;

// Candidates are crossings of the polyline z0 -> (ddphi, r_star) with its
// mirror (-ddphi, r_star), away from ddphi = 0; each is refined by damped
// Newton on (r_a - r_b, ddphi_a + ddphi_b) and reported only if it meets both
// tolerances with |ddphi_a| > tol_d. Only unduloid-type records are used.
PairSearch asymmetric_pair_search(const std::vector<ScanRecord>& records, double tol_r, double tol_d,
                                  const PairEvaluator& eval);
PairSearch asymmetric_pair_search(const std::vector<ScanRecord>& records, double tol_r, double tol_d,
                                  double c_o, const SolverConfig& config);

}  // namespace helfrich

#endif
