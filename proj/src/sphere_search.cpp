#include "helfrich/sphere_search.hpp"

#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "helfrich/errors.hpp"

namespace helfrich {

std::string to_string(ScanStatus s) {
  switch (s) {
    case ScanStatus::Ok:
      return "EquatorReached";
    case ScanStatus::HorizontalLine:
      return "HorizontalLine";
    case ScanStatus::NodoidType:
      return "NodoidType";
    case ScanStatus::MaxArcLength:
      return "MaxArcLength";
    case ScanStatus::StepFailure:
      return "StepFailure";
    case ScanStatus::ExtrapolationDiverged:
      return "ExtrapolationDiverged";
    case ScanStatus::Invalid:
      return "Invalid";
  }
  return "Invalid";
}

EndpointData evaluate_endpoint(double c_o, double z0, const SolverConfig& config) {
  const ShootingParams p{c_o, z0};
  const auto curve = integrate_profile(p, config);
  if (curve.termination != Termination::EquatorReached)
    throw std::runtime_error("cap at z0 = " + std::to_string(z0) + " ended with " + to_string(curve.termination));
  return endpoint_extrapolate(curve, config);
}

ScanRecord scan_point(double c_o, double z0, const SolverConfig& config) {
  ScanRecord rec;
  rec.z0 = z0;
  if (z0 == 0 || !std::isfinite(z0)) return rec;
  const ShootingParams p{c_o, z0};
  rec.curve_class = classify(p);
  if (rec.curve_class == CurveClass::HorizontalLine) {
    rec.status = ScanStatus::HorizontalLine;
    return rec;
  }
  if (rec.curve_class == CurveClass::NodoidType) {
    rec.status = ScanStatus::NodoidType;
    return rec;
  }
  try {
    const auto curve = integrate_profile(p, config);
    if (curve.termination == Termination::MaxArcLength) {
      rec.status = ScanStatus::MaxArcLength;
      return rec;
    }
    if (curve.termination == Termination::StepFailure) {
      rec.status = ScanStatus::StepFailure;
      return rec;
    }
    const auto e = endpoint_extrapolate(curve, config);
    rec.status = ScanStatus::Ok;
    rec.ell = e.ell;
    rec.r_star = e.r_star;
    rec.dphi = e.dphi;
    rec.ddphi = e.ddphi;
    rec.fit_uncertainty = e.fit_uncertainty;
  } catch (const ExtrapolationDiverged&) {
    rec.status = ScanStatus::ExtrapolationDiverged;
  } catch (const std::invalid_argument&) {
    rec.status = ScanStatus::Invalid;
  }
  return rec;
}

std::vector<double> uniform_grid(double z_max, int n) {
  if (n < 1 || !(z_max != 0)) throw std::invalid_argument("uniform_grid: need n >= 1 and z_max != 0");
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) g[static_cast<std::size_t>(i - 1)] = z_max * i / n;
  return g;
}

namespace {

void sort_records(std::vector<ScanRecord>& recs) {
  std::stable_sort(recs.begin(), recs.end(), [](const ScanRecord& a, const ScanRecord& b) { return a.z0 < b.z0; });
}

}  // namespace

std::vector<ScanRecord> scan(double c_o, const std::vector<double>& z0_grid, const SolverConfig& config) {
  std::vector<ScanRecord> out(z0_grid.size());
  const auto n = static_cast<std::int64_t>(z0_grid.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = scan_point(c_o, z0_grid[static_cast<std::size_t>(i)], config);
  }
  sort_records(out);
  return out;
}

std::vector<ScanRecord> scan_serial(double c_o, const std::vector<double>& z0_grid, const SolverConfig& config) {
  std::vector<ScanRecord> out;
  out.reserve(z0_grid.size());
  for (const double z : z0_grid) out.push_back(scan_point(c_o, z, config));
  sort_records(out);
  return out;
}

std::vector<ScanRecord> refine_scan(double c_o, const std::vector<ScanRecord>& records, const SolverConfig& config,
                                    double threshold) {
  auto small = [&](const ScanRecord& r) { return r.has_endpoint() && std::abs(r.ddphi) < threshold; };
  std::vector<double> mids;
  for (std::size_t i = 0; i + 1 < records.size(); ++i) {
    if (small(records[i]) || small(records[i + 1])) mids.push_back(0.5 * (records[i].z0 + records[i + 1].z0));
  }
  auto extra = scan(c_o, mids, config);
  std::vector<ScanRecord> merged = records;
  merged.insert(merged.end(), extra.begin(), extra.end());
  sort_records(merged);
  return merged;
}

RootSearch bracket_and_refine(const std::vector<ScanRecord>& records, double tol, const EndpointEvaluator& eval) {
  if (!(tol > 0)) throw std::invalid_argument("bracket_and_refine: tol must be positive");
  std::vector<std::pair<std::size_t, std::size_t>> brackets;
  for (std::size_t i = 0; i + 1 < records.size(); ++i) {
    const auto& a = records[i];
    const auto& b = records[i + 1];
    if (a.has_endpoint() && b.has_endpoint() && a.ddphi * b.ddphi < 0) brackets.emplace_back(i, i + 1);
  }

  std::vector<SphereRoot> found(brackets.size());
  std::vector<std::string> failure(brackets.size());
  const auto nb = static_cast<std::int64_t>(brackets.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t k = 0; k < nb; ++k) {
    const auto& a = records[brackets[static_cast<std::size_t>(k)].first];
    const auto& b = records[brackets[static_cast<std::size_t>(k)].second];
    SphereRoot& root = found[static_cast<std::size_t>(k)];
    root.z0_lo = a.z0;
    root.z0_hi = b.z0;
    try {
      auto f = [&](double z) {
        const auto e = eval(z);
        ++root.evaluations;
        return std::abs(e.ddphi) <= std::max(tol, e.fit_uncertainty) ? 0.0 : e.ddphi;
      };
      auto width_ok = [](double lo, double hi) { return hi - lo <= 1e-10 * std::max(std::abs(lo), std::abs(hi)); };
      std::uintmax_t max_iter = 200;
      const auto r = boost::math::tools::toms748_solve(f, a.z0, b.z0, a.ddphi, b.ddphi, width_ok, max_iter);
      root.z0_root = 0.5 * (r.first + r.second);
      root.endpoint = eval(root.z0_root);
      ++root.evaluations;
    } catch (const std::exception& ex) {
      failure[static_cast<std::size_t>(k)] = ex.what();
    }
  }

  RootSearch out;
  for (std::size_t k = 0; k < found.size(); ++k) {
    if (failure[k].empty()) {
      out.roots.push_back(found[k]);
    } else {
      out.lost.push_back({found[k].z0_lo, found[k].z0_hi, failure[k]});
    }
  }
  for (std::size_t k = 0; k < out.roots.size(); ++k) out.roots[k].index = static_cast<int>(k) + 1;
  return out;
}

RootSearch bracket_and_refine(const std::vector<ScanRecord>& records, double tol, double c_o,
                              const SolverConfig& config) {
  if (c_o == 0) {
    RootSearch out;
    out.round_sphere_family = true;
    return out;
  }
  return bracket_and_refine(records, tol, [&](double z) { return evaluate_endpoint(c_o, z, config); });
}

std::vector<SpiralPoint> spiral_curve(const std::vector<ScanRecord>& records) {
  std::vector<SpiralPoint> out;
  for (const auto& r : records)
    if (r.has_endpoint()) out.push_back({r.z0, r.ddphi, r.r_star});
  return out;
}

namespace {

struct Crossing {
  double za;
  double zb;
};

// Intersections of segment p0-p1 with segment q0-q1 as parameters (u, v).
bool segment_cross(double px0, double py0, double px1, double py1, double qx0, double qy0, double qx1, double qy1,
                   double& u, double& v) {
  const double ax = px1 - px0, ay = py1 - py0;
  const double bx = qx1 - qx0, by = qy1 - qy0;
  const double det = ax * (-by) - ay * (-bx);
  if (det == 0) return false;
  const double cx = qx0 - px0, cy = qy0 - py0;
  u = (cx * (-by) - cy * (-bx)) / det;
  v = (ax * cy - ay * cx) / det;
  return u >= 0 && u <= 1 && v >= 0 && v <= 1;
}

}  // namespace

PairSearch asymmetric_pair_search(const std::vector<ScanRecord>& records, double tol_r, double tol_d,
                                  const PairEvaluator& eval) {
  if (!(tol_r > 0) || !(tol_d > 0)) throw std::invalid_argument("asymmetric_pair_search: tolerances must be positive");
  std::vector<ScanRecord> pts;
  for (const auto& r : records)
    if (r.has_endpoint() && r.curve_class == CurveClass::UnduloidType) pts.push_back(r);

  PairSearch out;
  if (pts.size() < 2) return out;
  const double z_lo = pts.front().z0, z_hi = pts.back().z0;

  std::vector<Crossing> cands;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    for (std::size_t j = i; j + 1 < pts.size(); ++j) {
      double u, v;
      if (!segment_cross(pts[i].ddphi, pts[i].r_star, pts[i + 1].ddphi, pts[i + 1].r_star, -pts[j].ddphi,
                         pts[j].r_star, -pts[j + 1].ddphi, pts[j + 1].r_star, u, v))
        continue;
      const double d = pts[i].ddphi + u * (pts[i + 1].ddphi - pts[i].ddphi);
      if (std::abs(d) <= tol_d) continue;  // two symmetric spheres, not one asymmetric one
      cands.push_back({pts[i].z0 + u * (pts[i + 1].z0 - pts[i].z0), pts[j].z0 + v * (pts[j + 1].z0 - pts[j].z0)});
    }
  }
  out.candidates = static_cast<int>(cands.size());

  for (const auto& c : cands) {
    double za = c.za, zb = c.zb;
    auto residual = [&](double a, double b, double& f1, double& f2, double& da) {
      const auto ea = eval(a);
      const auto eb = eval(b);
      f1 = ea.second - eb.second;
      f2 = ea.first + eb.first;
      da = ea.first;
    };
    auto norm = [&](double f1, double f2) { return std::hypot(f1 / tol_r, f2 / tol_d); };
    double f1, f2, da;
    try {
      residual(za, zb, f1, f2, da);
      bool ok = false;
      for (int it = 0; it < 40; ++it) {
        if (std::abs(f1) <= tol_r && std::abs(f2) <= tol_d) {
          ok = true;
          break;
        }
        const double ha = 1e-6 * std::max(1.0, std::abs(za));
        const double hb = 1e-6 * std::max(1.0, std::abs(zb));
        const auto ap = eval(za + ha), am = eval(za - ha);
        const auto bp = eval(zb + hb), bm = eval(zb - hb);
        const double j11 = (ap.second - am.second) / (2 * ha), j12 = -(bp.second - bm.second) / (2 * hb);
        const double j21 = (ap.first - am.first) / (2 * ha), j22 = (bp.first - bm.first) / (2 * hb);
        const double det = j11 * j22 - j12 * j21;
        if (det == 0 || !std::isfinite(det)) break;
        const double sa = -(j22 * f1 - j12 * f2) / det;
        const double sb = -(-j21 * f1 + j11 * f2) / det;
        const double n0 = norm(f1, f2);
        bool moved = false;
        for (double lam = 1.0; lam >= 1.0 / 64; lam *= 0.5) {
          const double na = za + lam * sa, nb = zb + lam * sb;
          if (na < z_lo || na > z_hi || nb < z_lo || nb > z_hi) continue;
          double g1, g2, dg;
          residual(na, nb, g1, g2, dg);
          if (norm(g1, g2) < n0) {
            za = na;
            zb = nb;
            f1 = g1;
            f2 = g2;
            da = dg;
            moved = true;
            break;
          }
        }
        if (!moved) break;
      }
      if (!ok || std::abs(da) <= tol_d) continue;
      if (std::abs(za - zb) <= 1e-6 * std::max(za, zb)) continue;
      if (za > zb) std::swap(za, zb);
      bool dup = false;
      for (const auto& p : out.pairs)
        dup = dup || (std::abs(p.z0_a - za) <= 1e-6 * za && std::abs(p.z0_b - zb) <= 1e-6 * zb);
      if (dup) continue;
      const auto ea = eval(za), eb = eval(zb);
      out.pairs.push_back({za, zb, ea.second, eb.second, ea.first, eb.first});
    } catch (const std::exception&) {
      continue;  // candidate left the evaluable range
    }
  }
  std::sort(out.pairs.begin(), out.pairs.end(),
            [](const AsymmetricPair& a, const AsymmetricPair& b) { return a.z0_a < b.z0_a; });
  return out;
}

PairSearch asymmetric_pair_search(const std::vector<ScanRecord>& records, double tol_r, double tol_d, double c_o,
                                  const SolverConfig& config) {
  return asymmetric_pair_search(records, tol_r, tol_d, [&](double z) {
    const auto e = evaluate_endpoint(c_o, z, config);
    return std::make_pair(e.ddphi, e.r_star);
  });
}

}  // namespace helfrich
