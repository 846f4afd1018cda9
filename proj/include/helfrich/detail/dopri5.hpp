#ifndef HELFRICH_DETAIL_DOPRI5_HPP
#define HELFRICH_DETAIL_DOPRI5_HPP

// Dormand-Prince 5(4) embedded pair with a PI step controller, an optional
// uniform output grid and a single terminal event located by re-stepping.
// Internal to the library; the public surface is profile_ode.hpp.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace helfrich::detail {

template <std::size_t N>
using Vec = std::array<double, N>;

namespace dp {
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
// error coefficients: fifth-order weights minus embedded fourth-order weights
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
}  // namespace dp

template <std::size_t N>
struct StepResult {
  Vec<N> y{};
  Vec<N> k_end{};  // derivative at the new point (FSAL)
  double err = 0;  // scaled RMS error estimate
  bool finite = true;
};

template <std::size_t N, class F>
StepResult<N> dopri5_step(F& f, double s, const Vec<N>& y, const Vec<N>& k1, double h,
                          double rel_tol, double abs_tol) {
  using namespace dp;
  Vec<N> t{}, k2{}, k3{}, k4{}, k5{}, k6{};
  StepResult<N> out;
  for (std::size_t i = 0; i < N; ++i) t[i] = y[i] + h * a21 * k1[i];
  k2 = f(s + c2 * h, t);
  for (std::size_t i = 0; i < N; ++i) t[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
  k3 = f(s + c3 * h, t);
  for (std::size_t i = 0; i < N; ++i) t[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
  k4 = f(s + c4 * h, t);
  for (std::size_t i = 0; i < N; ++i)
    t[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
  k5 = f(s + c5 * h, t);
  for (std::size_t i = 0; i < N; ++i)
    t[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
  k6 = f(s + h, t);
  for (std::size_t i = 0; i < N; ++i)
    out.y[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
  out.k_end = f(s + h, out.y);
  double acc = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                          e7 * out.k_end[i]);
    const double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(out.y[i]));
    acc += (e / sc) * (e / sc);
    if (!std::isfinite(out.y[i]) || !std::isfinite(out.k_end[i])) out.finite = false;
  }
  out.err = std::sqrt(acc / static_cast<double>(N));
  if (!std::isfinite(out.err)) out.finite = false;
  return out;
}

struct DriveOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  double h_init = 1e-6;
  double h_max = std::numeric_limits<double>::infinity();
  double h_min = 1e-14;
  double s_max = 50.0;
  // > 0: steps land exactly on grid_origin + k * output_step and only those
  // points (plus the start and the final point) are emitted
  double output_step = 0.0;
  double grid_origin = 0.0;
  long max_steps = 5'000'000;
};

enum class DriveEnd { Event, MaxArcLength, Failure };

// Integrates y' = f(s, y) from (s0, y0).
//   event(y) > 0 while running; a sign change to <= 0 stops integration at the
//            located root (|event| driven to roundoff by secant re-stepping).
//   guard(y) == false rejects a step; repeated rejection below h_min fails.
//   emit(s, y, dy) receives every output point, starting with (s0, y0).
template <std::size_t N, class F, class Event, class Guard, class Emit>
DriveEnd drive(F&& f, double s0, const Vec<N>& y0, const DriveOptions& opt, Event&& event,
               Guard&& guard, Emit&& emit) {
  constexpr double safety = 0.9, beta = 0.04, alpha = 0.2 - 0.75 * beta;
  double s = s0;
  Vec<N> y = y0;
  Vec<N> k = f(s, y);
  emit(s, y, k);
  double h = std::min(opt.h_init, opt.h_max);
  double err_old = 1e-4;
  long grid_index = 0;
  if (opt.output_step > 0) {
    grid_index = static_cast<long>(std::floor((s - opt.grid_origin) / opt.output_step)) + 1;
  }

  for (long n = 0; n < opt.max_steps; ++n) {
    if (s >= opt.s_max) return DriveEnd::MaxArcLength;
    const double h_ctrl = h;
    bool lands_on_grid = false;
    double grid_s = 0;
    if (opt.output_step > 0) {
      grid_s = opt.grid_origin + static_cast<double>(grid_index) * opt.output_step;
      if (s + h >= grid_s - 1e-12 * opt.output_step) {
        h = grid_s - s;
        lands_on_grid = true;
      }
    }
    bool hits_cap = false;
    if (s + h >= opt.s_max) {
      h = opt.s_max - s;
      hits_cap = true;
    }

    auto step = dopri5_step<N>(f, s, y, k, h, opt.rel_tol, opt.abs_tol);
    if (!step.finite || step.err > 1.0 || !guard(step.y)) {
      const double shrink =
          (step.finite && step.err > 1.0) ? std::max(0.2, safety * std::pow(step.err, -0.2)) : 0.25;
      h *= shrink;
      if (h < opt.h_min) return DriveEnd::Failure;
      continue;
    }

    const double g0 = event(y);
    const double g1 = event(step.y);
    if (g0 > 0 && g1 <= 0) {
      // locate the event by secant iteration on the step length; each trial
      // is a full fifth-order step from (s, y)
      double ha = 0, ga = g0, hb = h, gb = g1;
      auto best = step;
      double h_best = h;
      int side = 0;
      for (int it = 0; it < 60; ++it) {
        double hc = hb - gb * (hb - ha) / (gb - ga);
        if (!(hc > ha && hc < hb)) hc = 0.5 * (ha + hb);
        auto trial = dopri5_step<N>(f, s, y, k, hc, opt.rel_tol, opt.abs_tol);
        if (!trial.finite) {
          hb = hc;
          continue;
        }
        const double gc = event(trial.y);
        best = trial;
        h_best = hc;
        if (std::abs(gc) <= 1e-15 * std::max(1.0, std::abs(g0)) || hb - ha <= 1e-16 * (s + h)) break;
        if (gc > 0) {
          ha = hc;
          ga = gc;
          if (side == 1) gb *= 0.5;  // Illinois modification
          side = 1;
        } else {
          hb = hc;
          gb = gc;
          if (side == -1) ga *= 0.5;
          side = -1;
        }
      }
      emit(s + h_best, best.y, best.k_end);
      return DriveEnd::Event;
    }

    s = lands_on_grid ? grid_s : s + h;
    if (hits_cap) s = opt.s_max;
    y = step.y;
    k = step.k_end;
    if (opt.output_step <= 0 || lands_on_grid || hits_cap) emit(s, y, k);
    if (lands_on_grid) ++grid_index;

    const double err = std::max(step.err, 1e-10);
    double fac = safety * std::pow(err, -alpha) * std::pow(err_old, beta);
    fac = std::clamp(fac, 0.2, 10.0);
    err_old = std::max(step.err, 1e-4);
    // a grid-clamped step is shorter than the controller wanted; it must not
    // shrink the next proposal
    h = (h < h_ctrl) ? std::max(h * fac, h_ctrl) : h * fac;
    h = std::min(h, opt.h_max);
  }
  return DriveEnd::Failure;
}

}  // namespace helfrich::detail

#endif
