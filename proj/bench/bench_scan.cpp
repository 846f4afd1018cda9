// Times the OpenMP scan against the serial reference on the same grid and
// checks that both return identical records.
//   bench_scan [c_o=1] [zmax=6] [n=2000] [repeats=3]

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "helfrich/sphere_search.hpp"

using namespace helfrich;

namespace {

bool same(const ScanRecord& a, const ScanRecord& b) {
  auto eq = [](double x, double y) { return std::memcmp(&x, &y, sizeof x) == 0; };
  return eq(a.z0, b.z0) && a.status == b.status && eq(a.ell, b.ell) && eq(a.r_star, b.r_star) &&
         eq(a.dphi, b.dphi) && eq(a.ddphi, b.ddphi) && eq(a.fit_uncertainty, b.fit_uncertainty);
}

template <class F>
double best_of(int repeats, F&& f) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const double c_o = argc > 1 ? std::atof(argv[1]) : 1.0;
  const double zmax = argc > 2 ? std::atof(argv[2]) : 6.0;
  const int n = argc > 3 ? std::atoi(argv[3]) : 2000;
  const int repeats = argc > 4 ? std::atoi(argv[4]) : 3;
  if (!(zmax > 0) || n < 1 || repeats < 1) {
    std::fprintf(stderr, "usage: bench_scan [c_o] [zmax] [n] [repeats]\n");
    return 2;
  }
  const auto grid = uniform_grid(zmax, n);
  const SolverConfig cfg;

  std::vector<ScanRecord> serial, parallel;
  const double ts = best_of(repeats, [&] { serial = scan_serial(c_o, grid, cfg); });
  const double tp = best_of(repeats, [&] { parallel = scan(c_o, grid, cfg); });

  bool identical = serial.size() == parallel.size();
  for (std::size_t i = 0; identical && i < serial.size(); ++i) identical = same(serial[i], parallel[i]);

  std::printf("grid: c_o=%g, z0 in (0, %g], %d points, best of %d\n", c_o, zmax, n, repeats);
  std::printf("threads        %d\n", omp_get_max_threads());
  std::printf("serial   [s]   %.4f\n", ts);
  std::printf("openmp   [s]   %.4f\n", tp);
  std::printf("speedup        %.2f\n", ts / tp);
  std::printf("records identical: %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
