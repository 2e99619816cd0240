// Benchmark comparing the OpenMP code paths against the serial reference.
// Every kernel built on parallel_for accumulates into disjoint slots, so the
// two paths must produce bitwise-identical results; this driver times both
// and verifies that guarantee.  Exit status is the number of mismatches.
//
// Usage: hypwave_bench [repeats]   (default 3; best-of timing)

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "hypwave/generator.hpp"
#include "hypwave/parallel.hpp"
#include "hypwave/projection.hpp"
#include "hypwave/resolvent.hpp"

using namespace hypwave;
using clk = std::chrono::steady_clock;

namespace {

struct BenchCase {
  std::string name;
  // Runs the kernel once and returns a digest of the full output; digests
  // from the serial and parallel paths must match exactly.
  std::function<std::vector<double>()> run;
};

double best_of(int repeats, const std::function<std::vector<double>()>& f,
               std::vector<double>& digest) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = clk::now();
    digest = f();
    best = std::min(best,
                    std::chrono::duration<double>(clk::now() - t0).count());
  }
  return best;
}

std::vector<double> flatten(const Eigen::MatrixXd& m) {
  return std::vector<double>(m.data(), m.data() + m.size());
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;

  RadialGrid g96(96), g48(48);
  ModeFieldC f{0, Eigen::VectorXcd::Zero(48), Eigen::VectorXcd::Zero(48)};
  for (int i = 0; i < 48; ++i) {
    const double r = g48.rho()(i), s = 1.0 - r * r;
    f.u1(i) = s * s;
    f.u2(i) = 0.5 * s;
  }

  const std::vector<BenchCase> cases = {
      {"generator assembly (N=96, ell=0)",
       [&] { return flatten(build_generator(g96, 0, true).a); }},
      {"contour projection (N=48, ell=0)",
       [&] {
         const GeneratorMatrix gen = build_generator(g48, 0, true);
         return flatten(unstable_projection(gen).p);
       }},
      {"kernel-quadrature resolvent (N=96, ell=0, 8 solves)",
       [&] {
         std::vector<double> digest;
         ModeFieldC fb{0, Eigen::VectorXcd::Zero(96),
                       Eigen::VectorXcd::Zero(96)};
         for (int i = 0; i < 96; ++i) {
           const double r = g96.rho()(i), s = 1.0 - r * r;
           fb.u1(i) = s;
           fb.u2(i) = r * r * s;
         }
         for (int k = 0; k < 8; ++k) {
           const ResolventResult rr =
               resolvent_solve(0, 0.3 + 0.2 * k, fb, g96,
                               ResolventMethod::variation_of_constants);
           for (int i = 0; i < 96; ++i) {
             digest.push_back(rr.u.u1(i).real());
             digest.push_back(rr.u.u2(i).real());
           }
         }
         return digest;
       }},
  };

  std::printf("threads available: %d (parallel path)\n", [] {
    force_serial() = false;
    return thread_count();
  }());
  std::printf("%-52s %12s %12s %9s %10s\n", "kernel", "serial [s]",
              "parallel [s]", "speedup", "identical");

  int mismatches = 0;
  for (const BenchCase& bc : cases) {
    std::vector<double> ds, dp;
    force_serial() = true;
    const double ts = best_of(repeats, bc.run, ds);
    force_serial() = false;
    const double tp = best_of(repeats, bc.run, dp);
    const bool same = ds == dp;
    if (!same) ++mismatches;
    std::printf("%-52s %12.4f %12.4f %8.2fx %10s\n", bc.name.c_str(), ts, tp,
                ts / tp, same ? "yes" : "NO");
  }
  force_serial() = false;
  if (mismatches)
    std::printf("%d kernel(s) differ between the serial and parallel paths\n",
                mismatches);
  return mismatches;
}
