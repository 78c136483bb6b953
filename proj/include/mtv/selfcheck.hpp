#pragma once

#include <random>
#include <string>

#include "mtv/solvers.hpp"
#include "mtv/verify.hpp"

namespace mtv {

/// Deterministic random source for test corpora (fully specified generator,
/// identical streams on every platform).
class Rng {
 public:
  explicit Rng(uint64_t seed) : g_(seed) {}
  double uniform() { return static_cast<double>(g_() >> 11) * 0x1.0p-53; }  // [0,1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int n) { return static_cast<int>(g_() % static_cast<uint64_t>(n)); }
  uint64_t raw() { return g_(); }

 private:
  std::mt19937_64 g_;
};

/// i.i.d. uniform values in [lo, hi).
PixelImage random_uniform_image(Rng& rng, GridLevel level, double lo = 0.0, double hi = 1.0);

/// Random nonnegative piecewise-constant image built from separated stacks
/// of nested axis-aligned rectangles. By construction its level sets are
/// unions of well-separated rectangles, so corner atoms of distinct layers
/// never carry opposite signs at a shared knot. This is the image class on
/// which the corner-norm layer identities hold exactly; see the note on
/// cocorner_check.
PixelImage random_rect_stack_image(Rng& rng, GridLevel level, int groups = 4, int max_depth = 3);

/// Synthetic benchmark scene: axis-aligned polygonal regions painted over a
/// flat background, values in [0,1]. Deterministic per seed.
PixelImage synthetic_blocky_image(uint64_t seed, int rows, int cols, int num_rects = 12);

struct CheckResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;  // largest violation observed (0 when exact)
  std::string detail;
};

/// The executable invariant suite behind the `verify` subcommand: norm
/// exactness and axioms, downsampling monotonicity, truncation/layer
/// identities, solver cross-checks. `inject_fault` deliberately corrupts one
/// computation so the harness itself can be tested.
std::vector<CheckResult> run_invariant_suite(uint64_t seed, bool inject_fault = false);

}  // namespace mtv
