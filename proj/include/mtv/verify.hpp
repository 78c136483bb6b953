#pragma once

#include "mtv/discrete_norms.hpp"
#include "mtv/grid.hpp"

namespace mtv {

/// Layer-cake decomposition of a nonnegative image: thresholds are the
/// sorted distinct values 0 = v0 < v1 < ... < vM actually taken (exact
/// equality grouping), and layer m is the binary image {a >= vm}. The image
/// is recovered exactly as sum_m (vm - v_{m-1}) * layer_m, and the layers
/// are nested.
struct LevelDecomposition {
  std::vector<double> thresholds;   // v0 = 0, then the distinct positive values
  std::vector<PixelImage> layers;   // indicator of {a >= vm}, m = 1..M

  PixelImage reconstruct() const;
};

/// Componentwise min(a, s). Throws for s < 0 or infeasible a.
PixelImage truncate_min(const PixelImage& a, double s);
/// Componentwise max(a - s, 0); truncate_min + truncate_max recovers a.
PixelImage truncate_max(const PixelImage& a, double s);

struct SplitCheck {
  double lower = 0.0;  // norm of the truncated-below part
  double upper = 0.0;  // norm of the truncated-above part
  double total = 0.0;  // norm of the full image
};

/// Corner-norm splitting under truncation at level s: lower + upper equals
/// the corner norm of a (exactly for piecewise-constant images).
SplitCheck cocorner_check(const PixelImage& a, double s);

/// TV splitting under truncation at level s (the coarea identity for the
/// discrete layer structure): lower + upper equals the TV of a, and the
/// layer-cake sum over level sets reproduces it as well.
SplitCheck coarea_check(const PixelImage& a, double s);

/// Exact level-set decomposition by distinct values.
LevelDecomposition level_sets(const PixelImage& a);

/// Snap values to multiples of 2^-bits; groups near-ties before taking
/// level sets of data with floating-point noise.
PixelImage quantize(const PixelImage& a, int bits);

}  // namespace mtv
