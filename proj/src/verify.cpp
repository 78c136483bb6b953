#include "mtv/verify.hpp"

#include <algorithm>
#include <cmath>

namespace mtv {

namespace {

void require_feasible(const PixelImage& a, const char* who) {
  if (!a.is_nonnegative()) throw std::invalid_argument(std::string(who) + ": image must be nonnegative");
}

}  // namespace

PixelImage LevelDecomposition::reconstruct() const {
  if (layers.empty()) throw std::runtime_error("LevelDecomposition: nothing to reconstruct");
  PixelImage out(layers[0].rows(), layers[0].cols(), layers[0].dx0(), layers[0].dx1());
  for (size_t m = 0; m < layers.size(); ++m) {
    const double step = thresholds[m + 1] - thresholds[m];
    for (size_t k = 0; k < out.values().size(); ++k)
      out.values().data()[k] += step * layers[m].values().data()[k];
  }
  return out;
}

PixelImage truncate_min(const PixelImage& a, double s) {
  if (s < 0.0) throw std::invalid_argument("truncate_min: threshold must be >= 0");
  require_feasible(a, "truncate_min");
  PixelImage out = a;
  for (double& v : out.values().data()) v = v < s ? v : s;
  return out;
}

PixelImage truncate_max(const PixelImage& a, double s) {
  if (s < 0.0) throw std::invalid_argument("truncate_max: threshold must be >= 0");
  require_feasible(a, "truncate_max");
  PixelImage out = a;
  for (double& v : out.values().data()) v = v > s ? v - s : 0.0;
  return out;
}

SplitCheck cocorner_check(const PixelImage& a, double s) {
  SplitCheck c;
  c.lower = corner_norm(truncate_min(a, s));
  c.upper = corner_norm(truncate_max(a, s));
  c.total = corner_norm(a);
  return c;
}

SplitCheck coarea_check(const PixelImage& a, double s) {
  SplitCheck c;
  c.lower = tv_norm(truncate_min(a, s));
  c.upper = tv_norm(truncate_max(a, s));
  c.total = tv_norm(a);
  return c;
}

LevelDecomposition level_sets(const PixelImage& a) {
  require_feasible(a, "level_sets");
  std::vector<double> vals(a.values().data());
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());

  LevelDecomposition d;
  d.thresholds.push_back(0.0);
  for (double v : vals) {
    if (v == 0.0) continue;
    d.thresholds.push_back(v);
    PixelImage layer(a.rows(), a.cols(), a.dx0(), a.dx1());
    for (size_t k = 0; k < a.values().size(); ++k)
      layer.values().data()[k] = a.values().data()[k] >= v ? 1.0 : 0.0;
    d.layers.push_back(std::move(layer));
  }
  return d;
}

PixelImage quantize(const PixelImage& a, int bits) {
  if (bits < 0 || bits > 52) throw std::invalid_argument("quantize: bits outside [0,52]");
  const double scale = std::ldexp(1.0, bits);
  PixelImage out = a;
  for (double& v : out.values().data()) v = std::nearbyint(v * scale) / scale;
  return out;
}

}  // namespace mtv
