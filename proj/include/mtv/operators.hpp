#pragma once

#include <cstdint>
#include <optional>

#include "mtv/discrete_norms.hpp"
#include "mtv/grid.hpp"

namespace mtv {

/// One level coarser: each output entry is the mean of its 4 children. The
/// image must have even dimensions. Any block mean taken at a coarser level
/// is unchanged by this operation.
PixelImage downsample(const PixelImage& a);

/// Block means of a dyadic-square image at target level N <= n. At the
/// native level this is the identity on coefficients.
PixelImage measure(const PixelImage& a, GridLevel target);

/// Linear measurement operator: either block averaging to a coarser dyadic
/// level or an arbitrary dense matrix acting on the vectorized (row-major)
/// coefficients.
class MeasurementOp {
 public:
  static MeasurementOp block_average(GridLevel target);
  static MeasurementOp general_matrix(Array2D matrix);  // M x (rows*cols)

  std::vector<double> apply(const PixelImage& a) const;
  /// Adjoint into coefficient space of the given shape.
  Array2D adjoint(const std::vector<double>& v, int rows, int cols, double dx0, double dx1) const;

  int output_dim(int rows, int cols) const;
  /// Upper bound on the spectral norm for the given input shape.
  double norm_bound(int rows, int cols) const;
  bool is_block_average() const { return !matrix_.has_value(); }
  GridLevel target_level() const { return target_; }

 private:
  MeasurementOp() = default;
  GridLevel target_{0};
  std::optional<Array2D> matrix_;
};

/// Denoising instance: observation y at its native grid (entries may be
/// negative after noise), regularization weight lambda > 0 (lambda = 0 is
/// accepted and reduces to projection onto the nonnegative cone), and the
/// corner/TV mixing weight theta in [0,1].
struct DenoiseProblem {
  PixelImage y;
  double lambda = 0.0;
  double theta = 1.0;

  DenoiseProblem(PixelImage obs, double lam, double th)
      : y(std::move(obs)), lambda(lam), theta(th) {
    if (lam < 0.0) throw std::invalid_argument("DenoiseProblem: lambda must be >= 0");
    if (th < 0.0 || th > 1.0) throw std::invalid_argument("DenoiseProblem: theta outside [0,1]");
  }
};

/// Loss 1/2 |y - measure(a)|^2 + lambda * theta-norm(a), with a at any level
/// >= the observation level. Throws if a has negative entries (the cone
/// constraint applies to the reconstruction, not to y).
double objective(const PixelImage& a, const DenoiseProblem& prob);

/// i.i.d. Gaussian noise of standard deviation sigma, deterministic per
/// seed (fixed generator and Box-Muller transform, row-major order).
PixelImage add_gaussian_noise(const PixelImage& img, double sigma, uint64_t seed);

/// Peak signal-to-noise ratio in dB for intensities in [0,1], capped at
/// 200 dB (the sentinel for identical images).
double psnr(const PixelImage& x, const PixelImage& ref);

}  // namespace mtv
