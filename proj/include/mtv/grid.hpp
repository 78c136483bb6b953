#pragma once

#include <cmath>

#include "mtv/array2d.hpp"

namespace mtv {

/// Dyadic grid level: 2^n x 2^n pixels of side 2^-n covering [0,1]^2.
struct GridLevel {
  int n = 0;

  explicit GridLevel(int level = 0) : n(level) {
    if (level < 0) throw std::invalid_argument("GridLevel: level must be >= 0");
  }
  int pixels_per_axis() const { return 1 << n; }
  double pixel_side() const { return std::ldexp(1.0, -n); }
};

/// Coefficient array of a piecewise-constant image. Entry (i,j), 0-based,
/// is the value on the pixel ](i)dx0,(i+1)dx0] x ](j)dx1,(j+1)dx1]; the
/// function is 0 outside the covered rectangle. Spacing is carried per
/// axis so that rectangular images are supported; dyadic squares use
/// dx0 = dx1 = 2^-n.
class PixelImage {
 public:
  PixelImage() = default;
  PixelImage(int rows, int cols, double dx0, double dx1, double fill = 0.0)
      : values_(rows, cols, fill), dx0_(dx0), dx1_(dx1) {
    if (dx0 <= 0 || dx1 <= 0) throw std::invalid_argument("PixelImage: spacing must be positive");
  }
  PixelImage(Array2D values, double dx0, double dx1)
      : values_(std::move(values)), dx0_(dx0), dx1_(dx1) {
    if (dx0 <= 0 || dx1 <= 0) throw std::invalid_argument("PixelImage: spacing must be positive");
  }

  static PixelImage dyadic(GridLevel level, double fill = 0.0) {
    const int m = level.pixels_per_axis();
    return PixelImage(m, m, level.pixel_side(), level.pixel_side(), fill);
  }
  static PixelImage dyadic(GridLevel level, Array2D values) {
    const int m = level.pixels_per_axis();
    if (values.rows() != m || values.cols() != m)
      throw std::invalid_argument("PixelImage: values do not match grid level");
    return PixelImage(std::move(values), level.pixel_side(), level.pixel_side());
  }
  /// Rectangular image with square pixels scaled so the longer axis spans [0,1].
  static PixelImage rectangular(Array2D values) {
    const int m = values.rows() > values.cols() ? values.rows() : values.cols();
    if (m == 0) throw std::invalid_argument("PixelImage: empty image");
    const double side = 1.0 / m;
    return PixelImage(std::move(values), side, side);
  }

  int rows() const { return values_.rows(); }
  int cols() const { return values_.cols(); }
  double dx0() const { return dx0_; }
  double dx1() const { return dx1_; }

  /// True iff rows == cols == 2^n and spacing 2^-n for some n >= 0.
  bool is_dyadic_square() const {
    const int m = rows();
    if (m == 0 || m != cols() || (m & (m - 1)) != 0) return false;
    return dx0_ == 1.0 / m && dx1_ == 1.0 / m;
  }
  GridLevel level() const {
    if (!is_dyadic_square()) throw std::runtime_error("PixelImage: not on a dyadic square grid");
    int n = 0;
    while ((1 << n) < rows()) ++n;
    return GridLevel(n);
  }

  double& operator()(int i, int j) { return values_(i, j); }
  double operator()(int i, int j) const { return values_(i, j); }
  Array2D& values() { return values_; }
  const Array2D& values() const { return values_; }

  /// Scan for the nonnegativity invariant (feasibility of the cone constraint).
  bool is_nonnegative() const {
    for (double x : values_.data())
      if (x < 0) return false;
    return true;
  }

 private:
  Array2D values_;
  double dx0_ = 1.0;
  double dx1_ = 1.0;
};

/// Piecewise-constant function synthesized from a coefficient array. A point
/// belongs to the pixel that is closed on its upper-right boundary, so that
/// evaluation at any pixel-interior point returns the owning coefficient and
/// points outside the covered rectangle evaluate to 0.
class PiecewiseConstantFn {
 public:
  explicit PiecewiseConstantFn(PixelImage image) : image_(std::move(image)) {}

  const PixelImage& image() const { return image_; }

  double evaluate(double x0, double x1) const {
    const int i = owning_index(x0, image_.dx0(), image_.rows());
    if (i < 0) return 0.0;
    const int j = owning_index(x1, image_.dx1(), image_.cols());
    if (j < 0) return 0.0;
    return image_(i, j);
  }

 private:
  static int owning_index(double x, double dx, int count) {
    if (x <= 0.0 || x > dx * count) return -1;
    int i = static_cast<int>(std::ceil(x / dx)) - 1;
    if (i < 0) i = 0;
    if (i >= count) i = count - 1;
    return i;
  }

  PixelImage image_;
};

/// Coefficients -> function (the pixel expansion).
PiecewiseConstantFn synthesize(const PixelImage& coefficients);

/// Function -> coefficients; exact inverse of synthesize on its own grid.
PixelImage analyze(const PiecewiseConstantFn& fn);

/// One level finer: every pixel is split into 4 children carrying the parent
/// value. The represented function is unchanged.
PixelImage refine(const PixelImage& image);

}  // namespace mtv
