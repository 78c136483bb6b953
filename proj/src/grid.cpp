#include "mtv/grid.hpp"

namespace mtv {

PiecewiseConstantFn synthesize(const PixelImage& coefficients) {
  if (coefficients.values().empty()) throw std::invalid_argument("synthesize: empty image");
  return PiecewiseConstantFn(coefficients);
}

PixelImage analyze(const PiecewiseConstantFn& fn) {
  const PixelImage& src = fn.image();
  PixelImage out(src.rows(), src.cols(), src.dx0(), src.dx1());
  // Midpoint evaluation is an exact quadrature for a function that is
  // constant on each pixel: value * area * (1/area) = value.
  for (int i = 0; i < src.rows(); ++i) {
    const double x0 = (i + 0.5) * src.dx0();
    for (int j = 0; j < src.cols(); ++j) {
      const double x1 = (j + 0.5) * src.dx1();
      out(i, j) = fn.evaluate(x0, x1);
    }
  }
  return out;
}

PixelImage refine(const PixelImage& image) {
  PixelImage out(2 * image.rows(), 2 * image.cols(), image.dx0() / 2, image.dx1() / 2);
  for (int i = 0; i < image.rows(); ++i)
    for (int j = 0; j < image.cols(); ++j) {
      const double v = image(i, j);
      out(2 * i, 2 * j) = v;
      out(2 * i, 2 * j + 1) = v;
      out(2 * i + 1, 2 * j) = v;
      out(2 * i + 1, 2 * j + 1) = v;
    }
  return out;
}

}  // namespace mtv
