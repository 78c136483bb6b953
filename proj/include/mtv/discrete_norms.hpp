#pragma once

#include <utility>

#include "mtv/grid.hpp"

namespace mtv {

/// Small dense convolution kernel (at most 2x2 here).
struct Kernel {
  int rows = 0;
  int cols = 0;
  double w[4] = {0, 0, 0, 0};

  double at(int i, int j) const { return w[i * cols + j]; }
};

/// Double difference across a pixel corner: detects corners of the
/// piecewise-constant image. L1 norm of its output is the corner norm.
Kernel cross_difference_kernel();
/// Difference along the first index (x1 direction).
Kernel axis0_difference_kernel();
/// Difference along the second index (x2 direction).
Kernel axis1_difference_kernel();

/// The three difference filters together with the mixing weight theta.
/// theta = 1 keeps only the corner term; theta = 0 degenerates to plain
/// anisotropic TV, which is outside the norm-equivalence regime but is kept
/// as an operating mode for baselines.
struct FilterBank {
  Kernel cross = cross_difference_kernel();
  Kernel axis0 = axis0_difference_kernel();
  Kernel axis1 = axis1_difference_kernel();
  double theta = 1.0;

  explicit FilterBank(double t) : theta(t) {
    if (t < 0.0 || t > 1.0) throw std::invalid_argument("FilterBank: theta outside [0,1]");
  }
};

/// Finite atomic measure on the grid knots.
struct AtomicMeasure {
  struct Atom {
    double x0 = 0.0;
    double x1 = 0.0;
    double amplitude = 0.0;
  };
  std::vector<Atom> atoms;

  double total_variation() const {
    double s = 0.0;
    for (const Atom& a : atoms) s += a.amplitude < 0 ? -a.amplitude : a.amplitude;
    return s;
  }
};

/// Full linear convolution with zero-padded input. Output size
/// (rows + kr - 1) x (cols + kc - 1). Direct evaluation in a fixed order so
/// results are bit-reproducible.
Array2D conv_full(const Array2D& a, const Kernel& h);

/// Adjoint of conv_full as a map R^{rows x cols} -> R^{out}: given v on the
/// full-convolution index set, returns the rows x cols array with
/// <conv_full(a,h), v> = <a, conv_full_adjoint(v,h,rows,cols)>.
Array2D conv_full_adjoint(const Array2D& v, const Kernel& h, int rows, int cols);

/// Exact discrete theta-norm of the synthesized function:
///   theta * |corner part| + (1 - theta) * (anisotropic TV),
/// where the TV part carries the per-axis pixel side. Matches the
/// continuous-domain norm of the pixel expansion with no discretization
/// error. Throws if theta is outside [0,1].
double discrete_theta_norm(const PixelImage& a, double theta);

/// Atoms of the cross second derivative of the synthesized function. Atoms
/// sit on grid knots; exact zeros are dropped (integer-valued inputs cancel
/// exactly), every nonzero amplitude is kept.
AtomicMeasure corner_measure(const PixelImage& a);

/// Corner norm |[cross derivative]|_M = l1 of the cross-difference output.
double corner_norm(const PixelImage& a);

/// The two components of the anisotropic TV: (|d/dx0 part|, |d/dx1 part|),
/// each weighted by the length of the pixel edge the jump runs along.
std::pair<double, double> gradient_norms(const PixelImage& a);

/// Sum of both gradient components (the anisotropic TV).
double tv_norm(const PixelImage& a);

}  // namespace mtv
