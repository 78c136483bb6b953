#include "mtv/discrete_norms.hpp"

namespace mtv {

Kernel cross_difference_kernel() {
  Kernel k;
  k.rows = 2;
  k.cols = 2;
  k.w[0] = 1.0;
  k.w[1] = -1.0;
  k.w[2] = -1.0;
  k.w[3] = 1.0;
  return k;
}

Kernel axis0_difference_kernel() {
  Kernel k;
  k.rows = 2;
  k.cols = 1;
  k.w[0] = 1.0;
  k.w[1] = -1.0;
  return k;
}

Kernel axis1_difference_kernel() {
  Kernel k;
  k.rows = 1;
  k.cols = 2;
  k.w[0] = 1.0;
  k.w[1] = -1.0;
  return k;
}

Array2D conv_full(const Array2D& a, const Kernel& h) {
  if (a.empty()) throw std::invalid_argument("conv_full: empty input");
  const int R = a.rows(), C = a.cols();
  Array2D out(R + h.rows - 1, C + h.cols - 1);
  for (int i = 0; i < out.rows(); ++i) {
    for (int j = 0; j < out.cols(); ++j) {
      double s = 0.0;
      for (int p = 0; p < h.rows; ++p) {
        const int ia = i - p;
        if (ia < 0 || ia >= R) continue;
        for (int q = 0; q < h.cols; ++q) {
          const int ja = j - q;
          if (ja < 0 || ja >= C) continue;
          s += a(ia, ja) * h.at(p, q);
        }
      }
      out(i, j) = s;
    }
  }
  return out;
}

Array2D conv_full_adjoint(const Array2D& v, const Kernel& h, int rows, int cols) {
  if (v.rows() != rows + h.rows - 1 || v.cols() != cols + h.cols - 1)
    throw std::invalid_argument("conv_full_adjoint: shape mismatch");
  Array2D out(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      double s = 0.0;
      for (int p = 0; p < h.rows; ++p)
        for (int q = 0; q < h.cols; ++q) s += v(i + p, j + q) * h.at(p, q);
      out(i, j) = s;
    }
  return out;
}

double discrete_theta_norm(const PixelImage& a, double theta) {
  if (theta < 0.0 || theta > 1.0)
    throw std::invalid_argument("discrete_theta_norm: theta outside [0,1]");
  const auto [g0, g1] = gradient_norms(a);
  return theta * corner_norm(a) + (1.0 - theta) * (g0 + g1);
}

AtomicMeasure corner_measure(const PixelImage& a) {
  const Array2D d = conv_full(a.values(), cross_difference_kernel());
  AtomicMeasure m;
  // Knot (i * dx0, j * dx1) receives the cross difference of the four pixels
  // around it; output index (i,j) of the full convolution is that knot.
  for (int i = 0; i < d.rows(); ++i)
    for (int j = 0; j < d.cols(); ++j) {
      const double amp = d(i, j);
      if (amp != 0.0) m.atoms.push_back({i * a.dx0(), j * a.dx1(), amp});
    }
  return m;
}

double corner_norm(const PixelImage& a) {
  return conv_full(a.values(), cross_difference_kernel()).l1_norm();
}

std::pair<double, double> gradient_norms(const PixelImage& a) {
  // A jump between pixels adjacent along x0 runs along an edge of length
  // dx1, and vice versa.
  const double g0 = a.dx1() * conv_full(a.values(), axis0_difference_kernel()).l1_norm();
  const double g1 = a.dx0() * conv_full(a.values(), axis1_difference_kernel()).l1_norm();
  return {g0, g1};
}

double tv_norm(const PixelImage& a) {
  const auto [g0, g1] = gradient_norms(a);
  return g0 + g1;
}

}  // namespace mtv
