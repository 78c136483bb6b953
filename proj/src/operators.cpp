#include "mtv/operators.hpp"

#include <cmath>
#include <random>

namespace mtv {

PixelImage downsample(const PixelImage& a) {
  if (a.rows() < 2 || a.cols() < 2 || a.rows() % 2 != 0 || a.cols() % 2 != 0)
    throw std::invalid_argument("downsample: dimensions must be even and positive");
  PixelImage out(a.rows() / 2, a.cols() / 2, a.dx0() * 2, a.dx1() * 2);
  for (int i = 0; i < out.rows(); ++i)
    for (int j = 0; j < out.cols(); ++j)
      out(i, j) = 0.25 * (a(2 * i, 2 * j) + a(2 * i, 2 * j + 1) + a(2 * i + 1, 2 * j) +
                          a(2 * i + 1, 2 * j + 1));
  return out;
}

PixelImage measure(const PixelImage& a, GridLevel target) {
  const GridLevel n = a.level();
  if (n.n < target.n) throw std::invalid_argument("measure: image is coarser than the target level");
  PixelImage m = a;
  for (int k = n.n; k > target.n; --k) m = downsample(m);
  return m;
}

MeasurementOp MeasurementOp::block_average(GridLevel target) {
  MeasurementOp op;
  op.target_ = target;
  return op;
}

MeasurementOp MeasurementOp::general_matrix(Array2D matrix) {
  MeasurementOp op;
  op.matrix_ = std::move(matrix);
  return op;
}

std::vector<double> MeasurementOp::apply(const PixelImage& a) const {
  if (matrix_) {
    const size_t dim = static_cast<size_t>(a.rows()) * a.cols();
    if (static_cast<size_t>(matrix_->cols()) != dim)
      throw std::invalid_argument("MeasurementOp: matrix width does not match image size");
    std::vector<double> out(matrix_->rows(), 0.0);
    for (int m = 0; m < matrix_->rows(); ++m) {
      double s = 0.0;
      for (size_t k = 0; k < dim; ++k) s += (*matrix_)(m, static_cast<int>(k)) * a.values().data()[k];
      out[m] = s;
    }
    return out;
  }
  const PixelImage y = measure(a, target_);
  return y.values().data();
}

Array2D MeasurementOp::adjoint(const std::vector<double>& v, int rows, int cols, double dx0,
                               double dx1) const {
  Array2D out(rows, cols);
  if (matrix_) {
    if (v.size() != static_cast<size_t>(matrix_->rows()))
      throw std::invalid_argument("MeasurementOp: adjoint input size mismatch");
    for (int m = 0; m < matrix_->rows(); ++m) {
      const double vm = v[m];
      if (vm == 0.0) continue;
      for (size_t k = 0; k < out.size(); ++k)
        out.data()[k] += (*matrix_)(m, static_cast<int>(k)) * vm;
    }
    return out;
  }
  (void)dx0;
  (void)dx1;
  const int m = target_.pixels_per_axis();
  if (rows % m != 0 || cols % m != 0 || rows != cols)
    throw std::invalid_argument("MeasurementOp: shape not refinable to the target level");
  const int f = rows / m;
  if (v.size() != static_cast<size_t>(m) * m)
    throw std::invalid_argument("MeasurementOp: adjoint input size mismatch");
  const double scale = 1.0 / (static_cast<double>(f) * f);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out(i, j) = v[static_cast<size_t>(i / f) * m + j / f] * scale;
  return out;
}

int MeasurementOp::output_dim(int rows, int cols) const {
  if (matrix_) return matrix_->rows();
  (void)rows;
  (void)cols;
  const int m = target_.pixels_per_axis();
  return m * m;
}

double MeasurementOp::norm_bound(int rows, int cols) const {
  if (matrix_) {
    // Frobenius norm bounds the spectral norm.
    return std::sqrt(matrix_->squared_norm());
  }
  const int f = rows / target_.pixels_per_axis();
  (void)cols;
  // Averaging over f*f children contracts the l2 norm by 1/f.
  return f > 0 ? 1.0 / f : 1.0;
}

double objective(const PixelImage& a, const DenoiseProblem& prob) {
  if (!a.is_nonnegative()) throw std::invalid_argument("objective: infeasible (negative entries)");
  const PixelImage m = measure(a, prob.y.level());
  double data = 0.0;
  for (size_t k = 0; k < m.values().size(); ++k) {
    const double d = prob.y.values().data()[k] - m.values().data()[k];
    data += d * d;
  }
  return 0.5 * data + prob.lambda * discrete_theta_norm(a, prob.theta);
}

PixelImage add_gaussian_noise(const PixelImage& img, double sigma, uint64_t seed) {
  if (sigma < 0.0) throw std::invalid_argument("add_gaussian_noise: sigma must be >= 0");
  PixelImage out = img;
  if (sigma == 0.0) return out;
  std::mt19937_64 rng(seed);
  // Explicit Box-Muller so the stream is identical on every platform.
  bool have_spare = false;
  double spare = 0.0;
  auto next_uniform = [&rng]() {
    // in (0,1]
    return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
  };
  auto next_gaussian = [&]() {
    if (have_spare) {
      have_spare = false;
      return spare;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * 3.14159265358979323846 * u2;
    spare = r * std::sin(phi);
    have_spare = true;
    return r * std::cos(phi);
  };
  for (double& v : out.values().data()) v += sigma * next_gaussian();
  return out;
}

double psnr(const PixelImage& x, const PixelImage& ref) {
  if (x.rows() != ref.rows() || x.cols() != ref.cols())
    throw std::invalid_argument("psnr: dimension mismatch");
  double mse = 0.0;
  for (size_t k = 0; k < x.values().size(); ++k) {
    const double d = x.values().data()[k] - ref.values().data()[k];
    mse += d * d;
  }
  mse /= static_cast<double>(x.values().size());
  if (mse <= 0.0) return 200.0;
  const double db = -10.0 * std::log10(mse);
  return db > 200.0 ? 200.0 : db;
}

}  // namespace mtv
