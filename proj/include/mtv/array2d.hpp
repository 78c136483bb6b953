#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace mtv {

/// Dense row-major 2-D array of doubles. The first index runs along the
/// x1-axis of the domain, the second along x2.
class Array2D {
 public:
  Array2D() = default;
  Array2D(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), v_(static_cast<size_t>(rows) * cols, fill) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("Array2D: negative size");
  }
  Array2D(int rows, int cols, std::vector<double> values)
      : rows_(rows), cols_(cols), v_(std::move(values)) {
    if (v_.size() != static_cast<size_t>(rows) * cols)
      throw std::invalid_argument("Array2D: value count does not match shape");
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }

  double& operator()(int i, int j) { return v_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return v_[static_cast<size_t>(i) * cols_ + j]; }

  std::vector<double>& data() { return v_; }
  const std::vector<double>& data() const { return v_; }

  bool same_shape(const Array2D& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  double l1_norm() const {
    double s = 0.0;
    for (double x : v_) s += x < 0 ? -x : x;
    return s;
  }
  double squared_norm() const {
    double s = 0.0;
    for (double x : v_) s += x * x;
    return s;
  }
  double max_abs() const {
    double m = 0.0;
    for (double x : v_) {
      const double a = x < 0 ? -x : x;
      if (a > m) m = a;
    }
    return m;
  }
  double min_value() const {
    if (v_.empty()) throw std::runtime_error("Array2D: min of empty array");
    double m = v_[0];
    for (double x : v_)
      if (x < m) m = x;
    return m;
  }
  double max_value() const {
    if (v_.empty()) throw std::runtime_error("Array2D: max of empty array");
    double m = v_[0];
    for (double x : v_)
      if (x > m) m = x;
    return m;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> v_;
};

inline double dot(const Array2D& a, const Array2D& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a.data()[i] * b.data()[i];
  return s;
}

}  // namespace mtv
