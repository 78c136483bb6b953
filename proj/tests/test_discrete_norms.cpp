#include <cmath>

#include "doctest.h"
#include "mtv/discrete_norms.hpp"
#include "mtv/selfcheck.hpp"
#include "mtv/verify.hpp"

using namespace mtv;

namespace {

// Independent brute-force full convolution (plain shifted-kernel double loop
// over the input, opposite nesting to the library routine).
Array2D conv_full_reference(const Array2D& a, const Kernel& h) {
  Array2D out(a.rows() + h.rows - 1, a.cols() + h.cols - 1);
  for (int p = 0; p < a.rows(); ++p)
    for (int q = 0; q < a.cols(); ++q)
      for (int i = 0; i < h.rows; ++i)
        for (int j = 0; j < h.cols; ++j) out(p + i, q + j) += a(p, q) * h.at(i, j);
  return out;
}

PixelImage image2x2(double a00, double a01, double a10, double a11) {
  PixelImage a = PixelImage::dyadic(GridLevel(1));
  a(0, 0) = a00;
  a(0, 1) = a01;
  a(1, 0) = a10;
  a(1, 1) = a11;
  return a;
}

}  // namespace

TEST_CASE("conv_full: all-ones 2x2 against the cross kernel") {
  const Array2D a(2, 2, 1.0);
  const Array2D c = conv_full(a, cross_difference_kernel());
  const double expected[3][3] = {{1, 0, -1}, {0, 0, 0}, {-1, 0, 1}};
  REQUIRE(c.rows() == 3);
  REQUIRE(c.cols() == 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(c(i, j) == expected[i][j]);
}

TEST_CASE("conv_full agrees with the brute-force reference") {
  Rng rng(11);
  for (const Kernel& h :
       {cross_difference_kernel(), axis0_difference_kernel(), axis1_difference_kernel()}) {
    for (int rep = 0; rep < 10; ++rep) {
      Array2D a(1 + rng.uniform_int(8), 1 + rng.uniform_int(8));
      for (double& v : a.data()) v = rng.uniform(-2, 2);
      const Array2D got = conv_full(a, h);
      const Array2D want = conv_full_reference(a, h);
      REQUIRE(got.rows() == want.rows());
      REQUIRE(got.cols() == want.cols());
      for (size_t k = 0; k < got.size(); ++k)
        CHECK(got.data()[k] == doctest::Approx(want.data()[k]).epsilon(1e-14));
    }
  }
}

TEST_CASE("conv_full: outputs of a zero-sum kernel sum to zero") {
  Rng rng(12);
  Array2D a(5, 7);
  for (double& v : a.data()) v = rng.uniform(-1, 1);
  for (const Kernel& h :
       {cross_difference_kernel(), axis0_difference_kernel(), axis1_difference_kernel()}) {
    const Array2D c = conv_full(a, h);
    double s = 0.0;
    for (double v : c.data()) s += v;
    CHECK(std::abs(s) <= 1e-12);
  }
}

TEST_CASE("conv_full: impulse response embeds the kernel") {
  Array2D delta(3, 3);
  delta(1, 1) = 1.0;
  const Kernel h = cross_difference_kernel();
  const Array2D c = conv_full(delta, h);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(c(1 + i, 1 + j) == h.at(i, j));
  CHECK(c(0, 0) == 0.0);
  CHECK(c(3, 3) == 0.0);
}

TEST_CASE("conv_full rejects empty input") { CHECK_THROWS(conv_full(Array2D(), cross_difference_kernel())); }

TEST_CASE("cross kernel is the outer product of the two difference kernels") {
  const Kernel c = cross_difference_kernel();
  const Kernel d0 = axis0_difference_kernel();
  const Kernel d1 = axis1_difference_kernel();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(c.at(i, j) == d0.at(i, 0) * d1.at(0, j));
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) sum += c.w[i];
  CHECK(sum == 0.0);
  CHECK(d0.w[0] + d0.w[1] == 0.0);
  CHECK(d1.w[0] + d1.w[1] == 0.0);
}

TEST_CASE("theta-norm of the unit-square indicator is 4 for every theta") {
  const PixelImage ones = PixelImage::dyadic(GridLevel(1), 1.0);
  for (double theta : {0.0, 0.2, 0.33, 0.5, 1.0})
    CHECK(discrete_theta_norm(ones, theta) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("theta-norm of a single pixel at theta=1 is its corner count") {
  for (int n = 1; n <= 5; ++n) {
    PixelImage a = PixelImage::dyadic(GridLevel(n));
    a(0, 0) = 1.0;
    CHECK(discrete_theta_norm(a, 1.0) == 4.0);
  }
}

TEST_CASE("theta-norm of the zero image is zero") {
  CHECK(discrete_theta_norm(PixelImage::dyadic(GridLevel(3)), 0.5) == 0.0);
}

TEST_CASE("bar-with-bump indicator has corner norm 8") {
  // 3x1 bar plus one pixel centered on top, on the level-2 grid.
  PixelImage a = PixelImage::dyadic(GridLevel(2));
  a(0, 0) = a(1, 0) = a(2, 0) = 1.0;
  a(1, 1) = 1.0;
  CHECK(discrete_theta_norm(a, 1.0) == 8.0);
  CHECK(corner_norm(a) == 8.0);
}

TEST_CASE("theta-norm rejects theta outside [0,1]") {
  const PixelImage a = PixelImage::dyadic(GridLevel(1), 1.0);
  CHECK_THROWS(discrete_theta_norm(a, -0.1));
  CHECK_THROWS(discrete_theta_norm(a, 1.1));
}

TEST_CASE("corner_measure of a single pixel puts unit atoms on its corners") {
  PixelImage a = PixelImage::dyadic(GridLevel(1));
  a(0, 0) = 1.0;  // the pixel [0,1/2]^2
  const AtomicMeasure m = corner_measure(a);
  REQUIRE(m.atoms.size() == 4);
  double sum_amp = 0.0;
  int plus = 0, minus = 0;
  for (const auto& atom : m.atoms) {
    CHECK((atom.amplitude == 1.0 || atom.amplitude == -1.0));
    CHECK(atom.x0 <= 0.5);
    CHECK(atom.x1 <= 0.5);
    sum_amp += atom.amplitude;
    (atom.amplitude > 0 ? plus : minus) += 1;
  }
  CHECK(sum_amp == 0.0);
  CHECK(plus == 2);
  CHECK(minus == 2);
  CHECK(m.total_variation() == 4.0);
}

TEST_CASE("corner_measure of the unit-square indicator sits on the four corners") {
  const PixelImage ones = PixelImage::dyadic(GridLevel(2), 1.0);
  const AtomicMeasure m = corner_measure(ones);
  REQUIRE(m.atoms.size() == 4);
  for (const auto& atom : m.atoms) {
    CHECK((atom.x0 == 0.0 || atom.x0 == 1.0));
    CHECK((atom.x1 == 0.0 || atom.x1 == 1.0));
    CHECK(std::abs(atom.amplitude) == 1.0);
  }
}

TEST_CASE("corner_measure of a polygon indicator has unit amplitudes") {
  Rng rng(13);
  for (int rep = 0; rep < 20; ++rep) {
    // Level sets of a separated rectangle stack are unions of rectangles
    // with no touching corners, so their indicators are polygon indicators.
    const PixelImage a = random_rect_stack_image(rng, GridLevel(3 + rep % 2));
    const LevelDecomposition dec = level_sets(a);
    for (const PixelImage& layer : dec.layers)
      for (const auto& atom : corner_measure(layer).atoms)
        CHECK(std::abs(atom.amplitude) == 1.0);
  }
}

TEST_CASE("corner_measure total variation matches the corner norm") {
  Rng rng(14);
  const PixelImage a = random_uniform_image(rng, GridLevel(4));
  CHECK(corner_measure(a).total_variation() == corner_norm(a));
}

TEST_CASE("gradient_norms of the unit-square indicator gives the perimeter") {
  for (int n = 1; n <= 4; ++n) {
    const PixelImage ones = PixelImage::dyadic(GridLevel(n), 1.0);
    const auto [g0, g1] = gradient_norms(ones);
    CHECK(g0 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(g1 == doctest::Approx(2.0).epsilon(1e-14));
  }
}

TEST_CASE("gradient_norms: separable image splits into boundary and interior jumps") {
  // Rows are identical, so axis-0 jumps exist only where the support meets
  // the zero exterior, while axis-1 jumps follow the column profile.
  PixelImage a = PixelImage::dyadic(GridLevel(2));
  const double profile[4] = {0.25, 0.5, 0.75, 0.25};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = profile[j];
  const auto [g0, g1] = gradient_norms(a);
  double boundary = 0.0;
  for (double c : profile) boundary += 2.0 * c;  // top and bottom edges
  CHECK(g0 == doctest::Approx(0.25 * boundary).epsilon(1e-14));
  double col_jumps = profile[0] + profile[3];  // against the zero exterior
  for (int j = 0; j + 1 < 4; ++j) col_jumps += std::abs(profile[j + 1] - profile[j]);
  CHECK(g1 == doctest::Approx(0.25 * 4 * col_jumps).epsilon(1e-14));
}

TEST_CASE("gradient_norms of the zero image vanish") {
  const auto [g0, g1] = gradient_norms(PixelImage::dyadic(GridLevel(2)));
  CHECK(g0 == 0.0);
  CHECK(g1 == 0.0);
}

TEST_CASE("theta-norm equals its corner/TV split") {
  Rng rng(15);
  for (int rep = 0; rep < 20; ++rep) {
    const PixelImage a = random_uniform_image(rng, GridLevel(1 + rep % 6));
    const double corner = corner_measure(a).total_variation();
    const auto [g0, g1] = gradient_norms(a);
    for (double theta : {0.01, 0.33, 1.0})
      CHECK(std::abs(discrete_theta_norm(a, theta) - (theta * corner + (1 - theta) * (g0 + g1))) <=
            1e-12);
  }
}

TEST_CASE("conv_full_adjoint satisfies the adjoint identity") {
  Rng rng(16);
  for (const Kernel& h :
       {cross_difference_kernel(), axis0_difference_kernel(), axis1_difference_kernel()}) {
    Array2D a(4, 5);
    for (double& v : a.data()) v = rng.uniform(-1, 1);
    Array2D v(4 + h.rows - 1, 5 + h.cols - 1);
    for (double& x : v.data()) x = rng.uniform(-1, 1);
    const double lhs = dot(conv_full(a, h), v);
    const double rhs = dot(a, conv_full_adjoint(v, h, 4, 5));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
  }
}

TEST_CASE("per-axis spacing enters the TV part only") {
  // A rectangular image: corner norm is spacing-free, the TV terms carry
  // the edge lengths of the jumps they measure.
  Array2D vals(2, 4);
  vals(0, 0) = vals(0, 1) = vals(0, 2) = vals(0, 3) = 1.0;
  PixelImage a(vals, 0.5, 0.25);
  CHECK(corner_norm(a) == 4.0);
  const auto [g0, g1] = gradient_norms(a);
  // jumps across axis-0 edges run along x1 (length 0.25 each, 8 of them)
  CHECK(g0 == doctest::Approx(8 * 0.25).epsilon(1e-14));
  CHECK(g1 == doctest::Approx(2 * 0.5).epsilon(1e-14));
}

TEST_CASE("corner-measure amplitude threshold keeps every nonzero atom") {
  PixelImage a = image2x2(0.1, 0.1 + 1e-13, 0.1, 0.1);
  const AtomicMeasure m = corner_measure(a);
  // tiny but nonzero differences are kept, only exact zeros cancel
  double tv = 0.0;
  for (const auto& atom : m.atoms) tv += std::abs(atom.amplitude);
  CHECK(tv == m.total_variation());
  CHECK(m.total_variation() > 0.0);
  const PixelImage c = image2x2(0.3, 0.3, 0.3, 0.3);
  CHECK(corner_measure(c).atoms.size() == 4);  // interior knots cancel exactly
}
