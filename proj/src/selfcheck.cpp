#include "mtv/selfcheck.hpp"

#include <algorithm>
#include <cmath>

namespace mtv {

PixelImage random_uniform_image(Rng& rng, GridLevel level, double lo, double hi) {
  PixelImage a = PixelImage::dyadic(level);
  for (double& v : a.values().data()) v = rng.uniform(lo, hi);
  return a;
}

namespace {

struct Rect {
  int i0, i1, j0, j1;  // half-open pixel ranges [i0,i1) x [j0,j1)
  bool separated_from(const Rect& o) const {
    // at least one empty pixel between the supports
    return i1 + 1 <= o.i0 || o.i1 + 1 <= i0 || j1 + 1 <= o.j0 || o.j1 + 1 <= j0;
  }
};

Rect random_rect(Rng& rng, int m) {
  const int h = 1 + rng.uniform_int(std::max(1, m / 2));
  const int w = 1 + rng.uniform_int(std::max(1, m / 2));
  const int i0 = rng.uniform_int(m - h + 1);
  const int j0 = rng.uniform_int(m - w + 1);
  return {i0, i0 + h, j0, j0 + w};
}

}  // namespace

PixelImage random_rect_stack_image(Rng& rng, GridLevel level, int groups, int max_depth) {
  const int m = level.pixels_per_axis();
  PixelImage a = PixelImage::dyadic(level);
  std::vector<Rect> bases;
  for (int g = 0; g < groups; ++g) {
    Rect base{0, 0, 0, 0};
    bool placed = false;
    for (int attempt = 0; attempt < 50 && !placed; ++attempt) {
      base = random_rect(rng, m);
      placed = true;
      for (const Rect& other : bases)
        if (!base.separated_from(other)) {
          placed = false;
          break;
        }
    }
    if (!placed) continue;
    bases.push_back(base);

    Rect r = base;
    const int depth = 1 + rng.uniform_int(max_depth);
    for (int d = 0; d < depth; ++d) {
      const double c = rng.uniform(0.2, 1.0);
      for (int i = r.i0; i < r.i1; ++i)
        for (int j = r.j0; j < r.j1; ++j) a(i, j) += c;
      // shrink to a nested sub-rectangle; stop when it degenerates
      const int di0 = rng.uniform_int(2), di1 = rng.uniform_int(2);
      const int dj0 = rng.uniform_int(2), dj1 = rng.uniform_int(2);
      r = {r.i0 + di0, r.i1 - di1, r.j0 + dj0, r.j1 - dj1};
      if (r.i0 >= r.i1 || r.j0 >= r.j1) break;
    }
  }
  return a;
}

PixelImage synthetic_blocky_image(uint64_t seed, int rows, int cols, int num_rects) {
  Rng rng(seed);
  Array2D a(rows, cols, 0.2);
  for (int k = 0; k < num_rects; ++k) {
    const int h = 2 + rng.uniform_int(std::max(1, rows / 2));
    const int w = 2 + rng.uniform_int(std::max(1, cols / 2));
    const int i0 = rng.uniform_int(std::max(1, rows - h + 1));
    const int j0 = rng.uniform_int(std::max(1, cols - w + 1));
    const double v = rng.uniform(0.05, 0.95);
    for (int i = i0; i < std::min(rows, i0 + h); ++i)
      for (int j = j0; j < std::min(cols, j0 + w); ++j) a(i, j) = v;
  }
  return PixelImage::rectangular(std::move(a));
}

namespace {

struct Suite {
  std::vector<CheckResult> results;
  void record(const std::string& name, double worst, double tol, const std::string& detail = "") {
    CheckResult r;
    r.name = name;
    r.worst = worst;
    r.pass = worst <= tol;
    r.detail = detail.empty() ? "max violation " + format_violation(worst) + " (tol " +
                                    format_violation(tol) + ")"
                              : detail;
    results.push_back(std::move(r));
  }
  static std::string format_violation(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
  }
};

double linf_diff(const PixelImage& a, const PixelImage& b) {
  double m = 0.0;
  for (size_t k = 0; k < a.values().size(); ++k)
    m = std::max(m, std::abs(a.values().data()[k] - b.values().data()[k]));
  return m;
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(uint64_t seed, bool inject_fault) {
  Suite suite;
  Rng rng(seed);

  // --- norm exactness: theta-norm equals its corner/TV split ---
  {
    double worst = 0.0;
    for (int i = 0; i < 60; ++i) {
      const GridLevel level(1 + i % 5);
      const PixelImage a = random_uniform_image(rng, level);
      const double corner = corner_measure(a).total_variation();
      const auto [g0, g1] = gradient_norms(a);
      for (double theta : {0.01, 0.33, 1.0}) {
        double split = theta * corner + (1.0 - theta) * (g0 + g1);
        if (inject_fault) split += 1e-3;
        worst = std::max(worst, std::abs(discrete_theta_norm(a, theta) - split));
      }
    }
    suite.record("norm.exact_split", worst, 1e-12);
  }

  // --- norm axioms: homogeneity and triangle inequality ---
  {
    double worst_h = 0.0, worst_t = 0.0;
    for (int i = 0; i < 40; ++i) {
      const GridLevel level(1 + i % 4);
      const PixelImage a = random_uniform_image(rng, level);
      const PixelImage b = random_uniform_image(rng, level);
      const double theta = rng.uniform(0.0, 1.0);
      const double c = rng.uniform(-2.0, 2.0);
      PixelImage ca = a;
      for (double& v : ca.values().data()) v *= c;
      worst_h = std::max(worst_h, std::abs(discrete_theta_norm(ca, theta) -
                                           std::abs(c) * discrete_theta_norm(a, theta)));
      PixelImage ab = a;
      for (size_t k = 0; k < ab.values().size(); ++k) ab.values().data()[k] += b.values().data()[k];
      worst_t = std::max(worst_t, discrete_theta_norm(ab, theta) - discrete_theta_norm(a, theta) -
                                      discrete_theta_norm(b, theta));
    }
    suite.record("norm.homogeneity", worst_h, 1e-12);
    suite.record("norm.triangle", worst_t, 1e-12);
  }

  // --- norm comparison: TV <= 2 |K| * corner norm on the unit square ---
  {
    double worst = 0.0;
    for (int i = 0; i < 40; ++i) {
      const PixelImage a = random_uniform_image(rng, GridLevel(1 + i % 5));
      worst = std::max(worst, tv_norm(a) - 2.0 * corner_norm(a));
    }
    suite.record("norm.tv_le_2corner", worst, 1e-12);
  }

  // --- refinement exactness: same function, same norm, same measurements ---
  {
    double worst_norm = 0.0, worst_eval = 0.0, worst_meas = 0.0;
    for (int i = 0; i < 20; ++i) {
      const GridLevel level(1 + i % 4);
      const PixelImage a = random_uniform_image(rng, level);
      const PixelImage r = refine(a);
      for (double theta : {0.01, 0.33, 1.0})
        worst_norm = std::max(worst_norm, std::abs(discrete_theta_norm(r, theta) -
                                                   discrete_theta_norm(a, theta)));
      const PiecewiseConstantFn fa = synthesize(a), fr = synthesize(r);
      for (int k = 0; k < 500; ++k) {
        const double x0 = rng.uniform(), x1 = rng.uniform();
        worst_eval = std::max(worst_eval, std::abs(fa.evaluate(x0, x1) - fr.evaluate(x0, x1)));
      }
      worst_meas = std::max(worst_meas, linf_diff(measure(r, level), a));
    }
    suite.record("grid.refine_norm_invariant", worst_norm, 1e-12);
    suite.record("grid.refine_pointwise", worst_eval, 0.0);
    suite.record("grid.measure_refine_identity", worst_meas, 0.0);
  }

  // --- downsampling monotonicity (corner, TV, loss) ---
  {
    double worst_c = 0.0, worst_tv = 0.0, worst_loss = 0.0;
    for (int i = 0; i < 60; ++i) {
      const GridLevel level(2 + i % 4);
      const PixelImage a = random_uniform_image(rng, level);
      const PixelImage d = downsample(a);
      worst_c = std::max(worst_c, corner_norm(d) - corner_norm(a));
      worst_tv = std::max(worst_tv, tv_norm(d) - tv_norm(a));
      const GridLevel obs(level.n - 1);
      const PixelImage y = random_uniform_image(rng, obs, -0.2, 1.2);
      const DenoiseProblem prob(y, rng.uniform(0.01, 0.5), rng.uniform(0.0, 1.0));
      worst_loss = std::max(worst_loss, objective(d, prob) - objective(a, prob));
    }
    suite.record("op.downsample_corner_monotone", worst_c, 1e-12);
    suite.record("op.downsample_tv_monotone", worst_tv, 1e-12);
    suite.record("op.downsample_loss_monotone", worst_loss, 1e-12);
  }

  // --- truncation and layer identities (sign-coherent corpus) ---
  {
    double worst_split = 0.0, worst_co = 0.0, worst_ca = 0.0, worst_cake = 0.0;
    double worst_mono = 0.0, worst_rec = 0.0, worst_add = 0.0, worst_sign = 0.0;
    for (int i = 0; i < 60; ++i) {
      const GridLevel level(2 + i % 3);
      const PixelImage a = random_rect_stack_image(rng, level);
      const double top = a.values().max_value();

      std::vector<double> ss;
      for (int k = 0; k < 10; ++k) ss.push_back(rng.uniform(0.0, top * 1.1));
      std::sort(ss.begin(), ss.end());
      double prev_lo = -1.0, prev_hi = 1e300;
      for (double s : ss) {
        const PixelImage lo = truncate_min(a, s);
        const PixelImage hi = truncate_max(a, s);
        PixelImage sum = lo;
        for (size_t k = 0; k < sum.values().size(); ++k)
          sum.values().data()[k] += hi.values().data()[k];
        worst_split = std::max(worst_split, linf_diff(sum, a));

        const SplitCheck co = cocorner_check(a, s);
        worst_co = std::max(worst_co, std::abs(co.lower + co.upper - co.total));
        worst_mono = std::max(worst_mono, prev_lo - co.lower);
        worst_mono = std::max(worst_mono, co.upper - prev_hi);
        prev_lo = co.lower;
        prev_hi = co.upper;

        const SplitCheck ca = coarea_check(a, s);
        worst_ca = std::max(worst_ca, std::abs(ca.lower + ca.upper - ca.total));
      }

      const LevelDecomposition dec = level_sets(a);
      if (!dec.layers.empty()) {
        worst_rec = std::max(worst_rec, linf_diff(dec.reconstruct(), a));
        double cake_tv = 0.0, cake_corner = 0.0;
        for (size_t m = 0; m < dec.layers.size(); ++m) {
          const double step = dec.thresholds[m + 1] - dec.thresholds[m];
          cake_tv += step * tv_norm(dec.layers[m]);
          cake_corner += step * corner_norm(dec.layers[m]);
        }
        worst_cake = std::max(worst_cake, std::abs(cake_tv - tv_norm(a)));
        worst_add = std::max(worst_add, std::abs(cake_corner - corner_norm(a)));

        // shared corner atoms of nested layers carry one sign
        const int kr = a.rows() + 1, kc = a.cols() + 1;
        std::vector<int> sign(static_cast<size_t>(kr) * kc, 0);
        for (const PixelImage& layer : dec.layers) {
          const Array2D d = conv_full(layer.values(), cross_difference_kernel());
          for (int p = 0; p < kr; ++p)
            for (int q = 0; q < kc; ++q) {
              const double v = d(p, q);
              if (v == 0.0) continue;
              const int s = v > 0 ? 1 : -1;
              int& seen = sign[static_cast<size_t>(p) * kc + q];
              if (seen == 0)
                seen = s;
              else if (seen != s)
                worst_sign = std::max(worst_sign, 1.0);
            }
        }
      }
    }
    suite.record("verify.truncation_reconstructs", worst_split, 1e-15);  // one rounding of a-s
    suite.record("verify.cocorner_identity", worst_co, 1e-10);
    suite.record("verify.cocorner_monotone", worst_mono, 1e-12);
    suite.record("verify.coarea_identity", worst_ca, 1e-10);
    suite.record("verify.tv_layer_cake", worst_cake, 1e-10);
    suite.record("verify.level_reconstruct", worst_rec, 1e-14);
    suite.record("verify.corner_layer_additivity", worst_add, 1e-10);
    suite.record("verify.layer_sign_coherent", worst_sign, 0.0);
  }

  // --- analysis operator adjoint ---
  {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const int rows = 2 + rng.uniform_int(12), cols = 2 + rng.uniform_int(12);
      const StackedAnalysisOp op(rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0),
                                 rng.uniform(0.0, 1.0));
      Array2D a(rows, cols);
      for (double& v : a.data()) v = rng.uniform(-1.0, 1.0);
      StackedCoeffs v = op.zeros_like(rows, cols);
      for (Array2D* p : {&v.cross, &v.d0, &v.d1})
        for (double& x : p->data()) x = rng.uniform(-1.0, 1.0);
      const StackedCoeffs ha = op.apply(a);
      const double lhs = mtv::dot(ha.cross, v.cross) + mtv::dot(ha.d0, v.d0) + mtv::dot(ha.d1, v.d1);
      const double rhs = mtv::dot(a, op.adjoint(v, rows, cols));
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
    suite.record("solver.adjoint", worst, 1e-12);
  }

  // --- solver cross-checks on small instances ---
  {
    SolverConfig tight;
    tight.tol = 1e-12;
    tight.max_iter = 100000;

    double worst_obj = 0.0, worst_fix = 0.0;
    for (int i = 0; i < 3; ++i) {
      const PixelImage y = random_uniform_image(rng, GridLevel(2), -0.2, 1.2);
      const double lambda = 0.1, theta = 0.5;
      const DenoiseProblem prob(y, lambda, theta);
      auto [a_apg, rep] = denoise_dual_apg(prob, tight);
      worst_fix = std::max(worst_fix, rep.converged ? rep.residual : 1.0);
      const PixelImage a_ref = oracle_solve(prob, 300000);
      const StackedAnalysisOp op = StackedAnalysisOp::reparametrized(theta);
      worst_obj = std::max(worst_obj, std::abs(denoise_objective(y, a_apg, lambda, op) -
                                               denoise_objective(y, a_ref, lambda, op)));
    }
    suite.record("solver.oracle_agreement", worst_obj, 1e-5);
    suite.record("solver.fixed_point_residual", worst_fix, 1e-11);

    // uniqueness under dual restarts
    {
      const PixelImage y = random_uniform_image(rng, GridLevel(3), -0.2, 1.2);
      const double lambda = 0.15, theta = 0.4;
      const StackedAnalysisOp op = StackedAnalysisOp::reparametrized(theta);
      SolverConfig vt = tight;
      vt.tol = 1e-13;
      vt.max_iter = 400000;
      std::vector<PixelImage> sols;
      for (int k = 0; k < 3; ++k) {
        StackedCoeffs v0 = op.zeros_like(y.rows(), y.cols());
        for (Array2D* p : {&v0.cross, &v0.d0, &v0.d1})
          for (double& x : p->data()) x = rng.uniform(-lambda, lambda);
        sols.push_back(denoise_dual_apg(y, lambda, op, vt, &v0).first);
      }
      double worst = 0.0;
      for (size_t p = 0; p < sols.size(); ++p)
        for (size_t q = p + 1; q < sols.size(); ++q)
          worst = std::max(worst, linf_diff(sols[p], sols[q]));
      suite.record("solver.unique_solution", worst, 1e-6);
    }

    // regularizer value nonincreasing along a lambda ladder (native weights,
    // so the solved penalty is exactly the discrete theta-norm)
    {
      const GridLevel level(3);
      const PixelImage y = random_uniform_image(rng, level, -0.2, 1.2);
      const double theta = 0.5;
      const StackedAnalysisOp op =
          StackedAnalysisOp::native(theta, level.pixel_side(), level.pixel_side());
      double prev = 1e300, worst = 0.0;
      for (int k = 0; k < 10; ++k) {
        const double lambda = 0.02 * (k + 1);
        auto [a, rep] = denoise_dual_apg(y, lambda, op, tight);
        const double norm = discrete_theta_norm(a, theta);
        worst = std::max(worst, norm - prev);
        prev = norm;
      }
      suite.record("solver.lambda_monotone", worst, 1e-9);
    }
  }

  return suite.results;
}

}  // namespace mtv
