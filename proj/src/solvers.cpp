#include "mtv/solvers.hpp"

#include <cmath>

namespace mtv {

namespace {

inline double clamp(double x, double lo, double hi) { return x < lo ? lo : (x > hi ? hi : x); }

void clamp_box(StackedCoeffs& v, double bound) {
  for (Array2D* p : {&v.cross, &v.d0, &v.d1})
    for (double& x : p->data()) x = clamp(x, -bound, bound);
}

double dot(const StackedCoeffs& a, const StackedCoeffs& b) {
  return mtv::dot(a.cross, b.cross) + mtv::dot(a.d0, b.d0) + mtv::dot(a.d1, b.d1);
}

double l1(const StackedCoeffs& a) {
  return a.cross.l1_norm() + a.d0.l1_norm() + a.d1.l1_norm();
}

// out = a + s * b, plane by plane
void add_scaled(StackedCoeffs& out, const StackedCoeffs& a, double s, const StackedCoeffs& b) {
  const Array2D* pa[3] = {&a.cross, &a.d0, &a.d1};
  const Array2D* pb[3] = {&b.cross, &b.d0, &b.d1};
  Array2D* po[3] = {&out.cross, &out.d0, &out.d1};
  for (int k = 0; k < 3; ++k)
    for (size_t i = 0; i < po[k]->size(); ++i)
      po[k]->data()[i] = pa[k]->data()[i] + s * pb[k]->data()[i];
}

// out = a - b, plane by plane
void subtract(StackedCoeffs& out, const StackedCoeffs& a, const StackedCoeffs& b) {
  const Array2D* pa[3] = {&a.cross, &a.d0, &a.d1};
  const Array2D* pb[3] = {&b.cross, &b.d0, &b.d1};
  Array2D* po[3] = {&out.cross, &out.d0, &out.d1};
  for (int k = 0; k < 3; ++k)
    for (size_t i = 0; i < po[k]->size(); ++i) po[k]->data()[i] = pa[k]->data()[i] - pb[k]->data()[i];
}

PixelImage clamp_nonneg(const PixelImage& x) {
  PixelImage out = x;
  for (double& v : out.values().data()) v = v > 0.0 ? v : 0.0;
  return out;
}

double half_sq_dist(const Array2D& a, const Array2D& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a.data()[i] - b.data()[i];
    s += d * d;
  }
  return 0.5 * s;
}

}  // namespace

StackedAnalysisOp::StackedAnalysisOp(double w_cross, double w_axis0, double w_axis1)
    : w_cross_(w_cross), w_axis0_(w_axis0), w_axis1_(w_axis1) {
  if (w_cross < 0 || w_axis0 < 0 || w_axis1 < 0)
    throw std::invalid_argument("StackedAnalysisOp: weights must be >= 0");
}

StackedAnalysisOp StackedAnalysisOp::reparametrized(double theta) {
  if (theta < 0.0 || theta > 1.0)
    throw std::invalid_argument("StackedAnalysisOp: theta outside [0,1]");
  return StackedAnalysisOp(theta, 1.0 - theta / 2.0, 1.0 - theta / 2.0);
}

StackedAnalysisOp StackedAnalysisOp::native(double theta, double dx0, double dx1) {
  if (theta < 0.0 || theta > 1.0)
    throw std::invalid_argument("StackedAnalysisOp: theta outside [0,1]");
  // Same axis/edge-length pairing as gradient_norms.
  return StackedAnalysisOp(theta, (1.0 - theta) * dx1, (1.0 - theta) * dx0);
}

StackedAnalysisOp StackedAnalysisOp::embedded(double theta, int levels_above) {
  if (levels_above < 0) throw std::invalid_argument("StackedAnalysisOp: negative level offset");
  const double s = std::ldexp(1.0, -levels_above);
  return StackedAnalysisOp(theta, (1.0 - theta / 2.0) * s, (1.0 - theta / 2.0) * s);
}

StackedCoeffs StackedAnalysisOp::apply(const Array2D& a) const {
  StackedCoeffs out;
  out.cross = conv_full(a, cross_difference_kernel());
  out.d0 = conv_full(a, axis0_difference_kernel());
  out.d1 = conv_full(a, axis1_difference_kernel());
  for (double& x : out.cross.data()) x *= w_cross_;
  for (double& x : out.d0.data()) x *= w_axis0_;
  for (double& x : out.d1.data()) x *= w_axis1_;
  return out;
}

Array2D StackedAnalysisOp::adjoint(const StackedCoeffs& v, int rows, int cols) const {
  Array2D out(rows, cols);
  const Array2D tc = conv_full_adjoint(v.cross, cross_difference_kernel(), rows, cols);
  const Array2D t0 = conv_full_adjoint(v.d0, axis0_difference_kernel(), rows, cols);
  const Array2D t1 = conv_full_adjoint(v.d1, axis1_difference_kernel(), rows, cols);
  for (size_t i = 0; i < out.size(); ++i)
    out.data()[i] = w_cross_ * tc.data()[i] + w_axis0_ * t0.data()[i] + w_axis1_ * t1.data()[i];
  return out;
}

StackedCoeffs StackedAnalysisOp::zeros_like(int rows, int cols) const {
  StackedCoeffs out;
  out.cross = Array2D(rows + 1, cols + 1);
  out.d0 = Array2D(rows + 1, cols);
  out.d1 = Array2D(rows, cols + 1);
  return out;
}

double StackedAnalysisOp::l1(const Array2D& a) const {
  double s = 0.0;
  s += w_cross_ * conv_full(a, cross_difference_kernel()).l1_norm();
  s += w_axis0_ * conv_full(a, axis0_difference_kernel()).l1_norm();
  s += w_axis1_ * conv_full(a, axis1_difference_kernel()).l1_norm();
  return s;
}

double StackedAnalysisOp::lipschitz_bound() const {
  return 16.0 * w_cross_ * w_cross_ + 4.0 * w_axis0_ * w_axis0_ + 4.0 * w_axis1_ * w_axis1_;
}

double denoise_objective(const PixelImage& y, const PixelImage& a, double lambda,
                         const StackedAnalysisOp& op) {
  return half_sq_dist(y.values(), a.values()) + lambda * op.l1(a.values());
}

std::pair<PixelImage, SolverReport> denoise_dual_apg(const DenoiseProblem& prob,
                                                     const SolverConfig& cfg) {
  return denoise_dual_apg(prob.y, prob.lambda, StackedAnalysisOp::reparametrized(prob.theta), cfg);
}

std::pair<PixelImage, SolverReport> denoise_dual_apg(const PixelImage& y, double lambda,
                                                     const StackedAnalysisOp& op,
                                                     const SolverConfig& cfg,
                                                     const StackedCoeffs* dual_init) {
  cfg.validate();
  if (lambda < 0.0) throw std::invalid_argument("denoise_dual_apg: lambda must be >= 0");
  const int R = y.rows(), C = y.cols();
  SolverReport rep;

  if (lambda == 0.0) {
    // The regularizer vanishes; the minimizer is the cone projection of y.
    PixelImage a = clamp_nonneg(y);
    rep.iterations = 0;
    rep.final_objective = denoise_objective(y, a, 0.0, op);
    rep.objective_trace.push_back(rep.final_objective);
    rep.residual = 0.0;
    rep.converged = true;
    return {std::move(a), rep};
  }

  double L = op.lipschitz_bound();
  if (L <= 0.0) L = 1.0;

  StackedCoeffs v = dual_init ? *dual_init : op.zeros_like(R, C);
  clamp_box(v, lambda);
  StackedCoeffs u = v;
  StackedCoeffs diff = op.zeros_like(R, C);
  double t = 1.0;

  auto primal_at = [&](const StackedCoeffs& dual) {
    Array2D at = op.adjoint(dual, R, C);
    PixelImage a(R, C, y.dx0(), y.dx1());
    for (size_t i = 0; i < at.size(); ++i) {
      const double x = y.values().data()[i] - at.data()[i];
      a.values().data()[i] = x > 0.0 ? x : 0.0;
    }
    return a;
  };
  // F(v) = 1/2 |max(y - H^T v, 0)|^2, the (negated, shifted) dual objective.
  auto dual_value = [&](const StackedCoeffs& dual) {
    const PixelImage a = primal_at(dual);
    return 0.5 * a.values().squared_norm();
  };

  PixelImage a = primal_at(v);
  int it = 0;
  bool converged = false;
  double residual = 0.0;
  while (it < cfg.max_iter) {
    ++it;
    const PixelImage au = primal_at(u);
    const StackedCoeffs grad_dir = op.apply(au.values());  // -grad of F at u

    StackedCoeffs v_next = u;
    double step = 1.0 / L;
    if (cfg.step_rule == SolverConfig::StepRule::backtracking) {
      const double fu = 0.5 * au.values().squared_norm();
      for (int bt = 0; bt < 60; ++bt) {
        add_scaled(v_next, u, step, grad_dir);
        clamp_box(v_next, lambda);
        subtract(diff, v_next, u);
        const double lin = -dot(grad_dir, diff);
        const double quad = 0.5 / step * dot(diff, diff);
        if (dual_value(v_next) <= fu + lin + quad + 1e-15 * (1.0 + fu)) break;
        step *= 0.5;
      }
    } else {
      add_scaled(v_next, u, step, grad_dir);
      clamp_box(v_next, lambda);
    }

    // Gradient-based adaptive restart: drop momentum when it points against
    // the current descent direction.
    subtract(diff, v_next, v);
    const bool restart = dot(grad_dir, diff) < 0.0;
    if (restart) {
      t = 1.0;
      u = v_next;
    } else {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      add_scaled(u, v_next, (t - 1.0) / t_next, diff);
      t = t_next;
    }
    v = v_next;

    if (it % cfg.check_every == 0 || it == cfg.max_iter) {
      a = primal_at(v);
      const StackedCoeffs ha = op.apply(a.values());
      const double obj = denoise_objective(y, a, lambda, op);
      double gap = lambda * l1(ha) - dot(ha, v);
      if (gap < 0.0) gap = 0.0;
      residual = gap / (1.0 > std::abs(obj) ? 1.0 : std::abs(obj));
      rep.objective_trace.push_back(obj);
      if (residual <= cfg.tol) {
        converged = true;
        break;
      }
    }
  }

  rep.iterations = it;
  rep.final_objective =
      rep.objective_trace.empty() ? denoise_objective(y, a, lambda, op) : rep.objective_trace.back();
  rep.residual = residual;
  rep.converged = converged;
  return {std::move(a), rep};
}

DataFit DataFit::squared() {
  DataFit f;
  f.value = [](const std::vector<double>& y, const std::vector<double>& z) {
    double s = 0.0;
    for (size_t i = 0; i < y.size(); ++i) {
      const double d = z[i] - y[i];
      s += d * d;
    }
    return 0.5 * s;
  };
  f.gradient = [](const std::vector<double>& y, const std::vector<double>& z) {
    std::vector<double> g(z.size());
    for (size_t i = 0; i < y.size(); ++i) g[i] = z[i] - y[i];
    return g;
  };
  f.smoothness = 1.0;
  return f;
}

std::pair<PixelImage, SolverReport> solve_ip_primal_dual(const MeasurementOp& op,
                                                         const std::vector<double>& y,
                                                         double lambda,
                                                         const StackedAnalysisOp& analysis,
                                                         const DataFit& fit,
                                                         const PixelImage& init,
                                                         const SolverConfig& cfg) {
  cfg.validate();
  if (lambda < 0.0) throw std::invalid_argument("solve_ip_primal_dual: lambda must be >= 0");
  const int R = init.rows(), C = init.cols();
  if (static_cast<size_t>(op.output_dim(R, C)) != y.size())
    throw std::invalid_argument("solve_ip_primal_dual: measurement dimension mismatch");

  const double hs = analysis.lipschitz_bound();  // |H|^2
  const double bnorm = op.norm_bound(R, C);
  const double lf = fit.smoothness * bnorm * bnorm;
  const double sigma = hs > 0.0 ? 1.0 / std::sqrt(hs) : 1.0;
  const double tau = 0.99 / (lf / 2.0 + sigma * hs);
  if (sigma * tau * hs >= 1.0)
    throw std::runtime_error("solve_ip_primal_dual: step sizes violate sigma*tau*|H|^2 < 1");

  PixelImage a = clamp_nonneg(init);
  StackedCoeffs v = analysis.zeros_like(R, C);
  SolverReport rep;

  const bool have_data = !y.empty();
  auto primal_objective = [&](const PixelImage& x) {
    const double data = have_data ? fit.value(y, op.apply(x)) : 0.0;
    return data + lambda * analysis.l1(x.values());
  };

  int it = 0;
  bool converged = false;
  double residual = 0.0;
  while (it < cfg.max_iter) {
    ++it;
    Array2D grad(R, C);
    if (have_data) {
      const std::vector<double> g = fit.gradient(y, op.apply(a));
      grad = op.adjoint(g, R, C, a.dx0(), a.dx1());
    }
    const Array2D hv = analysis.adjoint(v, R, C);

    PixelImage a_next(R, C, a.dx0(), a.dx1());
    double max_da = 0.0;
    for (size_t i = 0; i < a_next.values().size(); ++i) {
      double x = a.values().data()[i] - tau * (grad.data()[i] + hv.data()[i]);
      x = x > 0.0 ? x : 0.0;
      a_next.values().data()[i] = x;
      const double d = std::abs(x - a.values().data()[i]);
      if (d > max_da) max_da = d;
    }

    Array2D bar = a_next.values();
    for (size_t i = 0; i < bar.size(); ++i) bar.data()[i] = 2.0 * bar.data()[i] - a.values().data()[i];
    const StackedCoeffs hbar = analysis.apply(bar);
    double max_dv = 0.0;
    {
      const Array2D* src[3] = {&hbar.cross, &hbar.d0, &hbar.d1};
      Array2D* dst[3] = {&v.cross, &v.d0, &v.d1};
      for (int k = 0; k < 3; ++k)
        for (size_t i = 0; i < dst[k]->size(); ++i) {
          const double prev = dst[k]->data()[i];
          const double next = clamp(prev + sigma * src[k]->data()[i], -lambda, lambda);
          dst[k]->data()[i] = next;
          const double d = std::abs(next - prev);
          if (d > max_dv) max_dv = d;
        }
    }

    const double scale_a = 1.0 > a_next.values().max_abs() ? 1.0 : a_next.values().max_abs();
    const double scale_v = 1.0 > lambda ? 1.0 : lambda;
    residual = std::max(max_da / (tau * scale_a), max_dv / (sigma * scale_v));
    a = std::move(a_next);

    if (it % cfg.check_every == 0 || it == cfg.max_iter) {
      rep.objective_trace.push_back(primal_objective(a));
      if (residual <= cfg.tol) {
        converged = true;
        break;
      }
    }
  }

  rep.iterations = it;
  rep.final_objective = primal_objective(a);
  rep.residual = residual;
  rep.converged = converged;
  return {std::move(a), rep};
}

PixelImage oracle_solve(const DenoiseProblem& prob, long iters) {
  return oracle_solve(prob.y, prob.lambda, StackedAnalysisOp::reparametrized(prob.theta), iters);
}

PixelImage oracle_solve(const PixelImage& y, double lambda, const StackedAnalysisOp& op,
                        long iters) {
  if (y.rows() > 16 || y.cols() > 16)
    throw std::invalid_argument("oracle_solve: instance too large (max 16x16)");
  if (iters < 1) throw std::invalid_argument("oracle_solve: iters must be >= 1");
  const int R = y.rows(), C = y.cols();

  PixelImage a = clamp_nonneg(y);
  PixelImage best = a;
  double best_obj = 1e300;

  StackedCoeffs sgn = op.zeros_like(R, C);
  for (long k = 1; k <= iters; ++k) {
    // The filter outputs serve both the objective of the current iterate and
    // the subgradient of the l1 term.
    const StackedCoeffs ha = op.apply(a.values());
    const double obj = half_sq_dist(y.values(), a.values()) + lambda * l1(ha);
    if (obj < best_obj) {
      best_obj = obj;
      best = a;
    }
    const Array2D* src[3] = {&ha.cross, &ha.d0, &ha.d1};
    Array2D* dst[3] = {&sgn.cross, &sgn.d0, &sgn.d1};
    for (int p = 0; p < 3; ++p)
      for (size_t i = 0; i < dst[p]->size(); ++i) {
        const double x = src[p]->data()[i];
        dst[p]->data()[i] = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
      }
    const Array2D hts = op.adjoint(sgn, R, C);
    const double step = 1.0 / static_cast<double>(k + 1);
    for (size_t i = 0; i < a.values().size(); ++i) {
      const double g = (a.values().data()[i] - y.values().data()[i]) + lambda * hts.data()[i];
      double x = a.values().data()[i] - step * g;
      a.values().data()[i] = x > 0.0 ? x : 0.0;
    }
  }
  const double last = denoise_objective(y, a, lambda, op);
  if (last < best_obj) best = a;
  return best;
}

SweepTable sweep_theta_lambda(const PixelImage& y_clean, double sigma,
                              const std::vector<double>& theta_grid,
                              const std::vector<double>& lambda_grid, uint64_t seed,
                              const SolverConfig& cfg) {
  if (theta_grid.empty() || lambda_grid.empty())
    throw std::invalid_argument("sweep_theta_lambda: empty grid");
  const PixelImage noisy = add_gaussian_noise(y_clean, sigma, seed);

  SweepTable table;
  table.theta_count = theta_grid.size();
  table.lambda_count = lambda_grid.size();
  double best_psnr = -1.0;
  for (double theta : theta_grid) {
    for (double lam : lambda_grid) {
      auto [a, rep] = denoise_dual_apg(noisy, lam, StackedAnalysisOp::reparametrized(theta), cfg);
      SweepRow row;
      row.theta = theta;
      row.lambda = lam;
      row.psnr_db = psnr(a, y_clean);
      row.iterations = rep.iterations;
      row.objective = rep.final_objective;
      if (row.psnr_db > best_psnr) {
        best_psnr = row.psnr_db;
        table.best_index = table.rows.size();
      }
      table.rows.push_back(row);
    }
  }
  return table;
}

}  // namespace mtv
