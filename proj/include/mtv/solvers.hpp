#pragma once

#include <functional>
#include <utility>

#include "mtv/operators.hpp"

namespace mtv {

struct SolverConfig {
  enum class StepRule { fixed, backtracking };

  int max_iter = 20000;
  double tol = 1e-9;  // stopping threshold on the residual below
  StepRule step_rule = StepRule::fixed;
  int check_every = 25;

  void validate() const {
    if (max_iter < 1) throw std::invalid_argument("SolverConfig: max_iter must be >= 1");
    if (tol <= 0.0) throw std::invalid_argument("SolverConfig: tol must be > 0");
    if (check_every < 1) throw std::invalid_argument("SolverConfig: check_every must be >= 1");
  }
};

struct SolverReport {
  int iterations = 0;
  std::vector<double> objective_trace;  // primal objective at check points
  double final_objective = 0.0;
  double residual = 0.0;  // relative duality gap (dual APG) or fixed-point residual (primal-dual)
  bool converged = false;
};

/// Outputs of the three difference filters, stacked. The planes have
/// different shapes: for an R x C input the cross plane is (R+1) x (C+1),
/// the axis-0 plane (R+1) x C and the axis-1 plane R x (C+1).
struct StackedCoeffs {
  Array2D cross;
  Array2D d0;
  Array2D d1;
};

/// Weighted stack of the three difference filters used as the analysis
/// operator of the l1 regularizer. Two standard weightings of the same
/// family are provided:
///   reparametrized(theta): (theta, 1 - theta/2, 1 - theta/2), the form the
///     denoiser works in, where the grid factor has been absorbed;
///   native(theta, dx0, dx1): (theta, (1-theta)*dx1, (1-theta)*dx0), whose
///     l1 norm equals discrete_theta_norm exactly.
/// With weights (wc, w0, w1), a reparametrized problem at the native grid
/// equals the native-weight problem at level n via w0 -> w0 * 2^(N-n)
/// (see embedded()); lambda itself is unchanged.
class StackedAnalysisOp {
 public:
  StackedAnalysisOp(double w_cross, double w_axis0, double w_axis1);

  static StackedAnalysisOp reparametrized(double theta);
  static StackedAnalysisOp native(double theta, double dx0, double dx1);
  /// Reparametrized weights for a grid refined `levels_above` times past the
  /// observation level: the TV rows pick up a factor 2^-levels_above.
  static StackedAnalysisOp embedded(double theta, int levels_above);

  StackedCoeffs apply(const Array2D& a) const;
  Array2D adjoint(const StackedCoeffs& v, int rows, int cols) const;
  StackedCoeffs zeros_like(int rows, int cols) const;

  /// l1 norm of the weighted filter outputs (the regularizer value at weight 1).
  double l1(const Array2D& a) const;

  /// Analytic upper bound on |H|^2 (sum of squared kernel l1 norms).
  double lipschitz_bound() const;

  double w_cross() const { return w_cross_; }
  double w_axis0() const { return w_axis0_; }
  double w_axis1() const { return w_axis1_; }

 private:
  double w_cross_;
  double w_axis0_;
  double w_axis1_;
};

/// 1/2 |y - a|^2 + lambda * |H a|_1 with H the given analysis weights; the
/// objective the denoiser minimizes over the nonnegative cone.
double denoise_objective(const PixelImage& y, const PixelImage& a, double lambda,
                         const StackedAnalysisOp& op);

/// Denoiser: minimizes 1/2 |y - a|^2 + lambda |H a|_1 over a >= 0 by
/// accelerated projected gradient on the dual (box-constrained, one dual
/// coordinate per filter output). The primal is recovered as
/// a = max(y - H^T v, 0); the residual is the relative duality gap, and the
/// data term's strong convexity turns it into a solution-error certificate
/// (|a - a*|^2 <= 2 gap).
std::pair<PixelImage, SolverReport> denoise_dual_apg(const DenoiseProblem& prob,
                                                     const SolverConfig& cfg);

/// Same, with explicit analysis weights and an optional dual warm start
/// (clamped into the feasible box).
std::pair<PixelImage, SolverReport> denoise_dual_apg(const PixelImage& y, double lambda,
                                                     const StackedAnalysisOp& op,
                                                     const SolverConfig& cfg,
                                                     const StackedCoeffs* dual_init = nullptr);

/// Smooth, strictly convex data-fit term E(y, z) on measurement vectors.
struct DataFit {
  std::function<double(const std::vector<double>& y, const std::vector<double>& z)> value;
  std::function<std::vector<double>(const std::vector<double>& y, const std::vector<double>& z)>
      gradient;       // gradient in z
  double smoothness;  // Lipschitz constant of the gradient in z

  static DataFit squared();  // 1/2 |y - z|^2
};

/// General solver for  min_{a >= 0}  E(y, B a) + lambda |H a|_1  with B a
/// measurement operator, run as a primal-dual splitting with the cone
/// projection on the primal and the l1 ball box on the dual. Step sizes
/// satisfy sigma * tau * |H|^2 < 1 (with the data-term curvature folded into
/// tau). `init` fixes the primal shape/spacing and the starting point. The
/// residual is the relative fixed-point displacement of the iterates.
std::pair<PixelImage, SolverReport> solve_ip_primal_dual(const MeasurementOp& op,
                                                         const std::vector<double>& y,
                                                         double lambda,
                                                         const StackedAnalysisOp& analysis,
                                                         const DataFit& fit,
                                                         const PixelImage& init,
                                                         const SolverConfig& cfg);

/// Reference solver: projected subgradient descent with the diminishing
/// 2/(k+1) schedule (the data term is 1-strongly convex), returning the
/// best-objective iterate. Deliberately simple and independent of the dual
/// solvers; refuses instances larger than 16 x 16.
PixelImage oracle_solve(const DenoiseProblem& prob, long iters);
PixelImage oracle_solve(const PixelImage& y, double lambda, const StackedAnalysisOp& op,
                        long iters);

struct SweepRow {
  double theta = 0.0;
  double lambda = 0.0;
  double psnr_db = 0.0;
  int iterations = 0;
  double objective = 0.0;
};

struct SweepTable {
  std::vector<SweepRow> rows;  // theta-major, lambda-minor
  size_t best_index = 0;
  size_t theta_count = 0;
  size_t lambda_count = 0;

  const SweepRow& best() const { return rows.at(best_index); }
};

/// Adds seeded noise to the clean image once, denoises at every grid point
/// and scores PSNR against the clean image. Deterministic per seed.
SweepTable sweep_theta_lambda(const PixelImage& y_clean, double sigma,
                              const std::vector<double>& theta_grid,
                              const std::vector<double>& lambda_grid, uint64_t seed,
                              const SolverConfig& cfg);

}  // namespace mtv
