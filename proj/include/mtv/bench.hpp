#pragma once

#include <string>

#include "mtv/solvers.hpp"

namespace mtv {

struct TuneResult {
  double lambda = 0.0;
  double theta = 0.0;
  double psnr_db = 0.0;
  double objective = 0.0;
  long iterations = 0;   // total solver iterations spent
  int evaluations = 0;   // number of (lambda, theta) points tried
};

/// Best lambda for a fixed theta by golden-section search on log10(lambda),
/// maximizing PSNR against the clean image.
TuneResult tune_lambda(const PixelImage& noisy, const PixelImage& clean, double theta,
                       double lambda_lo, double lambda_hi, int evals, const SolverConfig& cfg);

/// Joint tuning: golden-section on theta over [0,1] (20 evaluations by
/// default), each scored by the inner lambda search.
TuneResult tune_theta_lambda(const PixelImage& noisy, const PixelImage& clean, int theta_evals,
                             double lambda_lo, double lambda_hi, int lambda_evals,
                             const SolverConfig& cfg);

struct BenchImageResult {
  std::string id;
  double sigma = 0.0;
  TuneResult tv;    // theta fixed at 0
  TuneResult mtv;   // theta tuned (or fixed by the caller)
  double runtime_ms = 0.0;
};

struct BenchOptions {
  std::vector<double> sigmas{5.0 / 255.0, 15.0 / 255.0, 25.0 / 255.0};
  uint64_t seed = 1;
  int theta_evals = 20;
  int lambda_evals = 14;
  double lambda_lo = 1e-4;
  double lambda_hi = 1.0;
  double fixed_theta = -1.0;  // >= 0: skip theta tuning and use this value
  bool tune_per_sigma = false;  // tune (lambda, theta) on corpus-average PSNR instead of per image
  int jobs = 1;
  SolverConfig solver;

  BenchOptions() {
    solver.tol = 1e-7;
    solver.max_iter = 4000;
  }
};

/// Runs TV (theta = 0) and the mixed-norm method over the corpus for every
/// noise level. Noise is seeded per (image, sigma); images are processed by
/// a bounded worker pool and results come back in corpus order.
std::vector<BenchImageResult> bench_corpus(const std::vector<std::string>& ids,
                                           const std::vector<PixelImage>& clean,
                                           const BenchOptions& options);

struct ThetaStats {
  double mean = 0.0;
  double stddev = 0.0;
  int count = 0;
};

/// Mean/std of the tuned theta values at one noise level.
ThetaStats theta_statistics(const std::vector<BenchImageResult>& results, double sigma);

}  // namespace mtv
