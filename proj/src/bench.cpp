#include "mtv/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

namespace mtv {

namespace {

constexpr double kInvPhi = 0.6180339887498949;

struct ScoredPoint {
  double x = 0.0;
  double psnr = -1.0;
  double lambda = 0.0;
  double objective = 0.0;
  long iterations = 0;
};

// Golden-section maximization of `score` over [lo, hi] with a fixed
// evaluation budget; returns the best point seen.
template <typename F>
ScoredPoint golden_max(double lo, double hi, int evals, F&& score) {
  ScoredPoint best;
  auto consider = [&](double x) {
    ScoredPoint p = score(x);
    p.x = x;
    if (p.psnr > best.psnr) best = p;
    return p.psnr;
  };
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = consider(x1);
  double f2 = consider(x2);
  for (int e = 2; e < evals; ++e) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = consider(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = consider(x1);
    }
  }
  return best;
}

}  // namespace

TuneResult tune_lambda(const PixelImage& noisy, const PixelImage& clean, double theta,
                       double lambda_lo, double lambda_hi, int evals, const SolverConfig& cfg) {
  if (evals < 2) throw std::invalid_argument("tune_lambda: need at least 2 evaluations");
  const StackedAnalysisOp op = StackedAnalysisOp::reparametrized(theta);
  long total_iters = 0;
  int total_evals = 0;
  const ScoredPoint best = golden_max(
      std::log10(lambda_lo), std::log10(lambda_hi), evals, [&](double t) {
        const double lambda = std::pow(10.0, t);
        auto [a, rep] = denoise_dual_apg(noisy, lambda, op, cfg);
        total_iters += rep.iterations;
        ++total_evals;
        ScoredPoint p;
        p.psnr = psnr(a, clean);
        p.lambda = lambda;
        p.objective = rep.final_objective;
        p.iterations = rep.iterations;
        return p;
      });
  TuneResult r;
  r.lambda = best.lambda;
  r.theta = theta;
  r.psnr_db = best.psnr;
  r.objective = best.objective;
  r.iterations = total_iters;
  r.evaluations = total_evals;
  return r;
}

TuneResult tune_theta_lambda(const PixelImage& noisy, const PixelImage& clean, int theta_evals,
                             double lambda_lo, double lambda_hi, int lambda_evals,
                             const SolverConfig& cfg) {
  if (theta_evals < 2) throw std::invalid_argument("tune_theta_lambda: need at least 2 evaluations");
  TuneResult best;
  best.psnr_db = -1.0;
  long total_iters = 0;
  int total_evals = 0;
  golden_max(0.0, 1.0, theta_evals, [&](double theta) {
    const TuneResult r = tune_lambda(noisy, clean, theta, lambda_lo, lambda_hi, lambda_evals, cfg);
    total_iters += r.iterations;
    total_evals += r.evaluations;
    if (r.psnr_db > best.psnr_db) best = r;
    ScoredPoint p;
    p.psnr = r.psnr_db;
    p.lambda = r.lambda;
    p.objective = r.objective;
    return p;
  });
  best.iterations = total_iters;
  best.evaluations = total_evals;
  return best;
}

namespace {

uint64_t mix_seed(uint64_t seed, uint64_t image_index, uint64_t sigma_index) {
  uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (image_index + 1) + 0xBF58476D1CE4E5B9ULL * (sigma_index + 1);
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  return x;
}

}  // namespace

std::vector<BenchImageResult> bench_corpus(const std::vector<std::string>& ids,
                                           const std::vector<PixelImage>& clean,
                                           const BenchOptions& options) {
  if (ids.size() != clean.size()) throw std::invalid_argument("bench_corpus: ids/images mismatch");
  if (clean.empty()) throw std::invalid_argument("bench_corpus: empty corpus");

  struct Task {
    size_t image = 0;
    size_t sigma = 0;
  };
  std::vector<Task> tasks;
  for (size_t s = 0; s < options.sigmas.size(); ++s)
    for (size_t i = 0; i < clean.size(); ++i) tasks.push_back({i, s});
  std::vector<BenchImageResult> results(tasks.size());

  // Per-sigma tuning shares one (lambda, theta) across the corpus: score a
  // parameter choice by the corpus-average PSNR.
  if (options.tune_per_sigma) {
    for (size_t s = 0; s < options.sigmas.size(); ++s) {
      const double sigma = options.sigmas[s];
      std::vector<PixelImage> noisy;
      noisy.reserve(clean.size());
      for (size_t i = 0; i < clean.size(); ++i)
        noisy.push_back(add_gaussian_noise(clean[i], sigma, mix_seed(options.seed, i, s)));

      auto corpus_score = [&](double theta) {
        return golden_max(std::log10(options.lambda_lo), std::log10(options.lambda_hi),
                          options.lambda_evals, [&](double t) {
                            const double lambda = std::pow(10.0, t);
                            const StackedAnalysisOp op = StackedAnalysisOp::reparametrized(theta);
                            double acc = 0.0;
                            for (size_t i = 0; i < clean.size(); ++i) {
                              auto [a, rep] = denoise_dual_apg(noisy[i], lambda, op, options.solver);
                              acc += psnr(a, clean[i]);
                            }
                            ScoredPoint p;
                            p.psnr = acc / static_cast<double>(clean.size());
                            p.lambda = lambda;
                            return p;
                          });
      };
      const ScoredPoint tv = corpus_score(0.0);
      ScoredPoint mtv;
      double mtv_theta = options.fixed_theta;
      if (options.fixed_theta >= 0.0) {
        mtv = corpus_score(options.fixed_theta);
      } else {
        mtv.psnr = -1.0;
        golden_max(0.0, 1.0, options.theta_evals, [&](double theta) {
          const ScoredPoint p = corpus_score(theta);
          if (p.psnr > mtv.psnr) {
            mtv = p;
            mtv_theta = theta;
          }
          return p;
        });
      }
      // Re-run per image at the shared parameters to fill per-image rows.
      for (size_t i = 0; i < clean.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        BenchImageResult& r = results[s * clean.size() + i];
        r.id = ids[i];
        r.sigma = sigma;
        const StackedAnalysisOp tv_op = StackedAnalysisOp::reparametrized(0.0);
        auto [atv, rtv] = denoise_dual_apg(noisy[i], tv.lambda, tv_op, options.solver);
        r.tv = {tv.lambda, 0.0, psnr(atv, clean[i]), rtv.final_objective, rtv.iterations, 1};
        const StackedAnalysisOp mtv_op = StackedAnalysisOp::reparametrized(mtv_theta);
        auto [am, rm] = denoise_dual_apg(noisy[i], mtv.lambda, mtv_op, options.solver);
        r.mtv = {mtv.lambda, mtv_theta, psnr(am, clean[i]), rm.final_objective, rm.iterations, 1};
        r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      }
    }
    return results;
  }

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const size_t k = next.fetch_add(1);
      if (k >= tasks.size()) break;
      const Task t = tasks[k];
      const double sigma = options.sigmas[t.sigma];
      const auto t0 = std::chrono::steady_clock::now();
      const PixelImage noisy =
          add_gaussian_noise(clean[t.image], sigma, mix_seed(options.seed, t.image, t.sigma));
      BenchImageResult r;
      r.id = ids[t.image];
      r.sigma = sigma;
      r.tv = tune_lambda(noisy, clean[t.image], 0.0, options.lambda_lo, options.lambda_hi,
                         options.lambda_evals, options.solver);
      if (options.fixed_theta >= 0.0)
        r.mtv = tune_lambda(noisy, clean[t.image], options.fixed_theta, options.lambda_lo,
                            options.lambda_hi, options.lambda_evals, options.solver);
      else
        r.mtv = tune_theta_lambda(noisy, clean[t.image], options.theta_evals, options.lambda_lo,
                                  options.lambda_hi, options.lambda_evals, options.solver);
      r.runtime_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      results[k] = std::move(r);
    }
  };
  const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(tasks.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  return results;
}

ThetaStats theta_statistics(const std::vector<BenchImageResult>& results, double sigma) {
  ThetaStats st;
  double sum = 0.0, sum2 = 0.0;
  for (const BenchImageResult& r : results) {
    if (r.sigma != sigma) continue;
    sum += r.mtv.theta;
    sum2 += r.mtv.theta * r.mtv.theta;
    ++st.count;
  }
  if (st.count > 0) {
    st.mean = sum / st.count;
    const double var = sum2 / st.count - st.mean * st.mean;
    st.stddev = var > 0 ? std::sqrt(var) : 0.0;
  }
  return st;
}

}  // namespace mtv
