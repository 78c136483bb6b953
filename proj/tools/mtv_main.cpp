#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "mtv/bench.hpp"
#include "mtv/io.hpp"
#include "mtv/selfcheck.hpp"
#include "mtv/solvers.hpp"

namespace {

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos <= csv.size()) {
    const size_t comma = csv.find(',', pos);
    const std::string tok = csv.substr(pos, comma == std::string::npos ? comma : comma - pos);
    if (!tok.empty()) out.push_back(std::stod(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  for (double v : parse_list(csv)) out.push_back(static_cast<int>(v));
  return out;
}

struct DenoiseArgs {
  std::string input, output, report;
  double lambda = 0.1, theta = 0.33, tol = 1e-9;
  int max_iter = 20000;
};

int cmd_denoise(const DenoiseArgs& args) {
  const mtv::PixelImage y = mtv::load_image(args.input);
  mtv::SolverConfig cfg;
  cfg.tol = args.tol;
  cfg.max_iter = args.max_iter;
  const mtv::DenoiseProblem prob(y, args.lambda, args.theta);
  const auto t0 = std::chrono::steady_clock::now();
  auto [a, rep] = mtv::denoise_dual_apg(prob, cfg);
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  mtv::save_image(a, args.output);

  mtv::ReportRow row;
  row.image_id = args.input;
  row.sigma = 0.0;
  row.lambda = args.lambda;
  row.theta = args.theta;
  row.psnr_db = mtv::psnr(a, y);
  row.iterations = rep.iterations;
  row.runtime_ms = ms;
  row.objective = rep.final_objective;
  mtv::write_csv({row}, args.report.empty() ? args.output + ".csv" : args.report);

  std::cout << "denoise: objective " << rep.final_objective << ", residual " << rep.residual
            << ", " << rep.iterations << " iterations, " << (rep.converged ? "converged" : "NOT converged")
            << "\n";
  return rep.converged ? 0 : 2;
}

int cmd_verify(uint64_t seed, bool inject_fault) {
  const std::vector<mtv::CheckResult> results = mtv::run_invariant_suite(seed, inject_fault);
  size_t width = 0;
  for (const auto& r : results) width = std::max(width, r.name.size());
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name
              << std::string(width - r.name.size() + 2, ' ') << r.detail << "\n";
  }
  std::cout << (all ? "verify: all checks passed" : "verify: FAILURES detected") << " (seed "
            << seed << ")\n";
  return all ? 0 : 2;
}

struct SweepArgs {
  std::string input, output;
  double sigma = 25.0 / 255.0, tol = 1e-7;
  int max_iter = 4000;
  uint64_t seed = 1;
  std::string theta_grid = "0,0.25,0.5,0.75,1";
  std::string lambda_grid = "0.02,0.05,0.1,0.2";
};

int cmd_sweep(const SweepArgs& args) {
  const std::vector<double> thetas = parse_list(args.theta_grid);
  const std::vector<double> lambdas = parse_list(args.lambda_grid);
  if (thetas.empty() || lambdas.empty()) {
    std::cerr << "sweep: empty parameter grid\n";
    return 1;
  }
  const mtv::PixelImage clean = mtv::load_image(args.input);
  mtv::SolverConfig cfg;
  cfg.tol = args.tol;
  cfg.max_iter = args.max_iter;
  const mtv::SweepTable table =
      mtv::sweep_theta_lambda(clean, args.sigma, thetas, lambdas, args.seed, cfg);

  std::vector<std::vector<std::string>> rows;
  for (const mtv::SweepRow& r : table.rows)
    rows.push_back({mtv::format_number(r.theta), mtv::format_number(r.lambda),
                    mtv::format_number(r.psnr_db), std::to_string(r.iterations),
                    mtv::format_number(r.objective)});
  mtv::write_csv_table({"theta", "lambda", "psnr_db", "iterations", "objective"}, rows,
                       args.output);
  const mtv::SweepRow& best = table.best();
  std::cout << "sweep: best psnr " << best.psnr_db << " dB at theta " << best.theta << ", lambda "
            << best.lambda << " (" << table.rows.size() << " rows -> " << args.output << ")\n";
  return 0;
}

struct RefineArgs {
  std::string input, output;
  std::string levels;
  double lambda = 0.1, theta = 0.33, sigma = 0.0, tol = 1e-11;
  int max_iter = 200000;
  uint64_t seed = 1;
};

int cmd_refine(const RefineArgs& args) {
  mtv::PixelImage y = mtv::load_image(args.input);
  if (!y.is_dyadic_square()) {
    std::cerr << "refine: input must be a 2^N x 2^N image\n";
    return 1;
  }
  if (args.sigma > 0.0) y = mtv::add_gaussian_noise(y, args.sigma, args.seed);
  const mtv::GridLevel native = y.level();
  std::vector<int> levels = parse_int_list(args.levels);
  if (levels.empty()) levels = {native.n, native.n + 1, native.n + 2};
  for (int n : levels)
    if (n < native.n) {
      std::cerr << "refine: level " << n << " is below the native level " << native.n << "\n";
      return 1;
    }

  mtv::SolverConfig cfg;
  cfg.tol = args.tol;
  cfg.max_iter = args.max_iter;

  // Native-level solve fixes the reference objective and measurements. Each
  // finer level solves the same problem in refined coordinates: y refined,
  // lambda scaled by the measurement-unit factor 4^k, TV rows scaled 2^-k.
  auto [a_native, rep_native] = mtv::denoise_dual_apg(y, args.lambda,
                                                      mtv::StackedAnalysisOp::reparametrized(args.theta), cfg);

  std::vector<std::vector<std::string>> rows;
  double obj_min = 1e300, obj_max = -1e300;
  bool deviation_ok = true;
  for (int n : levels) {
    double obj = 0.0, meas_dev = 0.0, min_dev = 0.0;
    int iters = 0;
    bool conv = true;
    if (n == native.n) {
      obj = rep_native.final_objective;
      iters = rep_native.iterations;
      conv = rep_native.converged;
    } else {
      const int k = n - native.n;
      mtv::PixelImage yk = y;
      for (int r = 0; r < k; ++r) yk = mtv::refine(yk);
      const double lam_k = args.lambda * std::ldexp(1.0, 2 * k);
      auto [a_n, rep_n] =
          mtv::denoise_dual_apg(yk, lam_k, mtv::StackedAnalysisOp::embedded(args.theta, k), cfg);
      obj = rep_n.final_objective * std::ldexp(1.0, -2 * k);
      iters = rep_n.iterations;
      conv = rep_n.converged;
      const mtv::PixelImage meas = mtv::measure(a_n, native);
      for (size_t i = 0; i < meas.values().size(); ++i)
        meas_dev = std::max(meas_dev,
                            std::abs(meas.values().data()[i] - a_native.values().data()[i]));
      mtv::PixelImage ref = a_native;
      for (int r = 0; r < k; ++r) ref = mtv::refine(ref);
      for (size_t i = 0; i < ref.values().size(); ++i)
        min_dev = std::max(min_dev, std::abs(ref.values().data()[i] - a_n.values().data()[i]));
    }
    obj_min = std::min(obj_min, obj);
    obj_max = std::max(obj_max, obj);
    deviation_ok = deviation_ok && meas_dev <= 1e-6 && min_dev <= 1e-6 && conv;
    rows.push_back({std::to_string(n), mtv::format_number(obj), mtv::format_number(meas_dev),
                    mtv::format_number(min_dev), std::to_string(iters)});
  }
  if (!args.output.empty())
    mtv::write_csv_table({"level", "objective", "measurement_deviation", "minimizer_deviation",
                          "iterations"},
                         rows, args.output);
  const double spread = obj_max - obj_min;
  std::cout << "refine: objective spread " << spread << " across levels\n";
  for (const auto& r : rows)
    std::cout << "  level " << r[0] << ": objective " << r[1] << ", measurement dev " << r[2]
              << ", minimizer dev " << r[3] << "\n";
  return (spread <= 1e-8 && deviation_ok) ? 0 : 2;
}

struct BenchArgs {
  std::string data_dir, output;
  std::string sigmas = "0.0196078431372549,0.0588235294117647,0.0980392156862745";
  std::string mode = "per-image";
  double fixed_theta = -1.0, tol = 1e-7;
  int max_iter = 4000, jobs = 2, theta_evals = 20, lambda_evals = 14;
  uint64_t seed = 1;
};

int cmd_bench(const BenchArgs& args) {
  std::string dir = args.data_dir;
  if (dir.empty()) {
    const char* env = std::getenv("MTV_DATA_DIR");
    if (env) dir = env;
  }
  if (dir.empty()) {
    std::cerr << "bench: no data directory (use --data-dir or MTV_DATA_DIR)\n";
    return 1;
  }
  std::vector<std::string> ids;
  std::vector<mtv::PixelImage> clean;
  std::vector<std::filesystem::path> paths;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = entry.path().extension().string();
    if (ext == ".pgm" || ext == ".png" || ext == ".PGM" || ext == ".PNG")
      paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  for (const auto& p : paths) {
    ids.push_back(p.filename().string());
    clean.push_back(mtv::load_image(p.string()));
  }
  if (clean.empty()) {
    std::cerr << "bench: no images found in '" << dir << "'\n";
    return 1;
  }

  mtv::BenchOptions options;
  options.sigmas = parse_list(args.sigmas);
  options.seed = args.seed;
  options.fixed_theta = args.fixed_theta;
  options.tune_per_sigma = args.mode == "per-sigma";
  options.jobs = args.jobs;
  options.theta_evals = args.theta_evals;
  options.lambda_evals = args.lambda_evals;
  options.solver.tol = args.tol;
  options.solver.max_iter = args.max_iter;

  const std::vector<mtv::BenchImageResult> results = mtv::bench_corpus(ids, clean, options);

  std::vector<mtv::ReportRow> rows;
  for (const mtv::BenchImageResult& r : results) {
    rows.push_back({r.id, r.sigma, r.tv.lambda, 0.0, r.tv.psnr_db, r.tv.iterations, r.runtime_ms,
                    r.tv.objective});
    rows.push_back({r.id, r.sigma, r.mtv.lambda, r.mtv.theta, r.mtv.psnr_db, r.mtv.iterations,
                    r.runtime_ms, r.mtv.objective});
  }
  if (!args.output.empty()) mtv::write_csv(rows, args.output);

  for (double sigma : options.sigmas) {
    double tv_sum = 0.0, mtv_sum = 0.0;
    int count = 0;
    for (const mtv::BenchImageResult& r : results) {
      if (r.sigma != sigma) continue;
      tv_sum += r.tv.psnr_db;
      mtv_sum += r.mtv.psnr_db;
      ++count;
    }
    if (count == 0) continue;
    const mtv::ThetaStats st = mtv::theta_statistics(results, sigma);
    std::cout << "sigma " << sigma << ": TV " << tv_sum / count << " dB, MTV " << mtv_sum / count
              << " dB (gap " << (mtv_sum - tv_sum) / count << " dB), theta* mean " << st.mean
              << " std " << st.stddev << " over " << count << " images\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mixed-derivative total-variation denoising toolkit"};
  app.require_subcommand(1);

  DenoiseArgs dn;
  CLI::App* denoise = app.add_subcommand("denoise", "denoise one image");
  denoise->add_option("--input", dn.input, "input image (PGM/PNG)")->required();
  denoise->add_option("--output", dn.output, "output image path")->required();
  denoise->add_option("--lambda", dn.lambda, "regularization weight");
  denoise->add_option("--theta", dn.theta, "corner/TV mixing weight in [0,1]");
  denoise->add_option("--tol", dn.tol, "relative duality-gap tolerance");
  denoise->add_option("--max-iter", dn.max_iter, "iteration cap");
  denoise->add_option("--report", dn.report, "CSV report path (default: <output>.csv)");

  uint64_t verify_seed = 1;
  bool inject_fault = false;
  CLI::App* verify = app.add_subcommand("verify", "run the invariant suite");
  verify->add_option("--seed", verify_seed, "corpus seed");
  verify->add_flag("--inject-fault", inject_fault, "corrupt one check (harness self-test)");

  SweepArgs sw;
  CLI::App* sweep = app.add_subcommand("sweep", "theta/lambda grid sweep on one image");
  sweep->add_option("--input", sw.input, "clean image")->required();
  sweep->add_option("--output", sw.output, "CSV output path")->required();
  sweep->add_option("--sigma", sw.sigma, "noise level in intensity units");
  sweep->add_option("--seed", sw.seed, "noise seed");
  sweep->add_option("--theta-grid", sw.theta_grid, "comma-separated theta values");
  sweep->add_option("--lambda-grid", sw.lambda_grid, "comma-separated lambda values");
  sweep->add_option("--tol", sw.tol, "solver tolerance");
  sweep->add_option("--max-iter", sw.max_iter, "solver iteration cap");

  RefineArgs rf;
  CLI::App* refine_cmd = app.add_subcommand("refine", "solve on refined grids and compare");
  refine_cmd->add_option("--input", rf.input, "2^N x 2^N image")->required();
  refine_cmd->add_option("--output", rf.output, "CSV output path");
  refine_cmd->add_option("--levels", rf.levels, "comma-separated grid levels (default N,N+1,N+2)");
  refine_cmd->add_option("--lambda", rf.lambda, "regularization weight");
  refine_cmd->add_option("--theta", rf.theta, "mixing weight");
  refine_cmd->add_option("--sigma", rf.sigma, "optional noise to add first");
  refine_cmd->add_option("--seed", rf.seed, "noise seed");
  refine_cmd->add_option("--tol", rf.tol, "solver tolerance");
  refine_cmd->add_option("--max-iter", rf.max_iter, "solver iteration cap");

  BenchArgs bn;
  CLI::App* bench = app.add_subcommand("bench", "PSNR benchmark over an image directory");
  bench->add_option("--data-dir", bn.data_dir, "directory of grayscale images (or MTV_DATA_DIR)");
  bench->add_option("--output", bn.output, "CSV output path");
  bench->add_option("--sigmas", bn.sigmas, "comma-separated noise levels (intensity units)");
  bench->add_option("--mode", bn.mode, "per-image or per-sigma parameter tuning")
      ->check(CLI::IsMember({"per-image", "per-sigma"}));
  bench->add_option("--theta", bn.fixed_theta, "fix theta instead of tuning");
  bench->add_option("--seed", bn.seed, "noise seed");
  bench->add_option("--jobs", bn.jobs, "worker threads");
  bench->add_option("--theta-evals", bn.theta_evals, "golden-section evaluations for theta");
  bench->add_option("--lambda-evals", bn.lambda_evals, "golden-section evaluations for lambda");
  bench->add_option("--tol", bn.tol, "solver tolerance");
  bench->add_option("--max-iter", bn.max_iter, "solver iteration cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (denoise->parsed()) return cmd_denoise(dn);
    if (verify->parsed()) return cmd_verify(verify_seed, inject_fault);
    if (sweep->parsed()) return cmd_sweep(sw);
    if (refine_cmd->parsed()) return cmd_refine(rf);
    if (bench->parsed()) return cmd_bench(bn);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
