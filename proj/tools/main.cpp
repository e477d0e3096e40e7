// shrinklearn command line: dataset generation, nonlinearity training,
// estimator evaluation, Monte Carlo benchmarking, and gradient checking.
//
// Exit codes: 0 success, 2 validation error, 3 numerical failure, 4 I/O.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shrinklearn/backprop.hpp"
#include "shrinklearn/baselines.hpp"
#include "shrinklearn/bench.hpp"
#include "shrinklearn/datagen.hpp"
#include "shrinklearn/dataset_io.hpp"
#include "shrinklearn/errors.hpp"
#include "shrinklearn/manifest.hpp"
#include "shrinklearn/model_io.hpp"
#include "shrinklearn/trainer.hpp"
#include "shrinklearn/version.hpp"

namespace sl = shrinklearn;
using nlohmann::ordered_json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

std::vector<std::string> g_argv;

/// SHRINKLEARN_SEED overrides --seed when set.
void apply_seed_env(std::uint64_t& seed) {
  const char* env = std::getenv("SHRINKLEARN_SEED");
  if (!env || !*env) return;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0')
    throw std::invalid_argument("SHRINKLEARN_SEED is not an integer: " +
                                std::string(env));
  seed = v;
}

void emit_manifest(const std::string& path, std::uint64_t seed,
                   ordered_json config, std::vector<std::string> inputs,
                   std::vector<std::string> outputs) {
  sl::RunManifest manifest;
  manifest.tool_version = sl::kVersion;
  manifest.argv = g_argv;
  manifest.seed = seed;
  manifest.config = std::move(config);
  manifest.inputs = std::move(inputs);
  manifest.outputs = std::move(outputs);
  sl::write_manifest(path, manifest);
}

sl::ConstraintSet parse_constraint(const std::string& text) {
  if (text == "none") return sl::Unconstrained{};
  if (text == "odd") return sl::OddSymmetric{};
  if (text.rfind("box:", 0) == 0) {
    const std::string rest = text.substr(4);
    const std::size_t sep = rest.find(':');
    if (sep != std::string::npos) {
      try {
        const double lo = std::stod(rest.substr(0, sep));
        const double hi = std::stod(rest.substr(sep + 1));
        if (lo < hi) return sl::Box{lo, hi};
      } catch (const std::exception&) {
      }
    }
  }
  throw std::invalid_argument("bad constraint spec '" + text +
                              "' (use none, odd, or box:LO:HI)");
}

std::string rate_label(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", rate);
  std::string s = buf;
  for (char& ch : s)
    if (ch == '.') ch = 'p';
  return s;
}

// ---------------------------------------------------------------------------
// datagen

struct DatagenArgs {
  sl::DatasetOptions opt;
  std::string out;
};

void run_datagen(const DatagenArgs& args) {
  const std::vector<sl::Instance> instances = sl::generate_dataset(args.opt);
  sl::DatasetHeader header;
  header.n = static_cast<std::uint32_t>(args.opt.n);
  header.m = static_cast<std::uint32_t>(args.opt.m);
  header.count = static_cast<std::uint32_t>(args.opt.count);
  header.master_seed = args.opt.master_seed;
  sl::save_dataset(args.out, header, instances);

  ordered_json config{{"n", args.opt.n},
                      {"m", args.opt.m},
                      {"count", args.opt.count},
                      {"rho", args.opt.rho},
                      {"snr_db", args.opt.snr_db},
                      {"seed", args.opt.master_seed},
                      {"fixed_h", args.opt.fixed_h}};
  emit_manifest(args.out + ".manifest.json", args.opt.master_seed,
                std::move(config), {}, {args.out});
  std::cout << "wrote " << args.opt.count << " instances to " << args.out
            << "\n";
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  std::string dataset;
  std::string out;
  std::string curve;
  std::string probe_curve;
  sl::TrainConfig cfg;
  double init_lambda = -1.0;  // < 0 means tune
  std::vector<double> lambda_grid{0.005, 0.01, 0.02, 0.05, 0.1, 0.15, 0.2, 0.3};
  int tune_count = 32;
  std::vector<double> range;  // empty or {lo, hi}
  double safety = 1.5;
  std::string constraint = "none";
};

void run_train(TrainArgs& args) {
  const sl::Dataset ds = sl::load_dataset(args.dataset);
  args.cfg.constraint = parse_constraint(args.constraint);
  if (args.range.empty()) {
    args.cfg.grid_range = sl::GridCalibrated{args.safety};
  } else {
    args.cfg.grid_range = sl::GridFixed{args.range[0], args.range[1]};
  }

  double lambda = args.init_lambda;
  if (lambda < 0.0) {
    const std::size_t tune_n = std::min<std::size_t>(
        ds.instances.size(),
        static_cast<std::size_t>(std::max(1, args.tune_count)));
    const std::vector<sl::Instance> slice(ds.instances.begin(),
                                          ds.instances.begin() + tune_n);
    lambda = sl::tune_lasso_lambda(sl::build_examples(slice), args.lambda_grid,
                                   1000, 1e-4, args.cfg.threads);
    std::cout << "tuned lambda = " << lambda << "\n";
  }
  args.cfg.init_threshold = lambda;

  if (args.curve.empty()) args.curve = args.out + ".curve.csv";
  if (args.probe_curve.empty()) args.probe_curve = args.out + ".probe.csv";

  ordered_json config{{"dataset", args.dataset},
                      {"depth_T", args.cfg.depth_T},
                      {"mu", args.cfg.learning_rate_mu},
                      {"batch_size", args.cfg.batch_size},
                      {"iterations", args.cfg.iterations},
                      {"grid_K", args.cfg.grid_K},
                      {"init_lambda", lambda},
                      {"constraint", args.constraint},
                      {"probe_size", args.cfg.probe_size},
                      {"probe_interval", args.cfg.probe_interval},
                      {"seed", args.cfg.seed},
                      {"threads", args.cfg.threads}};

  sl::TrainReport report;
  try {
    report = sl::train(ds.instances, args.cfg);
  } catch (const sl::TrainDivergenceError& e) {
    const std::string snapshot_path = args.out + ".diverged.json";
    ordered_json snapshot{{"iteration", e.iteration()}};
    const sl::Vector& c = e.last_finite_coefficients();
    snapshot["last_finite_coefficients"] =
        std::vector<double>(c.data(), c.data() + c.size());
    std::ofstream snap(snapshot_path);
    snap << snapshot.dump(2) << "\n";
    std::cerr << "training diverged at iteration " << e.iteration()
              << "; last finite coefficients in " << snapshot_path << "\n";
    throw;
  }

  sl::Model model;
  model.nonlinearity = report.learned;
  model.init_threshold = report.effective_init_threshold;
  sl::save_model(args.out, model);
  sl::write_curve_csv(args.curve, report.snr_per_iteration);

  std::vector<std::string> outputs{args.out, args.curve};
  if (!report.probe_snr.empty()) {
    sl::write_probe_csv(args.probe_curve, report.probe_snr);
    outputs.push_back(args.probe_curve);
  }
  emit_manifest(args.out + ".manifest.json", args.cfg.seed, std::move(config),
                {args.dataset}, std::move(outputs));

  std::cout << "trained " << args.cfg.iterations << " iterations"
            << "; grid delta = " << report.grid.delta
            << ", range = " << report.grid.half_range
            << ", final train MSE = " << report.final_train_mse << "\n";
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string dataset;
  std::string model;
  std::vector<std::string> estimators{"learned"};
  double lambda = -1.0;
  int depth = 200;
  int max_iter = 1000;
  double tol = 1e-4;
  std::string out;
  std::uint64_t seed = 0;
  int threads = 1;
};

void run_eval(const EvalArgs& args) {
  const sl::Dataset ds = sl::load_dataset(args.dataset);

  bool wants_learned = false, wants_lasso = false;
  for (const std::string& e : args.estimators) {
    if (e == "learned") wants_learned = true;
    else if (e == "lasso") wants_lasso = true;
    else if (e != "genie")
      throw std::invalid_argument("unknown estimator: " + e);
  }
  if (wants_lasso && args.lambda < 0.0)
    throw std::invalid_argument("--lambda is required for the lasso estimator");

  sl::Model model;
  if (wants_learned) {
    if (args.model.empty())
      throw std::invalid_argument("--model is required for the learned estimator");
    model = sl::load_model(args.model);
  }

  std::ofstream os(args.out);
  if (!os) throw sl::IoError("cannot open for writing: " + args.out);
  os << "estimator,trial,snr_db,status\n";

  struct Acc {
    double sum = 0.0;
    int n = 0;
  };
  std::map<std::string, Acc> means;
  for (std::size_t i = 0; i < ds.instances.size(); ++i) {
    const sl::Instance& inst = ds.instances[i];
    std::optional<sl::Problem> problem;
    if (wants_learned || wants_lasso)
      problem = sl::build_problem(inst.H, inst.y, sl::AutoGamma{},
                                  sl::SForm::Operator);
    for (const std::string& name : args.estimators) {
      std::string status = "ok";
      double snr = std::numeric_limits<double>::quiet_NaN();
      try {
        sl::Vector x_hat;
        if (name == "learned") {
          x_hat = sl::ista_forward(*problem, model.nonlinearity,
                                   sl::Vector::Zero(problem->n()), args.depth)
                      .x_final;
        } else if (name == "lasso") {
          x_hat = sl::fista_lasso(*problem, args.lambda, args.max_iter,
                                  args.tol)
                      .x_hat;
        } else {
          x_hat = sl::genie_mmse(inst).x_hat;
        }
        snr = sl::snr_db(inst.x_true, x_hat);
        if (std::isinf(snr)) status = "exact_recovery";
      } catch (const std::exception&) {
        status = "error";
      }
      os << name << ',' << i << ',' << sl::format_double(snr) << ',' << status
         << '\n';
      if (status == "ok") {
        means[name].sum += snr;
        means[name].n += 1;
      }
    }
  }
  if (!os) throw sl::IoError("write failed: " + args.out);
  os.close();

  ordered_json config{{"dataset", args.dataset}, {"model", args.model},
                      {"estimators", args.estimators}, {"lambda", args.lambda},
                      {"depth", args.depth},        {"max_iter", args.max_iter},
                      {"tol", args.tol}};
  std::vector<std::string> inputs{args.dataset};
  if (!args.model.empty()) inputs.push_back(args.model);
  emit_manifest(args.out + ".manifest.json", args.seed, std::move(config),
                std::move(inputs), {args.out});

  for (const auto& [name, acc] : means)
    std::cout << name << ": mean SNR "
              << (acc.n ? acc.sum / acc.n : std::nan("")) << " dB over "
              << acc.n << " instances\n";
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
  std::vector<double> rates{0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  int trials = 100;
  sl::SweepConfig cfg;
  std::string out_dir;
  std::string model_path;
};

void run_bench(BenchArgs& args) {
  namespace fs = std::filesystem;
  fs::create_directories(args.out_dir);

  sl::Model preloaded;
  if (!args.model_path.empty()) {
    preloaded = sl::load_model(args.model_path);
    args.cfg.preloaded_model = &preloaded;
  }

  const sl::SweepResult result = sl::run_sweep(args.rates, args.trials, args.cfg);

  const std::string records_path = (fs::path(args.out_dir) / "records.csv").string();
  const std::string summary_path = (fs::path(args.out_dir) / "summary.csv").string();
  sl::write_records_csv(records_path, result.records);
  sl::write_summary_csv(summary_path, result.summary);

  std::vector<std::string> outputs{records_path, summary_path};
  for (std::size_t i = 0; i < result.artifacts.size(); ++i) {
    const sl::RateArtifacts& art = result.artifacts[i];
    const std::string label = rate_label(args.rates[i]);
    if (!art.shape.empty()) {
      const std::string shape_path =
          (fs::path(args.out_dir) / ("shape_" + label + ".csv")).string();
      sl::write_shape_csv(shape_path, art.shape);
      outputs.push_back(shape_path);
    }
    if (args.cfg.preloaded_model == nullptr &&
        art.learned_model.nonlinearity.coefficients.size() > 0) {
      const std::string model_path =
          (fs::path(args.out_dir) / ("model_" + label + ".json")).string();
      sl::save_model(model_path, art.learned_model);
      outputs.push_back(model_path);
      if (!art.report.snr_per_iteration.empty()) {
        const std::string curve_path =
            (fs::path(args.out_dir) / ("curve_" + label + ".csv")).string();
        sl::write_curve_csv(curve_path, art.report.snr_per_iteration);
        outputs.push_back(curve_path);
      }
      if (!art.report.probe_snr.empty()) {
        const std::string probe_path =
            (fs::path(args.out_dir) / ("probe_" + label + ".csv")).string();
        sl::write_probe_csv(probe_path, art.report.probe_snr);
        outputs.push_back(probe_path);
      }
    }
  }

  ordered_json config{{"rates", args.rates},
                      {"trials", args.trials},
                      {"n", args.cfg.n},
                      {"rho", args.cfg.rho},
                      {"snr_db", args.cfg.snr_db},
                      {"train_count", args.cfg.train_count},
                      {"tune_count", args.cfg.tune_count},
                      {"lambda_grid", args.cfg.lambda_candidates},
                      {"estimators", args.cfg.estimators},
                      {"depth_T", args.cfg.train.depth_T},
                      {"mu", args.cfg.train.learning_rate_mu},
                      {"batch_size", args.cfg.train.batch_size},
                      {"iterations", args.cfg.train.iterations},
                      {"grid_K", args.cfg.train.grid_K},
                      {"seed", args.cfg.master_seed},
                      {"threads", args.cfg.threads},
                      {"model", args.model_path}};
  std::vector<std::string> inputs;
  if (!args.model_path.empty()) inputs.push_back(args.model_path);
  emit_manifest((fs::path(args.out_dir) / "manifest.json").string(),
                args.cfg.master_seed, std::move(config), std::move(inputs),
                std::move(outputs));

  for (const sl::RateSummary& s : result.summary)
    std::cout << s.estimator << " @ M/N=" << s.m_over_n << ": "
              << s.mean_snr_db << " dB (stderr " << s.stderr_db << ", n="
              << s.n_trials << ")\n";
}

// ---------------------------------------------------------------------------
// gradcheck

struct GradcheckArgs {
  sl::Index n = 16;
  sl::Index m = 8;
  double rho = 0.2;
  double snr_db = 30.0;
  int depth = 10;
  int grid_k = 20;
  int instances = 20;
  double lambda = 0.1;
  double fd_step = 1e-6;
  double fail_threshold = 1e-5;
  double safety = 1.5;
  std::uint64_t seed = 0;
  std::string manifest = "gradcheck.manifest.json";
};

int run_gradcheck(const GradcheckArgs& args) {
  sl::DatasetOptions opt;
  opt.n = args.n;
  opt.m = args.m;
  opt.count = args.instances;
  opt.rho = args.rho;
  opt.snr_db = args.snr_db;
  opt.master_seed = args.seed;
  const std::vector<sl::Instance> instances = sl::generate_dataset(opt);
  const std::vector<sl::TrainingExample> examples = sl::build_examples(instances);

  const sl::GridSpec grid =
      sl::calibrate_grid(examples, args.grid_k, sl::GridCalibrated{args.safety},
                         args.lambda, args.depth);

  double max_rel_err = 0.0;
  for (const sl::TrainingExample& ex : examples) {
    const double threshold = ex.problem.gamma * args.lambda;
    const sl::SplineNonlinearity nl =
        sl::fit_soft_threshold(args.grid_k, grid.delta, threshold);
    const sl::IterateTrace trace = sl::ista_forward(
        ex.problem, nl, sl::Vector::Zero(ex.problem.n()), args.depth);
    const sl::Vector bp = sl::gradient(ex.problem, nl, trace, ex.x_true);
    const sl::Vector fd = sl::finite_difference_gradient(
        ex.problem, nl, ex.x_true, args.depth, args.fd_step);
    max_rel_err = std::max(max_rel_err, sl::max_relative_error(bp, fd));
  }

  const bool pass = max_rel_err <= args.fail_threshold;
  std::cout << "gradcheck: max_rel_err = " << sl::format_double(max_rel_err)
            << " over " << args.instances << " instances (threshold "
            << sl::format_double(args.fail_threshold) << ") "
            << (pass ? "PASS" : "FAIL") << "\n";

  ordered_json config{{"n", args.n},
                      {"m", args.m},
                      {"rho", args.rho},
                      {"snr_db", args.snr_db},
                      {"depth", args.depth},
                      {"grid_k", args.grid_k},
                      {"instances", args.instances},
                      {"lambda", args.lambda},
                      {"fd_step", args.fd_step},
                      {"fail_threshold", args.fail_threshold},
                      {"seed", args.seed},
                      {"max_rel_err", max_rel_err},
                      {"pass", pass}};
  emit_manifest(args.manifest, args.seed, std::move(config), {}, {});
  return pass ? 0 : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  g_argv.assign(argv, argv + argc);

  CLI::App app{"Learned-shrinkage ISTA: data generation, training, "
               "evaluation, and benchmarking"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Config file (INI/TOML); flags override it");
  app.set_version_flag("--version", sl::kVersion);

  DatagenArgs dg;
  CLI::App* datagen = app.add_subcommand("datagen", "Generate a synthetic dataset");
  datagen->add_option("--n", dg.opt.n, "Signal length N")->capture_default_str();
  datagen->add_option("--m", dg.opt.m, "Measurement count M")->required();
  datagen->add_option("--rho", dg.opt.rho, "Sparsity ratio in (0,1]")
      ->capture_default_str();
  datagen->add_option("--snr-db", dg.opt.snr_db, "Measurement SNR target (dB)")
      ->capture_default_str();
  datagen->add_option("--count", dg.opt.count, "Number of instances")->required();
  datagen->add_option("--seed", dg.opt.master_seed, "Master seed")
      ->capture_default_str();
  datagen->add_flag("--fixed-h", dg.opt.fixed_h,
                    "Draw one H and reuse it for every instance");
  datagen->add_option("--out", dg.out, "Output dataset file")->required();

  TrainArgs tr;
  CLI::App* train = app.add_subcommand("train", "Learn the nonlinearity");
  train->add_option("--dataset", tr.dataset, "Training dataset file")
      ->required()->check(CLI::ExistingFile);
  train->add_option("--out", tr.out, "Output model file")->required();
  train->add_option("--curve", tr.curve, "Learning-curve CSV path");
  train->add_option("--probe-curve", tr.probe_curve, "Probe-curve CSV path");
  train->add_option("--t", tr.cfg.depth_T, "Unrolled depth T")
      ->capture_default_str()->check(CLI::PositiveNumber);
  train->add_option("--mu", tr.cfg.learning_rate_mu, "Learning rate")
      ->capture_default_str();
  train->add_option("--batch-size", tr.cfg.batch_size, "Examples per step")
      ->capture_default_str()->check(CLI::PositiveNumber);
  train->add_option("--iterations", tr.cfg.iterations, "Training iterations")
      ->capture_default_str()->check(CLI::PositiveNumber);
  train->add_option("--grid-k", tr.cfg.grid_K, "Knots per side (K)")
      ->capture_default_str()->check(CLI::Range(2, 1 << 20));
  train->add_option("--safety", tr.safety,
                    "Calibration safety factor for the grid range")
      ->capture_default_str();
  train->add_option("--range", tr.range,
                    "Fixed symmetric grid range: LO HI (overrides --safety)")
      ->expected(2);
  train->add_option("--init-lambda", tr.init_lambda,
                    "Initialization lambda (omit to tune)");
  train->add_option("--lambda-grid", tr.lambda_grid, "Tuning candidates")
      ->delimiter(',');
  train->add_option("--tune-count", tr.tune_count,
                    "Examples used for lambda tuning")
      ->capture_default_str();
  train->add_option("--constraint", tr.constraint,
                    "Coefficient constraint: none, odd, or box:LO:HI")
      ->capture_default_str();
  train->add_option("--probe-size", tr.cfg.probe_size, "Held-out probe size")
      ->capture_default_str();
  train->add_option("--probe-interval", tr.cfg.probe_interval,
                    "Probe every k iterations (0 disables)")
      ->capture_default_str();
  train->add_option("--seed", tr.cfg.seed, "Training seed")->capture_default_str();
  train->add_option("--threads", tr.cfg.threads, "Worker threads")
      ->capture_default_str();

  EvalArgs ev;
  CLI::App* eval = app.add_subcommand("eval", "Evaluate estimators on a dataset");
  eval->add_option("--dataset", ev.dataset, "Dataset file")
      ->required()->check(CLI::ExistingFile);
  eval->add_option("--model", ev.model, "Model file (for learned)");
  eval->add_option("--estimators", ev.estimators,
                   "Comma list of learned,lasso,genie")
      ->delimiter(',')->capture_default_str();
  eval->add_option("--lambda", ev.lambda, "Lasso lambda");
  eval->add_option("--t", ev.depth, "Unrolled depth for learned")
      ->capture_default_str()->check(CLI::PositiveNumber);
  eval->add_option("--max-iter", ev.max_iter, "Lasso iteration cap")
      ->capture_default_str();
  eval->add_option("--tol", ev.tol, "Lasso relative-change tolerance")
      ->capture_default_str();
  eval->add_option("--out", ev.out, "Output CSV")->required();
  eval->add_option("--seed", ev.seed, "Recorded seed (eval is deterministic)")
      ->capture_default_str();
  eval->add_option("--threads", ev.threads, "Worker threads")
      ->capture_default_str();

  BenchArgs bn;
  CLI::App* bench = app.add_subcommand(
      "bench", "Monte Carlo SNR sweep over measurement rates");
  bench->add_option("--rates", bn.rates, "Measurement rates M/N")
      ->delimiter(',')->capture_default_str();
  bench->add_option("--trials", bn.trials, "Test trials per rate")
      ->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--n", bn.cfg.n, "Signal length N")->capture_default_str();
  bench->add_option("--rho", bn.cfg.rho, "Sparsity ratio")->capture_default_str();
  bench->add_option("--snr-db", bn.cfg.snr_db, "Measurement SNR (dB)")
      ->capture_default_str();
  bench->add_option("--train-count", bn.cfg.train_count,
                    "Training instances per rate")
      ->capture_default_str();
  bench->add_option("--tune-count", bn.cfg.tune_count,
                    "Examples used for lambda tuning")
      ->capture_default_str();
  bench->add_option("--lambda-grid", bn.cfg.lambda_candidates,
                    "Tuning candidates")
      ->delimiter(',')->capture_default_str();
  bench->add_option("--max-iter", bn.cfg.baseline_max_iter,
                    "Baseline iteration cap")
      ->capture_default_str();
  bench->add_option("--tol", bn.cfg.baseline_tol,
                    "Baseline relative-change tolerance")
      ->capture_default_str();
  bench->add_option("--estimators", bn.cfg.estimators,
                    "Comma list of lasso,learned,genie")
      ->delimiter(',')->capture_default_str();
  bench->add_option("--t", bn.cfg.train.depth_T, "Unrolled depth T")
      ->capture_default_str();
  bench->add_option("--mu", bn.cfg.train.learning_rate_mu, "Learning rate")
      ->capture_default_str();
  bench->add_option("--batch-size", bn.cfg.train.batch_size, "Examples per step")
      ->capture_default_str();
  bench->add_option("--iterations", bn.cfg.train.iterations,
                    "Training iterations")
      ->capture_default_str();
  bench->add_option("--grid-k", bn.cfg.train.grid_K, "Knots per side (K)")
      ->capture_default_str();
  bench->add_option("--probe-interval", bn.cfg.train.probe_interval,
                    "Probe every k iterations (0 disables)")
      ->capture_default_str();
  bench->add_option("--model", bn.model_path,
                    "Preload a model instead of per-rate training");
  bench->add_option("--seed", bn.cfg.master_seed, "Master seed")
      ->capture_default_str();
  bench->add_option("--threads", bn.cfg.threads, "Worker threads")
      ->capture_default_str();
  bench->add_option("--out-dir", bn.out_dir, "Output directory")->required();

  GradcheckArgs gc;
  CLI::App* gradcheck = app.add_subcommand(
      "gradcheck", "Check the coefficient gradient against finite differences");
  gradcheck->add_option("--n", gc.n, "Signal length")->capture_default_str();
  gradcheck->add_option("--m", gc.m, "Measurements")->capture_default_str();
  gradcheck->add_option("--rho", gc.rho, "Sparsity ratio")->capture_default_str();
  gradcheck->add_option("--snr-db", gc.snr_db, "Measurement SNR (dB)")
      ->capture_default_str();
  gradcheck->add_option("--t", gc.depth, "Unrolled depth")->capture_default_str();
  gradcheck->add_option("--grid-k", gc.grid_k, "Knots per side")
      ->capture_default_str();
  gradcheck->add_option("--instances", gc.instances, "Instances to check")
      ->capture_default_str()->check(CLI::PositiveNumber);
  gradcheck->add_option("--lambda", gc.lambda, "Initialization lambda")
      ->capture_default_str();
  gradcheck->add_option("--fd-step", gc.fd_step, "Finite-difference step")
      ->capture_default_str();
  gradcheck->add_option("--fail-threshold", gc.fail_threshold,
                        "Max relative error accepted")
      ->capture_default_str();
  gradcheck->add_option("--seed", gc.seed, "Master seed")->capture_default_str();
  gradcheck->add_option("--manifest", gc.manifest, "Manifest path")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }

  try {
    if (*datagen) {
      apply_seed_env(dg.opt.master_seed);
      run_datagen(dg);
    } else if (*train) {
      apply_seed_env(tr.cfg.seed);
      run_train(tr);
    } else if (*eval) {
      apply_seed_env(ev.seed);
      run_eval(ev);
    } else if (*bench) {
      apply_seed_env(bn.cfg.master_seed);
      run_bench(bn);
    } else if (*gradcheck) {
      apply_seed_env(gc.seed);
      return run_gradcheck(gc);
    }
  } catch (const sl::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const sl::DivergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const sl::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid arguments: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
