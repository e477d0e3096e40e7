#include <doctest.h>

#include <cmath>

#include "shrinklearn/bench.hpp"
#include "shrinklearn/datagen.hpp"
#include "shrinklearn/trainer.hpp"

using namespace shrinklearn;

namespace {

std::vector<Instance> tiny_dataset(int count, std::uint64_t seed) {
  DatasetOptions opt;
  opt.n = 16;
  opt.m = 10;
  opt.count = count;
  opt.rho = 0.25;
  opt.snr_db = 30.0;
  opt.master_seed = seed;
  return generate_dataset(opt);
}

}  // namespace

TEST_CASE("fixed grid range sets the spacing directly") {
  const std::vector<TrainingExample> examples =
      build_examples(tiny_dataset(2, 1));
  const GridSpec spec =
      calibrate_grid(examples, 200, GridFixed{-10.0, 10.0}, 0.1, 10);
  CHECK(spec.delta == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(spec.half_range == 10.0);
}

TEST_CASE("fixed grid range must be symmetric and nonempty") {
  const std::vector<TrainingExample> examples =
      build_examples(tiny_dataset(1, 2));
  CHECK_THROWS_AS(calibrate_grid(examples, 10, GridFixed{-1.0, 2.0}, 0.1, 5),
                  std::invalid_argument);
  CHECK_THROWS_AS(calibrate_grid(examples, 10, GridFixed{3.0, 3.0}, 0.1, 5),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      calibrate_grid({}, 10, GridFixed{-1.0, 1.0}, 0.1, 5),
      std::invalid_argument);
}

TEST_CASE("calibrated range tracks the observed pre-activations") {
  const std::vector<Instance> data = tiny_dataset(5, 3);
  const std::vector<TrainingExample> examples = build_examples(data);
  const double lambda = 0.1;
  const int depth = 12;
  const GridSpec spec = calibrate_grid(examples, 100, GridCalibrated{1.5},
                                       lambda, depth);

  // brute recompute over the same sample
  double max_abs = 0.0;
  for (const TrainingExample& ex : examples)
    max_abs = std::max(max_abs,
                       max_abs_preactivation(ex.problem, lambda, depth));
  CHECK(spec.half_range == doctest::Approx(1.5 * max_abs).epsilon(1e-15));
  CHECK(spec.delta == doctest::Approx(spec.half_range / 100).epsilon(1e-15));
}

TEST_CASE("degenerate dynamic range is rejected") {
  // all-zero signals and zero noise give identically zero pre-activations
  Instance inst;
  inst.x_true = Vector::Zero(6);
  inst.H = Matrix::Identity(6, 6);
  inst.y = Vector::Zero(6);
  inst.noise_var = 0.0;
  std::vector<TrainingExample> examples;
  TrainingExample ex;
  ex.problem = build_problem(inst.H, inst.y, FixedGamma{1.0});
  ex.x_true = inst.x_true;
  examples.push_back(std::move(ex));
  CHECK_THROWS_WITH_AS(
      calibrate_grid(examples, 10, GridCalibrated{1.5}, 0.1, 5),
      "calibrate_grid: degenerate dynamic range", NumericalError);
}

TEST_CASE("zero learning rate keeps the initialization") {
  const std::vector<Instance> data = tiny_dataset(4, 4);
  TrainConfig cfg;
  cfg.depth_T = 6;
  cfg.learning_rate_mu = 0.0;
  cfg.batch_size = 2;
  cfg.iterations = 5;
  cfg.grid_K = 30;
  cfg.init_threshold = 0.1;
  cfg.seed = 9;
  cfg.probe_interval = 0;
  const TrainReport report = train(data, cfg);

  const SplineNonlinearity init = fit_soft_threshold(
      30, report.grid.delta, report.effective_init_threshold);
  CHECK(report.learned.coefficients == init.coefficients);
  CHECK(report.snr_per_iteration.size() == 5);
}

TEST_CASE("one full-batch step equals the manual projected-gradient update") {
  const std::vector<Instance> data = tiny_dataset(3, 5);
  TrainConfig cfg;
  cfg.depth_T = 8;
  cfg.learning_rate_mu = 1e-3;
  cfg.batch_size = 3;
  cfg.iterations = 1;
  cfg.grid_K = 25;
  cfg.init_threshold = 0.08;
  cfg.seed = 12;
  cfg.probe_interval = 0;
  const TrainReport report = train(data, cfg);

  // replay the single step by hand: same seed stream, same batch draw
  const std::vector<TrainingExample> examples = build_examples(data);
  const SplineNonlinearity c0 = fit_soft_threshold(
      cfg.grid_K, report.grid.delta, report.effective_init_threshold);
  RngEngine rng = make_engine(derive_seed(cfg.seed, 0x7261ULL));
  std::vector<const TrainingExample*> batch;
  for (int j = 0; j < cfg.batch_size; ++j)
    batch.push_back(&examples[uniform_below(rng, examples.size())]);
  const Vector g = batch_gradient(batch, c0, cfg.depth_T);
  const Vector expected = c0.coefficients - cfg.learning_rate_mu * g;
  CHECK(report.learned.coefficients == expected);
}

TEST_CASE("training is bit-reproducible under a fixed seed") {
  const std::vector<Instance> data = tiny_dataset(6, 6);
  TrainConfig cfg;
  cfg.depth_T = 5;
  cfg.learning_rate_mu = 5e-3;
  cfg.batch_size = 2;
  cfg.iterations = 8;
  cfg.grid_K = 20;
  cfg.init_threshold = 0.1;
  cfg.seed = 77;
  cfg.probe_interval = 2;
  cfg.probe_size = 1;

  const TrainReport a = train(data, cfg);
  const TrainReport b = train(data, cfg);
  CHECK(a.learned.coefficients == b.learned.coefficients);
  CHECK(a.snr_per_iteration == b.snr_per_iteration);
  CHECK(a.final_train_mse == b.final_train_mse);
  REQUIRE(a.probe_snr.size() == b.probe_snr.size());
  for (std::size_t i = 0; i < a.probe_snr.size(); ++i) {
    CHECK(a.probe_snr[i].iteration == b.probe_snr[i].iteration);
    CHECK(a.probe_snr[i].snr_db == b.probe_snr[i].snr_db);
  }
}

TEST_CASE("iterates stay inside the constraint set") {
  const std::vector<Instance> data = tiny_dataset(4, 7);
  TrainConfig cfg;
  cfg.depth_T = 5;
  cfg.learning_rate_mu = 1e-2;
  cfg.batch_size = 1;
  cfg.iterations = 6;
  cfg.grid_K = 15;
  cfg.init_threshold = 0.1;
  cfg.seed = 3;
  cfg.probe_interval = 0;

  SUBCASE("box") {
    cfg.constraint = Box{-0.4, 0.4};
    const TrainReport report = train(data, cfg);
    CHECK(report.learned.coefficients.maxCoeff() <= 0.4);
    CHECK(report.learned.coefficients.minCoeff() >= -0.4);
  }
  SUBCASE("odd symmetry") {
    cfg.constraint = OddSymmetric{};
    const TrainReport report = train(data, cfg);
    const Vector& c = report.learned.coefficients;
    const Index n = c.size();
    for (Index i = 0; i < n; ++i) CHECK(c[i] == -c[n - 1 - i]);
  }
}

TEST_CASE("train validates its configuration") {
  const std::vector<Instance> data = tiny_dataset(2, 8);
  TrainConfig cfg;
  cfg.iterations = 0;
  CHECK_THROWS_AS(train(data, cfg), std::invalid_argument);
  cfg.iterations = 1;
  cfg.grid_K = 1;
  CHECK_THROWS_AS(train(data, cfg), std::invalid_argument);
  CHECK_THROWS_AS(train({}, TrainConfig{}), std::invalid_argument);
}

TEST_CASE("lambda tuning") {
  const std::vector<Instance> data = tiny_dataset(6, 9);
  const std::vector<TrainingExample> examples = build_examples(data);

  SUBCASE("single candidate is returned") {
    CHECK(tune_lasso_lambda(examples, {0.07}) == 0.07);
  }
  SUBCASE("zero wins on a noiseless invertible system") {
    std::vector<Instance> ident(1);
    ident[0].x_true = Vector::Ones(5);
    ident[0].H = Matrix::Identity(5, 5);
    ident[0].y = ident[0].x_true;
    ident[0].noise_var = 0.0;
    std::vector<TrainingExample> ex;
    TrainingExample e;
    e.problem = build_problem(ident[0].H, ident[0].y, FixedGamma{1.0});
    e.x_true = ident[0].x_true;
    ex.push_back(std::move(e));
    // exact recovery at lambda = 0 gives an infinite SNR, so 0 wins
    CHECK(tune_lasso_lambda(ex, {0.0, 0.05, 0.2}) == 0.0);
  }
  SUBCASE("matches exhaustive re-evaluation") {
    const std::vector<double> grid{0.01, 0.03, 0.1, 0.3};
    const double winner = tune_lasso_lambda(examples, grid, 400, 1e-4);

    double best = -1e300;
    double best_lambda = grid.front();
    for (const double lambda : grid) {
      double acc = 0.0;
      for (const TrainingExample& ex : examples) {
        const SoftIstaResult res = soft_threshold_ista(
            ex.problem, lambda, Vector::Zero(ex.problem.n()), 400, 1e-4);
        acc += snr_db(ex.x_true, res.x);
      }
      if (acc / examples.size() > best) {
        best = acc / examples.size();
        best_lambda = lambda;
      }
    }
    CHECK(winner == best_lambda);
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(tune_lasso_lambda(examples, {}), std::invalid_argument);
    CHECK_THROWS_AS(tune_lasso_lambda({}, {0.1}), std::invalid_argument);
  }
}
