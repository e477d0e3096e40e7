#include "shrinklearn/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "shrinklearn/bench.hpp"
#include "shrinklearn/parallel.hpp"

namespace shrinklearn {

std::vector<TrainingExample> build_examples(const std::vector<Instance>& data,
                                            SForm form) {
  std::vector<TrainingExample> out;
  out.reserve(data.size());
  for (const Instance& inst : data) {
    TrainingExample ex;
    ex.problem = build_problem(inst.H, inst.y, AutoGamma{}, form);
    ex.x_true = inst.x_true;
    out.push_back(std::move(ex));
  }
  return out;
}

double max_abs_preactivation(const Problem& p, double lambda, int depth,
                             double tol) {
  const double threshold = p.gamma * lambda;
  Vector x = Vector::Zero(p.n());
  double max_abs = 0.0;
  for (int t = 1; t <= depth; ++t) {
    Vector z = p.apply_S(x) + p.b;
    max_abs = std::max(max_abs, z.cwiseAbs().maxCoeff());
    Vector x_new(z.size());
    for (Index m = 0; m < z.size(); ++m)
      x_new[m] = soft_threshold(z[m], threshold);
    const double change = (x_new - x).norm();
    const double prev_norm = x.norm();
    x = std::move(x_new);
    if (tol >= 0.0 &&
        (change == 0.0 || (prev_norm > 0.0 && change / prev_norm <= tol)))
      break;
  }
  return max_abs;
}

GridSpec calibrate_grid(const std::vector<TrainingExample>& examples, int K,
                        const GridRangePolicy& policy, double lambda,
                        int depth) {
  if (examples.empty())
    throw std::invalid_argument("calibrate_grid: empty training set");
  if (K < 2) throw std::invalid_argument("calibrate_grid: K must be >= 2");

  GridSpec spec;
  if (const GridFixed* fixed = std::get_if<GridFixed>(&policy)) {
    if (!(fixed->hi > fixed->lo))
      throw std::invalid_argument("calibrate_grid: empty fixed range");
    if (fixed->lo != -fixed->hi)
      throw std::invalid_argument("calibrate_grid: fixed range must be symmetric");
    spec.half_range = fixed->hi;
  } else {
    const double safety = std::get<GridCalibrated>(policy).safety_factor;
    if (!(safety > 0.0))
      throw std::invalid_argument("calibrate_grid: safety factor must be positive");
    const std::size_t sample =
        std::min<std::size_t>(examples.size(), 32);
    double max_abs = 0.0;
    for (std::size_t i = 0; i < sample; ++i)
      max_abs = std::max(max_abs, max_abs_preactivation(examples[i].problem,
                                                        lambda, depth));
    if (max_abs == 0.0)
      throw NumericalError("calibrate_grid: degenerate dynamic range");
    spec.half_range = safety * max_abs;
  }
  spec.delta = spec.half_range / K;
  return spec;
}

namespace {

std::vector<Vector> forward_finals(
    const std::vector<const TrainingExample*>& batch,
    const SplineNonlinearity& nl, int depth, int threads) {
  std::vector<Vector> finals(batch.size());
  parallel_for_indexed(batch.size(), threads, [&](std::size_t i) {
    const Vector x0 = Vector::Zero(batch[i]->problem.n());
    finals[i] = ista_forward(batch[i]->problem, nl, x0, depth).x_final;
  });
  return finals;
}

double mean_snr(const std::vector<const TrainingExample*>& batch,
                const std::vector<Vector>& finals) {
  double acc = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i)
    acc += snr_db(batch[i]->x_true, finals[i]);
  return acc / static_cast<double>(batch.size());
}

}  // namespace

double mean_learned_snr(const std::vector<const TrainingExample*>& examples,
                        const SplineNonlinearity& nl, int depth, int threads) {
  if (examples.empty())
    throw std::invalid_argument("mean_learned_snr: empty example list");
  return mean_snr(examples, forward_finals(examples, nl, depth, threads));
}

TrainReport train(const std::vector<Instance>& dataset, const TrainConfig& cfg) {
  if (dataset.empty()) throw std::invalid_argument("train: empty dataset");
  if (cfg.iterations < 1) throw std::invalid_argument("train: iterations must be >= 1");
  if (cfg.batch_size < 1) throw std::invalid_argument("train: batch_size must be >= 1");
  if (cfg.depth_T < 1) throw std::invalid_argument("train: depth_T must be >= 1");
  if (!(cfg.learning_rate_mu >= 0.0))
    throw std::invalid_argument("train: learning rate must be >= 0");
  if (cfg.grid_K < 2) throw std::invalid_argument("train: grid_K must be >= 2");
  if (cfg.probe_size < 0)
    throw std::invalid_argument("train: probe_size must be >= 0");

  const std::vector<TrainingExample> examples = build_examples(dataset);

  // The tail of the dataset is held out as the probe set.
  const std::size_t probe_count =
      cfg.probe_interval > 0
          ? std::min<std::size_t>(cfg.probe_size, examples.size() / 4)
          : 0;
  const std::size_t train_count = examples.size() - probe_count;

  std::vector<const TrainingExample*> probe;
  for (std::size_t i = train_count; i < examples.size(); ++i)
    probe.push_back(&examples[i]);

  double gamma_sum = 0.0;
  for (std::size_t i = 0; i < train_count; ++i)
    gamma_sum += examples[i].problem.gamma;
  const double mean_gamma = gamma_sum / static_cast<double>(train_count);

  TrainReport report;
  report.mean_gamma = mean_gamma;
  report.effective_init_threshold = cfg.init_threshold * mean_gamma;
  report.grid = calibrate_grid(examples, cfg.grid_K, cfg.grid_range,
                               cfg.init_threshold, cfg.depth_T);

  SplineNonlinearity nl = fit_soft_threshold(cfg.grid_K, report.grid.delta,
                                             report.effective_init_threshold);
  nl.coefficients = project_coefficients(nl.coefficients, cfg.constraint);

  RngEngine rng = make_engine(derive_seed(cfg.seed, 0x7261ULL));
  report.snr_per_iteration.reserve(cfg.iterations);

  for (int i = 1; i <= cfg.iterations; ++i) {
    // Batch draws consume the stream first, in batch order.
    std::vector<const TrainingExample*> batch(cfg.batch_size);
    for (int j = 0; j < cfg.batch_size; ++j)
      batch[j] = &examples[uniform_below(rng, train_count)];

    const std::vector<ExampleEval> evals =
        evaluate_batch(batch, nl, cfg.depth_T, cfg.threads);

    double snr_acc = 0.0;
    for (std::size_t j = 0; j < evals.size(); ++j)
      snr_acc += snr_db(batch[j]->x_true, evals[j].x_final);
    report.snr_per_iteration.push_back(snr_acc /
                                       static_cast<double>(evals.size()));

    const Vector g = mean_gradient(evals);
    Vector updated = nl.coefficients - cfg.learning_rate_mu * g;
    updated = project_coefficients(updated, cfg.constraint);
    if (!updated.allFinite()) throw TrainDivergenceError(i, nl.coefficients);
    nl.coefficients = std::move(updated);

    if (!probe.empty() && cfg.probe_interval > 0 &&
        (i % cfg.probe_interval == 0 || i == cfg.iterations)) {
      report.probe_snr.push_back(
          {i, mean_learned_snr(probe, nl, cfg.depth_T, cfg.threads)});
    }
  }

  std::vector<const TrainingExample*> train_ptrs;
  train_ptrs.reserve(train_count);
  for (std::size_t i = 0; i < train_count; ++i)
    train_ptrs.push_back(&examples[i]);
  const std::vector<Vector> finals =
      forward_finals(train_ptrs, nl, cfg.depth_T, cfg.threads);
  double mse_acc = 0.0;
  for (std::size_t i = 0; i < train_count; ++i)
    mse_acc += cost(train_ptrs[i]->x_true, finals[i]);
  report.final_train_mse = mse_acc / static_cast<double>(train_count);

  report.learned = std::move(nl);
  return report;
}

double tune_lasso_lambda(const std::vector<TrainingExample>& examples,
                         const std::vector<double>& candidates, int max_iter,
                         double tol, int threads) {
  if (examples.empty())
    throw std::invalid_argument("tune_lasso_lambda: empty example list");
  if (candidates.empty())
    throw std::invalid_argument("tune_lasso_lambda: empty candidate list");

  std::vector<double> sorted = candidates;
  std::sort(sorted.begin(), sorted.end());

  double best_lambda = sorted.front();
  double best_snr = -std::numeric_limits<double>::infinity();
  for (const double lambda : sorted) {
    if (lambda < 0.0)
      throw std::invalid_argument("tune_lasso_lambda: negative candidate");
    std::vector<double> snrs(examples.size());
    parallel_for_indexed(examples.size(), threads, [&](std::size_t i) {
      const Problem& p = examples[i].problem;
      const SoftIstaResult res = soft_threshold_ista(
          p, lambda, Vector::Zero(p.n()), max_iter, tol);
      snrs[i] = snr_db(examples[i].x_true, res.x);
    });
    double acc = 0.0;
    for (const double s : snrs) acc += s;
    const double mean = acc / static_cast<double>(examples.size());
    if (mean > best_snr) {
      best_snr = mean;
      best_lambda = lambda;
    }
  }
  return best_lambda;
}

}  // namespace shrinklearn
