#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "shrinklearn/backprop.hpp"
#include "shrinklearn/datagen.hpp"
#include "shrinklearn/errors.hpp"
#include "shrinklearn/spline.hpp"

namespace shrinklearn {

struct GridFixed {
  double lo;
  double hi;  // must equal -lo; the knot grid is symmetric
};
struct GridCalibrated {
  double safety_factor = 1.5;
};
using GridRangePolicy = std::variant<GridFixed, GridCalibrated>;

struct GridSpec {
  double delta = 0.0;
  double half_range = 0.0;  // knots span [-half_range, half_range]
};

struct TrainConfig {
  int depth_T = 200;
  double learning_rate_mu = 1e-4;
  int batch_size = 1;
  int iterations = 1000;
  ConstraintSet constraint = Unconstrained{};
  int grid_K = 200;
  GridRangePolicy grid_range = GridCalibrated{};
  double init_threshold = 0.1;  // lambda; effective threshold is lambda * mean gamma
  std::uint64_t seed = 0;
  int probe_size = 32;      // held out from the tail of the dataset
  int probe_interval = 50;  // 0 disables the probe curve
  int threads = 1;
};

struct ProbePoint {
  int iteration;
  double snr_db;
};

struct TrainReport {
  SplineNonlinearity learned;
  std::vector<double> snr_per_iteration;  // batch SNR at the pre-update coefficients
  double final_train_mse = 0.0;
  std::vector<ProbePoint> probe_snr;
  double mean_gamma = 0.0;
  double effective_init_threshold = 0.0;  // init_threshold * mean_gamma
  GridSpec grid;
};

/// Thrown when coefficients go nonfinite; carries the last finite iterate.
class TrainDivergenceError : public DivergenceError {
 public:
  TrainDivergenceError(int iteration, Vector last_finite)
      : DivergenceError(iteration, "training diverged at iteration " +
                                       std::to_string(iteration)),
        last_finite_(std::move(last_finite)) {}
  const Vector& last_finite_coefficients() const { return last_finite_; }

 private:
  Vector last_finite_;
};

/// Problems (Auto gamma) paired with their true signals.
std::vector<TrainingExample> build_examples(const std::vector<Instance>& data,
                                            SForm form = SForm::Operator);

/// Largest |z^t_m| seen over a soft-threshold ISTA pass started at zero.
double max_abs_preactivation(const Problem& p, double lambda, int depth,
                             double tol = 1e-4);

/// Grid spacing and range. The calibrated policy runs a soft-threshold pass
/// on the first <= 32 examples and takes half_range = safety * max |z|;
/// delta = half_range / K either way.
GridSpec calibrate_grid(const std::vector<TrainingExample>& examples, int K,
                        const GridRangePolicy& policy, double lambda,
                        int depth);

/// Projected-gradient learning of the nonlinearity (batches drawn uniformly
/// with replacement from one seeded stream; fixed iteration budget).
TrainReport train(const std::vector<Instance>& dataset, const TrainConfig& cfg);

/// Candidate maximizing mean soft-threshold-ISTA SNR (ties -> smaller).
double tune_lasso_lambda(const std::vector<TrainingExample>& examples,
                         const std::vector<double>& candidates,
                         int max_iter = 1000, double tol = 1e-4,
                         int threads = 1);

/// Mean SNR of the unrolled estimator over the given examples.
double mean_learned_snr(const std::vector<const TrainingExample*>& examples,
                        const SplineNonlinearity& nl, int depth,
                        int threads = 1);

}  // namespace shrinklearn
