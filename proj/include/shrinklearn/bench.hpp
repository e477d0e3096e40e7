#pragma once

#include <string>
#include <vector>

#include "shrinklearn/model_io.hpp"
#include "shrinklearn/trainer.hpp"

namespace shrinklearn {

/// 10 log10(||x||^2 / ||x - x_hat||^2). Returns +inf when x_hat equals
/// x_true exactly (callers record that as failure-to-compare, not a value).
double snr_db(const Vector& x_true, const Vector& x_hat);

struct TrialRecord {
  std::string estimator;
  double m_over_n = 0.0;
  int trial_index = 0;
  double snr_db = 0.0;  // nan/inf when failed
  bool failed = false;
  double wall_ms = 0.0;
};

struct RateSummary {
  std::string estimator;
  double m_over_n = 0.0;
  double mean_snr_db = 0.0;
  double stderr_db = 0.0;
  int n_trials = 0;  // successful trials included in the mean
};

struct ShapePoint {
  double z;
  double phi;
  double softthresh;
};

/// phi and the matching soft threshold on a uniform grid over the knot range.
std::vector<ShapePoint> export_shape(const SplineNonlinearity& nl,
                                     double threshold, int points = 2001);

struct SweepConfig {
  Index n = 512;
  double rho = 0.2;
  double snr_db = 30.0;
  int train_count = 200;
  int tune_count = 32;  // training examples used for lambda tuning
  std::vector<double> lambda_candidates = {0.005, 0.01, 0.02, 0.05,
                                           0.1,   0.15, 0.2,  0.3};
  int baseline_max_iter = 1000;
  double baseline_tol = 1e-4;
  TrainConfig train;  // per-rate seed is derived from master_seed
  std::vector<std::string> estimators = {"lasso", "learned", "genie"};
  std::uint64_t master_seed = 0;
  int threads = 1;
  const Model* preloaded_model = nullptr;  // skip training when set
};

struct RateArtifacts {
  double m_over_n = 0.0;
  Model learned_model;
  TrainReport report;
  double tuned_lambda = 0.0;
  std::vector<ShapePoint> shape;
};

struct SweepResult {
  std::vector<TrialRecord> records;
  std::vector<RateSummary> summary;
  std::vector<RateArtifacts> artifacts;
};

/// Monte Carlo sweep over measurement rates. Per rate: a seeded training
/// split (lambda tuning + learning) and a disjoint seeded test split on
/// which every estimator is scored. Per-trial failures are recorded, not
/// fatal, unless more than 10% of all trials fail.
SweepResult run_sweep(const std::vector<double>& rates, int per_rate_trials,
                      const SweepConfig& cfg);

// CSV emission. Doubles are printed with %.17g so files round-trip exactly.
void write_records_csv(const std::string& path,
                       const std::vector<TrialRecord>& records);
void write_summary_csv(const std::string& path,
                       const std::vector<RateSummary>& summary);
void write_shape_csv(const std::string& path,
                     const std::vector<ShapePoint>& shape);
void write_curve_csv(const std::string& path,
                     const std::vector<double>& snr_per_iteration);
void write_probe_csv(const std::string& path,
                     const std::vector<ProbePoint>& probe);

/// %.17g formatting used by every CSV writer.
std::string format_double(double v);

}  // namespace shrinklearn
