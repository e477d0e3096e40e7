#include "shrinklearn/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "shrinklearn/baselines.hpp"
#include "shrinklearn/errors.hpp"
#include "shrinklearn/parallel.hpp"

namespace shrinklearn {

double snr_db(const Vector& x_true, const Vector& x_hat) {
  if (x_true.size() != x_hat.size())
    throw std::invalid_argument("snr_db: length mismatch");
  const double signal = x_true.squaredNorm();
  if (signal == 0.0) throw std::invalid_argument("snr_db: zero x_true");
  const double err = (x_true - x_hat).squaredNorm();
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(signal / err);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<ShapePoint> export_shape(const SplineNonlinearity& nl,
                                     double threshold, int points) {
  if (points < 2) throw std::invalid_argument("export_shape: points must be >= 2");
  const double r = nl.grid_halfwidth * nl.delta;
  std::vector<ShapePoint> shape;
  shape.reserve(points);
  for (int i = 0; i < points; ++i) {
    const double z = -r + 2.0 * r * i / (points - 1);
    shape.push_back({z, eval_phi(nl, z), soft_threshold(z, threshold)});
  }
  return shape;
}

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
};

constexpr std::uint64_t kTrainDomain = 1;
constexpr std::uint64_t kTestDomain = 2;
constexpr std::uint64_t kTrainSeedDomain = 3;

}  // namespace

SweepResult run_sweep(const std::vector<double>& rates, int per_rate_trials,
                      const SweepConfig& cfg) {
  if (rates.empty()) throw std::invalid_argument("run_sweep: empty rate list");
  if (per_rate_trials < 1)
    throw std::invalid_argument("run_sweep: trials must be >= 1");
  for (const double r : rates)
    if (!(r > 0.0 && r <= 1.0))
      throw std::invalid_argument("run_sweep: rates must lie in (0, 1]");
  if (cfg.estimators.empty())
    throw std::invalid_argument("run_sweep: no estimators selected");
  for (const std::string& e : cfg.estimators)
    if (e != "lasso" && e != "learned" && e != "genie")
      throw std::invalid_argument("run_sweep: unknown estimator " + e);

  const bool wants_learned =
      std::find(cfg.estimators.begin(), cfg.estimators.end(), "learned") !=
      cfg.estimators.end();
  const bool wants_lasso =
      std::find(cfg.estimators.begin(), cfg.estimators.end(), "lasso") !=
      cfg.estimators.end();

  SweepResult result;
  for (std::size_t rate_idx = 0; rate_idx < rates.size(); ++rate_idx) {
    const double rate = rates[rate_idx];
    const Index m = std::max<Index>(1, std::llround(rate * cfg.n));
    const double m_over_n = static_cast<double>(m) / static_cast<double>(cfg.n);

    // Extra instances cover the trainer's probe holdout so learning still
    // sees exactly train_count examples.
    const int probe_extra = cfg.train.probe_interval > 0
                                ? std::min(cfg.train.probe_size,
                                           cfg.train_count / 3)
                                : 0;
    DatasetOptions train_opt;
    train_opt.n = cfg.n;
    train_opt.m = m;
    train_opt.count = cfg.train_count + probe_extra;
    train_opt.rho = cfg.rho;
    train_opt.snr_db = cfg.snr_db;
    train_opt.master_seed = derive_seed(cfg.master_seed, rate_idx, kTrainDomain);

    DatasetOptions test_opt = train_opt;
    test_opt.count = per_rate_trials;
    test_opt.master_seed = derive_seed(cfg.master_seed, rate_idx, kTestDomain);

    const std::vector<Instance> train_set = generate_dataset(train_opt);
    const std::vector<Instance> test_set = generate_dataset(test_opt);

    // Disjointness of the split is asserted, not assumed.
    std::unordered_set<std::uint64_t> train_hashes;
    for (const Instance& inst : train_set) train_hashes.insert(instance_hash(inst));
    for (const Instance& inst : test_set)
      if (train_hashes.count(instance_hash(inst)))
        throw NumericalError("run_sweep: train/test splits intersect");

    RateArtifacts art;
    art.m_over_n = m_over_n;

    const bool needs_tuning =
        wants_lasso || (wants_learned && cfg.preloaded_model == nullptr);
    double tuned_lambda = 0.1;
    if (needs_tuning) {
      const std::size_t tune_n = std::min<std::size_t>(
          train_set.size(),
          static_cast<std::size_t>(std::max(1, cfg.tune_count)));
      const std::vector<Instance> tune_slice(train_set.begin(),
                                             train_set.begin() + tune_n);
      tuned_lambda =
          tune_lasso_lambda(build_examples(tune_slice), cfg.lambda_candidates,
                            cfg.baseline_max_iter, cfg.baseline_tol,
                            cfg.threads);
    }
    art.tuned_lambda = tuned_lambda;

    if (wants_learned) {
      if (cfg.preloaded_model) {
        art.learned_model = *cfg.preloaded_model;
      } else {
        TrainConfig tcfg = cfg.train;
        tcfg.seed = derive_seed(cfg.master_seed, rate_idx, kTrainSeedDomain);
        tcfg.init_threshold = tuned_lambda;
        tcfg.threads = cfg.threads;
        art.report = train(train_set, tcfg);
        art.learned_model.nonlinearity = art.report.learned;
        art.learned_model.init_threshold = art.report.effective_init_threshold;
      }
      art.shape = export_shape(art.learned_model.nonlinearity,
                               art.learned_model.init_threshold);
    }

    // Trials are independent; each writes its own slot, the collector
    // appends in (rate, trial) order afterwards.
    std::vector<std::vector<TrialRecord>> per_trial(test_set.size());
    parallel_for_indexed(test_set.size(), cfg.threads, [&](std::size_t i) {
      const Instance& inst = test_set[i];
      std::vector<TrialRecord>& recs = per_trial[i];
      Problem problem;
      bool problem_ok = true;
      if (wants_lasso || wants_learned) {
        try {
          problem = build_problem(inst.H, inst.y, AutoGamma{}, SForm::Operator);
        } catch (const std::exception&) {
          problem_ok = false;
        }
      }
      for (const std::string& name : cfg.estimators) {
        TrialRecord rec;
        rec.estimator = name;
        rec.m_over_n = m_over_n;
        rec.trial_index = static_cast<int>(i);
        Timer timer;
        try {
          if (!problem_ok && name != "genie")
            throw NumericalError("problem setup failed");
          Vector x_hat;
          if (name == "lasso") {
            x_hat = fista_lasso(problem, tuned_lambda, cfg.baseline_max_iter,
                                cfg.baseline_tol)
                        .x_hat;
          } else if (name == "learned") {
            x_hat = ista_forward(problem, art.learned_model.nonlinearity,
                                 Vector::Zero(problem.n()), cfg.train.depth_T)
                        .x_final;
          } else {
            x_hat = genie_mmse(inst).x_hat;
          }
          rec.snr_db = snr_db(inst.x_true, x_hat);
          rec.failed = !std::isfinite(rec.snr_db);
        } catch (const std::exception&) {
          rec.snr_db = std::numeric_limits<double>::quiet_NaN();
          rec.failed = true;
        }
        rec.wall_ms = timer.elapsed_ms();
        recs.push_back(std::move(rec));
      }
    });

    std::vector<TrialRecord> rate_records;
    for (auto& recs : per_trial)
      for (auto& rec : recs) rate_records.push_back(std::move(rec));

    for (const std::string& name : cfg.estimators) {
      RateSummary s;
      s.estimator = name;
      s.m_over_n = m_over_n;
      double acc = 0.0;
      std::vector<double> values;
      for (const TrialRecord& rec : rate_records) {
        if (rec.estimator != name || rec.failed) continue;
        acc += rec.snr_db;
        values.push_back(rec.snr_db);
      }
      s.n_trials = static_cast<int>(values.size());
      if (s.n_trials > 0) {
        s.mean_snr_db = acc / s.n_trials;
        if (s.n_trials > 1) {
          double var = 0.0;
          for (const double v : values)
            var += (v - s.mean_snr_db) * (v - s.mean_snr_db);
          var /= (s.n_trials - 1);
          s.stderr_db = std::sqrt(var / s.n_trials);
        }
      }
      result.summary.push_back(std::move(s));
    }
    for (auto& rec : rate_records) result.records.push_back(std::move(rec));
    result.artifacts.push_back(std::move(art));
  }

  std::size_t failures = 0;
  for (const TrialRecord& rec : result.records)
    if (rec.failed) ++failures;
  if (failures * 10 > result.records.size())
    throw NumericalError("run_sweep: more than 10% of trials failed (" +
                         std::to_string(failures) + "/" +
                         std::to_string(result.records.size()) + ")");
  return result;
}

namespace {

std::ofstream open_csv(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  return os;
}

}  // namespace

void write_records_csv(const std::string& path,
                       const std::vector<TrialRecord>& records) {
  std::ofstream os = open_csv(path);
  os << "estimator,m_over_n,trial,snr_db,wall_ms\n";
  for (const TrialRecord& rec : records) {
    os << rec.estimator << ',' << format_double(rec.m_over_n) << ','
       << rec.trial_index << ',' << format_double(rec.snr_db) << ','
       << format_double(rec.wall_ms) << '\n';
  }
  if (!os) throw IoError("write failed: " + path);
}

void write_summary_csv(const std::string& path,
                       const std::vector<RateSummary>& summary) {
  std::ofstream os = open_csv(path);
  os << "estimator,m_over_n,mean_snr_db,stderr_db,n_trials\n";
  for (const RateSummary& s : summary) {
    os << s.estimator << ',' << format_double(s.m_over_n) << ','
       << format_double(s.mean_snr_db) << ',' << format_double(s.stderr_db)
       << ',' << s.n_trials << '\n';
  }
  if (!os) throw IoError("write failed: " + path);
}

void write_shape_csv(const std::string& path,
                     const std::vector<ShapePoint>& shape) {
  std::ofstream os = open_csv(path);
  os << "z,phi,softthresh\n";
  for (const ShapePoint& pt : shape) {
    os << format_double(pt.z) << ',' << format_double(pt.phi) << ','
       << format_double(pt.softthresh) << '\n';
  }
  if (!os) throw IoError("write failed: " + path);
}

void write_curve_csv(const std::string& path,
                     const std::vector<double>& snr_per_iteration) {
  std::ofstream os = open_csv(path);
  os << "iteration,train_snr_db\n";
  for (std::size_t i = 0; i < snr_per_iteration.size(); ++i)
    os << (i + 1) << ',' << format_double(snr_per_iteration[i]) << '\n';
  if (!os) throw IoError("write failed: " + path);
}

void write_probe_csv(const std::string& path,
                     const std::vector<ProbePoint>& probe) {
  std::ofstream os = open_csv(path);
  os << "iteration,probe_snr_db\n";
  for (const ProbePoint& pt : probe)
    os << pt.iteration << ',' << format_double(pt.snr_db) << '\n';
  if (!os) throw IoError("write failed: " + path);
}

}  // namespace shrinklearn
