#pragma once

#include <cstdint>
#include <vector>

#include "shrinklearn/rng.hpp"
#include "shrinklearn/types.hpp"

namespace shrinklearn {

/// Bernoulli-Gaussian prior: each component is zero with probability
/// 1 - sparsity_rho, otherwise N(active_mean, active_var).
struct SignalPrior {
  Index n = 0;
  double sparsity_rho = 0.2;
  double active_mean = 0.0;
  double active_var = 1.0;
};

struct Instance {
  Vector x_true;
  Matrix H;
  Vector y;
  double noise_var = 0.0;
  std::uint64_t seed = 0;
};

/// Per-component draw order: one uniform for the Bernoulli gate, then two
/// engine words for the Gaussian when the gate is active.
Vector sample_signal(const SignalPrior& prior, RngEngine& rng);

/// i.i.d. N(0, 1/m) entries, filled row-major.
Matrix sample_matrix(Index m, Index n, RngEngine& rng);

/// Draws x and H, then calibrates the noise variance to the realized signal
/// power: noise_var = ||Hx||^2 / (m * 10^(snr_db/10)). All-zero signal draws
/// are retried (H is kept); gives up after 100 retries.
Instance make_instance(const SignalPrior& prior, Index m, double snr_db,
                       RngEngine& rng);

struct DatasetOptions {
  Index n = 512;
  Index m = 0;
  Index count = 0;
  double rho = 0.2;
  double snr_db = 30.0;
  std::uint64_t master_seed = 0;
  bool fixed_h = false;  // draw H once and reuse it for every instance
};

/// Instance i is generated from engine seed derive_seed(master_seed, i), so
/// instances can be produced independently and in any order. With fixed_h
/// the matrix comes from the separate stream derive_seed(master_seed, i,
/// kFixedHStream) evaluated at i = 0.
std::vector<Instance> generate_dataset(const DatasetOptions& opt);

/// FNV-1a over the raw bytes of (x_true, y, noise_var); used to assert that
/// two seed domains produced disjoint instances.
std::uint64_t instance_hash(const Instance& inst);

}  // namespace shrinklearn
