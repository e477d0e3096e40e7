#include "shrinklearn/datagen.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "shrinklearn/errors.hpp"

namespace shrinklearn {

Vector sample_signal(const SignalPrior& prior, RngEngine& rng) {
  if (prior.n < 1) throw std::invalid_argument("prior.n must be >= 1");
  if (!(prior.sparsity_rho > 0.0 && prior.sparsity_rho <= 1.0))
    throw std::invalid_argument("sparsity_rho must be in (0, 1]");
  const double sd = std::sqrt(prior.active_var);
  Vector x(prior.n);
  for (Index i = 0; i < prior.n; ++i) {
    if (uniform01(rng) < prior.sparsity_rho) {
      x[i] = prior.active_mean + sd * standard_normal(rng);
    } else {
      x[i] = 0.0;
    }
  }
  return x;
}

Matrix sample_matrix(Index m, Index n, RngEngine& rng) {
  if (m < 1 || n < 1) throw std::invalid_argument("matrix dims must be >= 1");
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  Matrix H(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) H(i, j) = scale * standard_normal(rng);
  return H;
}

namespace {

/// Redraws x until ||Hx|| > 0, calibrates noise to the realized signal
/// power, and measures y = Hx + e.
Instance finish_instance(const SignalPrior& prior, Matrix H, Vector x,
                         double snr_db, RngEngine& rng) {
  const Index m = H.rows();
  Vector hx = H * x;
  int retries = 0;
  while (hx.squaredNorm() == 0.0) {
    if (++retries > 100)
      throw NumericalError("make_instance: degenerate signal after 100 retries");
    x = sample_signal(prior, rng);
    hx = H * x;
  }
  Instance inst;
  inst.noise_var = hx.squaredNorm() /
                   (static_cast<double>(m) * std::pow(10.0, snr_db / 10.0));
  const double noise_sd = std::sqrt(inst.noise_var);
  Vector e(m);
  for (Index i = 0; i < m; ++i) e[i] = noise_sd * standard_normal(rng);
  inst.y = hx + e;
  inst.x_true = std::move(x);
  inst.H = std::move(H);
  return inst;
}

constexpr std::uint64_t kFixedHStream = 0xf158edULL;

}  // namespace

Instance make_instance(const SignalPrior& prior, Index m, double snr_db,
                       RngEngine& rng) {
  if (!std::isfinite(snr_db)) throw std::invalid_argument("snr_db must be finite");
  Vector x = sample_signal(prior, rng);
  Matrix H = sample_matrix(m, prior.n, rng);
  return finish_instance(prior, std::move(H), std::move(x), snr_db, rng);
}

std::vector<Instance> generate_dataset(const DatasetOptions& opt) {
  if (opt.count < 1) throw std::invalid_argument("count must be >= 1");
  if (opt.m < 1) throw std::invalid_argument("m must be >= 1");

  SignalPrior prior;
  prior.n = opt.n;
  prior.sparsity_rho = opt.rho;

  Matrix shared_h;
  if (opt.fixed_h) {
    RngEngine hrng = make_engine(derive_seed(opt.master_seed, 0, kFixedHStream));
    shared_h = sample_matrix(opt.m, opt.n, hrng);
  }

  std::vector<Instance> out;
  out.reserve(opt.count);
  for (Index i = 0; i < opt.count; ++i) {
    const std::uint64_t seed = derive_seed(opt.master_seed, i);
    RngEngine rng = make_engine(seed);
    Instance inst;
    if (opt.fixed_h) {
      Vector x = sample_signal(prior, rng);
      inst = finish_instance(prior, shared_h, std::move(x), opt.snr_db, rng);
    } else {
      inst = make_instance(prior, opt.m, opt.snr_db, rng);
    }
    inst.seed = seed;
    out.push_back(std::move(inst));
  }
  return out;
}

std::uint64_t instance_hash(const Instance& inst) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const double* data, std::size_t count) {
    const unsigned char* bytes = reinterpret_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < count * sizeof(double); ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  mix(inst.x_true.data(), inst.x_true.size());
  mix(inst.y.data(), inst.y.size());
  mix(&inst.noise_var, 1);
  return h;
}

}  // namespace shrinklearn
