#include <doctest.h>

#include <cmath>

#include "shrinklearn/baselines.hpp"
#include "shrinklearn/bench.hpp"
#include "shrinklearn/datagen.hpp"

using namespace shrinklearn;

namespace {

Vector random_vector(Index n, std::uint64_t seed) {
  RngEngine rng = make_engine(seed);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = standard_normal(rng);
  return v;
}

/// Posterior mean of the two active coordinates by brute-force quadrature:
/// p(x_S | y) ~ exp(-||y - H_S x_S||^2 / (2 sigma2)) exp(-||x_S||^2 / 2).
Vector quadrature_posterior_mean(const Matrix& hs, const Vector& y,
                                 double sigma2) {
  const double lo = -8.0, hi = 8.0;
  const int steps = 400;
  const double h = (hi - lo) / steps;
  double mass = 0.0;
  Vector mean = Vector::Zero(2);
  for (int i = 0; i <= steps; ++i) {
    const double wi = (i == 0 || i == steps) ? 0.5 : 1.0;
    for (int j = 0; j <= steps; ++j) {
      const double wj = (j == 0 || j == steps) ? 0.5 : 1.0;
      Vector xs(2);
      xs << lo + i * h, lo + j * h;
      const double resid = (y - hs * xs).squaredNorm();
      const double weight =
          wi * wj * std::exp(-0.5 * resid / sigma2 - 0.5 * xs.squaredNorm());
      mass += weight;
      mean += weight * xs;
    }
  }
  return mean / mass;
}

}  // namespace

TEST_CASE("fista with lambda 0 and identity H recovers y in one step") {
  const Index n = 6;
  const Vector y = random_vector(n, 1);
  const Problem p = build_problem(Matrix::Identity(n, n), y, FixedGamma{1.0});
  const EstimatorResult res = fista_lasso(p, 0.0, 100, 1e-4);
  CHECK((res.x_hat - y).cwiseAbs().maxCoeff() == 0.0);
  CHECK(res.converged);
  CHECK(res.iterations_used <= 2);
}

TEST_CASE("fista is never behind plain ISTA after the transient") {
  DatasetOptions opt;
  opt.n = 32;
  opt.m = 16;
  opt.count = 1;
  opt.rho = 0.2;
  opt.snr_db = 30.0;
  opt.master_seed = 7;
  const Instance inst = generate_dataset(opt)[0];
  const Problem p = build_problem(inst.H, inst.y, AutoGamma{});
  const double lambda = 0.05;

  for (int iters = 50; iters <= 250; iters += 50) {
    const EstimatorResult fista = fista_lasso(p, lambda, iters, -1.0);
    const SoftIstaResult ista =
        soft_threshold_ista(p, lambda, Vector::Zero(32), iters, -1.0);
    CHECK(lasso_objective(p, lambda, fista.x_hat) <=
          lasso_objective(p, lambda, ista.x) + 1e-12);
  }
}

TEST_CASE("fista reaches the long-run ISTA oracle objective") {
  DatasetOptions opt;
  opt.n = 16;
  opt.m = 8;
  opt.count = 1;
  opt.rho = 0.2;
  opt.snr_db = 30.0;
  opt.master_seed = 8;
  const Instance inst = generate_dataset(opt)[0];
  const Problem p = build_problem(inst.H, inst.y, AutoGamma{});
  const double lambda = 0.1;

  const EstimatorResult fista = fista_lasso(p, lambda, 20000, -1.0);
  const SoftIstaResult oracle =
      soft_threshold_ista(p, lambda, Vector::Zero(16), 100000, -1.0);
  CHECK(std::abs(lasso_objective(p, lambda, fista.x_hat) -
                 lasso_objective(p, lambda, oracle.x)) <= 1e-8);
  // final objective never above the starting one
  CHECK(lasso_objective(p, lambda, fista.x_hat) <=
        lasso_objective(p, lambda, Vector::Zero(16)));
}

TEST_CASE("genie with empty support returns zero") {
  Instance inst;
  inst.x_true = Vector::Zero(5);
  inst.H = Matrix::Identity(4, 5);
  inst.y = random_vector(4, 3);
  inst.noise_var = 0.1;
  const EstimatorResult res = genie_mmse(inst);
  CHECK(res.x_hat == Vector::Zero(5));
}

TEST_CASE("noiseless genie is least squares on the support") {
  RngEngine rng = make_engine(4);
  Instance inst;
  inst.x_true = Vector::Zero(6);
  inst.x_true[1] = 1.3;
  inst.x_true[4] = -0.7;
  inst.H = sample_matrix(4, 6, rng);
  inst.noise_var = 0.0;
  inst.y = inst.H * inst.x_true;  // exact measurements
  const EstimatorResult res = genie_mmse(inst);
  CHECK((res.x_hat - inst.x_true).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("genie matches the quadrature posterior mean") {
  RngEngine rng = make_engine(5);
  Instance inst;
  inst.x_true = Vector::Zero(6);
  inst.x_true[2] = 0.9;
  inst.x_true[5] = -1.4;
  inst.H = sample_matrix(4, 6, rng);
  inst.noise_var = 0.25;
  Vector e(4);
  for (Index i = 0; i < 4; ++i) e[i] = 0.5 * standard_normal(rng);
  inst.y = inst.H * inst.x_true + e;

  const EstimatorResult res = genie_mmse(inst);

  Matrix hs(4, 2);
  hs.col(0) = inst.H.col(2);
  hs.col(1) = inst.H.col(5);
  const Vector oracle = quadrature_posterior_mean(hs, inst.y, inst.noise_var);
  CHECK(std::abs(res.x_hat[2] - oracle[0]) <= 1e-4);
  CHECK(std::abs(res.x_hat[5] - oracle[1]) <= 1e-4);
  // off-support stays zero
  CHECK(res.x_hat[0] == 0.0);
  CHECK(res.x_hat[1] == 0.0);
}

TEST_CASE("genie dominates lasso on a seeded batch") {
  DatasetOptions opt;
  opt.n = 24;
  opt.m = 16;
  opt.count = 100;
  opt.rho = 0.2;
  opt.snr_db = 30.0;
  opt.master_seed = 6;
  const std::vector<Instance> batch = generate_dataset(opt);

  double genie_acc = 0.0, lasso_acc = 0.0;
  for (const Instance& inst : batch) {
    const Problem p = build_problem(inst.H, inst.y, AutoGamma{});
    genie_acc += snr_db(inst.x_true, genie_mmse(inst).x_hat);
    lasso_acc += snr_db(inst.x_true, fista_lasso(p, 0.05, 1000, 1e-4).x_hat);
  }
  CHECK(genie_acc / 100.0 >= lasso_acc / 100.0);
}
