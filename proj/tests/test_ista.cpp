#include <doctest.h>

#include <cmath>

#include "shrinklearn/datagen.hpp"
#include "shrinklearn/errors.hpp"
#include "shrinklearn/ista.hpp"
#include "shrinklearn/rng.hpp"

using namespace shrinklearn;

namespace {

Matrix random_matrix(Index m, Index n, std::uint64_t seed) {
  RngEngine rng = make_engine(seed);
  Matrix h(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) h(i, j) = standard_normal(rng);
  return h;
}

Vector random_vector(Index n, std::uint64_t seed) {
  RngEngine rng = make_engine(seed);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = standard_normal(rng);
  return v;
}

}  // namespace

TEST_CASE("build_problem on the identity") {
  const Index n = 6;
  const Matrix h = Matrix::Identity(n, n);
  const Vector y = random_vector(n, 1);
  const Problem p = build_problem(h, y, AutoGamma{});
  CHECK(std::abs(p.gamma - 1.0) <= 1e-6);
  CHECK(p.S->cwiseAbs().maxCoeff() <= 1e-6);
  CHECK((p.b - y).cwiseAbs().maxCoeff() <= 1e-6);
  CHECK(p.consistency_error() <= 1e-14);
}

TEST_CASE("build_problem on 2I") {
  const Index n = 4;
  const Matrix h = 2.0 * Matrix::Identity(n, n);
  const Problem p = build_problem(h, random_vector(n, 2), AutoGamma{});
  CHECK(std::abs(p.gamma - 0.25) <= 1e-6);
}

TEST_CASE("power iteration matches a dense eigensolver") {
  const Matrix h = random_matrix(8, 16, 3) / std::sqrt(8.0);
  const double est = power_lambda_max(h);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h.transpose() * h);
  const double exact = eig.eigenvalues().maxCoeff();
  CHECK(std::abs(est - exact) / exact <= 1e-6);
}

TEST_CASE("build_problem validation") {
  const Matrix h = Matrix::Identity(3, 3);
  CHECK_THROWS_AS(build_problem(h, Vector::Zero(2), AutoGamma{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_problem(h, Vector::Zero(3), FixedGamma{0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_problem(h, Vector::Zero(3), FixedGamma{-1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_problem(Matrix::Zero(3, 3), Vector::Zero(3), AutoGamma{}),
                  std::invalid_argument);
}

TEST_CASE("operator form agrees with the dense form") {
  const Matrix h = random_matrix(5, 9, 4);
  const Vector y = random_vector(5, 5);
  const Problem dense = build_problem(h, y, AutoGamma{}, SForm::Dense);
  const Problem op = build_problem(h, y, AutoGamma{}, SForm::Operator);
  const Vector v = random_vector(9, 6);
  CHECK((dense.apply_S(v) - op.apply_S(v)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((dense.apply_St(v) - op.apply_St(v)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("forward pass with identity-fit phi and H = I recovers y in one step") {
  const Index n = 5;
  const Matrix h = Matrix::Identity(n, n);
  const Vector y = random_vector(n, 7);
  // gamma fixed to 1 makes S exactly zero and b = y
  const Problem p = build_problem(h, y, FixedGamma{1.0});
  const SplineNonlinearity nl = fit_soft_threshold(60, 0.1, 0.0);
  const IterateTrace trace = ista_forward(p, nl, Vector::Zero(n), 1);
  REQUIRE(trace.depth == 1);
  CHECK((trace.z_history[0] - y).cwiseAbs().maxCoeff() == 0.0);
  CHECK((trace.x_final - y).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("zero nonlinearity pins the iterates at zero") {
  const Matrix h = random_matrix(4, 8, 8);
  const Vector y = random_vector(4, 9);
  const Problem p = build_problem(h, y, AutoGamma{});
  const SplineNonlinearity nl = make_zero_nonlinearity(10, 0.5);
  const IterateTrace trace = ista_forward(p, nl, Vector::Zero(8), 7);
  CHECK(trace.x_final.cwiseAbs().maxCoeff() == 0.0);
  for (const Vector& z : trace.z_history)
    CHECK((z - p.b).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("forward trace is bit-reproducible") {
  const Matrix h = random_matrix(6, 12, 10);
  const Vector y = random_vector(6, 11);
  const Problem p = build_problem(h, y, AutoGamma{});
  const SplineNonlinearity nl = fit_soft_threshold(40, 0.1, 0.05);
  const IterateTrace a = ista_forward(p, nl, Vector::Zero(12), 25);
  const IterateTrace b = ista_forward(p, nl, Vector::Zero(12), 25);
  CHECK(a.x_final == b.x_final);
  for (int t = 0; t < 25; ++t) CHECK(a.z_history[t] == b.z_history[t]);
}

TEST_CASE("forward pass reports the diverging iteration") {
  const Index n = 4;
  const Matrix h = Matrix::Identity(n, n);
  const Vector y = Vector::Constant(n, 10.0);
  const Problem p = build_problem(h, y, FixedGamma{50.0});
  // phi == 1e308 everywhere, so the second gradient step overflows
  SplineNonlinearity nl = make_zero_nonlinearity(10, 0.5);
  nl.coefficients.setConstant(1e308);
  try {
    ista_forward(p, nl, Vector::Zero(n), 500);
    CHECK(false);
  } catch (const DivergenceError& e) {
    CHECK(e.iteration() == 2);
  }
}

TEST_CASE("soft-threshold ISTA trivial cases") {
  const Index n = 5;
  const Matrix h = Matrix::Identity(n, n);
  const Vector y = random_vector(n, 12);
  const Problem p = build_problem(h, y, FixedGamma{1.0});

  SUBCASE("lambda = 0 converges to y immediately") {
    const SoftIstaResult res =
        soft_threshold_ista(p, 0.0, Vector::Zero(n), 10, 1e-4);
    CHECK((res.x - y).cwiseAbs().maxCoeff() == 0.0);
    CHECK(res.converged);
    CHECK(res.iterations_used <= 2);
  }
  SUBCASE("huge lambda shrinks everything to zero") {
    const double lambda = p.b.cwiseAbs().maxCoeff() / p.gamma + 1.0;
    const SoftIstaResult res =
        soft_threshold_ista(p, lambda, Vector::Zero(n), 50, 1e-4);
    CHECK(res.x.cwiseAbs().maxCoeff() == 0.0);
    CHECK(res.converged);
  }
}

TEST_CASE("soft-threshold ISTA objective is non-increasing with auto gamma") {
  const Matrix h = random_matrix(8, 16, 13) / std::sqrt(8.0);
  const Vector y = random_vector(8, 14);
  const Problem p = build_problem(h, y, AutoGamma{});
  const double lambda = 0.1;

  Vector x = Vector::Zero(16);
  double prev = lasso_objective(p, lambda, x);
  for (int t = 0; t < 200; ++t) {
    const SoftIstaResult step = soft_threshold_ista(p, lambda, x, 1, -1.0);
    x = step.x;
    const double cur = lasso_objective(p, lambda, x);
    CHECK(cur <= prev + 1e-12 * std::max(1.0, std::abs(prev)));
    prev = cur;
  }
}

TEST_CASE("soft-threshold ISTA reaches the FISTA-oracle objective") {
  // independent long-run accelerated oracle implemented inline
  const Matrix h = random_matrix(8, 16, 15) / std::sqrt(8.0);
  const Vector y = random_vector(8, 16);
  const Problem p = build_problem(h, y, AutoGamma{});
  const double lambda = 0.1;

  const SoftIstaResult ista =
      soft_threshold_ista(p, lambda, Vector::Zero(16), 200000, 1e-14);
  const double ista_obj = lasso_objective(p, lambda, ista.x);

  Vector x_prev = Vector::Zero(16);
  Vector v = x_prev;
  double t_k = 1.0;
  const double thr = p.gamma * lambda;
  for (int k = 0; k < 100000; ++k) {
    const Vector z = p.apply_S(v) + p.b;
    Vector x(16);
    for (Index m = 0; m < 16; ++m) x[m] = soft_threshold(z[m], thr);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_k * t_k));
    v = x + ((t_k - 1.0) / t_next) * (x - x_prev);
    x_prev = x;
    t_k = t_next;
  }
  const double oracle_obj = lasso_objective(p, lambda, x_prev);
  CHECK(std::abs(ista_obj - oracle_obj) <= 1e-8);
}

TEST_CASE("spline-fit forward pass tracks soft-threshold ISTA") {
  DatasetOptions opt;
  opt.n = 16;
  opt.m = 8;
  opt.count = 1;
  opt.rho = 0.2;
  opt.snr_db = 30.0;
  opt.master_seed = 99;
  const Instance inst = generate_dataset(opt)[0];
  const Problem p = build_problem(inst.H, inst.y, AutoGamma{});
  const double lambda = 0.1;

  // fixed-point sensitivity amplifies the O(delta) interpolation error by
  // roughly 1/(1 - contraction factor), so the grid is kept fine
  const SplineNonlinearity nl =
      fit_soft_threshold(500, 0.02, p.gamma * lambda);
  const IterateTrace trace = ista_forward(p, nl, Vector::Zero(16), 50);

  std::vector<Vector> reference;
  soft_threshold_ista(p, lambda, Vector::Zero(16), 50, -1.0, &reference);
  REQUIRE(reference.size() == 50);
  for (int t = 0; t < 50; ++t) {
    Vector x_spline(16);
    for (Index m = 0; m < 16; ++m)
      x_spline[m] = eval_phi(nl, trace.z_history[t][m]);
    CHECK((x_spline - reference[t]).cwiseAbs().maxCoeff() <= 1e-2);
  }
}
