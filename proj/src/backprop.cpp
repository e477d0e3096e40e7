#include "shrinklearn/backprop.hpp"

#include <algorithm>
#include <exception>
#include <stdexcept>
#include <string>

#include "shrinklearn/errors.hpp"
#include "shrinklearn/parallel.hpp"

namespace shrinklearn {

double cost(const Vector& x_true, const Vector& x_est) {
  if (x_true.size() != x_est.size())
    throw std::invalid_argument("cost: length mismatch");
  return 0.5 * (x_true - x_est).squaredNorm();
}

Vector gradient(const Problem& p, const SplineNonlinearity& nl,
                const IterateTrace& trace, const Vector& x_true) {
  const Index n = p.n();
  if (x_true.size() != n)
    throw std::invalid_argument("gradient: x_true length must equal N");
  if (static_cast<int>(trace.z_history.size()) != trace.depth)
    throw std::invalid_argument("gradient: trace depth mismatch");
  if (trace.depth < 1 || trace.x_final.size() != n ||
      trace.z_history.front().size() != n)
    throw std::invalid_argument("gradient: trace/problem mismatch");

  const int K = nl.grid_halfwidth;
  Vector g = Vector::Zero(2 * K + 1);
  Vector r = trace.x_final - x_true;
  Vector w(n);
  for (int t = trace.depth; t >= 1; --t) {
    const Vector& z = trace.z_history[t - 1];
    for (Index m = 0; m < n; ++m) {
      const BasisRow row = eval_basis_row(nl, z[m]);
      for (int i = 0; i < row.count; ++i)
        g[row.index[i] + K] += row.value[i] * r[m];
    }
    if (t > 1) {
      for (Index m = 0; m < n; ++m) w[m] = eval_phi_prime(nl, z[m]) * r[m];
      r = p.apply_St(w);
    }
  }
  return g;
}

std::vector<ExampleEval> evaluate_batch(
    const std::vector<const TrainingExample*>& batch,
    const SplineNonlinearity& nl, int depth, int threads) {
  if (batch.empty()) throw std::invalid_argument("evaluate_batch: empty batch");

  const std::size_t n = batch.size();
  std::vector<ExampleEval> evals(n);
  std::vector<std::exception_ptr> errors(n);
  parallel_for_indexed(n, threads, [&](std::size_t i) {
    try {
      const TrainingExample& ex = *batch[i];
      const Vector x0 = Vector::Zero(ex.problem.n());
      IterateTrace trace = ista_forward(ex.problem, nl, x0, depth);
      evals[i].gradient = gradient(ex.problem, nl, trace, ex.x_true);
      evals[i].x_final = std::move(trace.x_final);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) {
      try {
        std::rethrow_exception(errors[i]);
      } catch (const std::exception& e) {
        throw NumericalError("batch example " + std::to_string(i) + ": " +
                             e.what());
      }
    }
  }
  return evals;
}

Vector mean_gradient(const std::vector<ExampleEval>& evals) {
  Vector acc = evals.at(0).gradient;
  for (std::size_t i = 1; i < evals.size(); ++i) acc += evals[i].gradient;
  return acc / static_cast<double>(evals.size());
}

Vector batch_gradient(const std::vector<const TrainingExample*>& batch,
                      const SplineNonlinearity& nl, int depth, int threads) {
  return mean_gradient(evaluate_batch(batch, nl, depth, threads));
}

Vector finite_difference_gradient(const Problem& p,
                                  const SplineNonlinearity& nl,
                                  const Vector& x_true, int depth,
                                  double step) {
  if (!(step > 0.0)) throw std::invalid_argument("fd step must be positive");
  const Vector x0 = Vector::Zero(p.n());
  SplineNonlinearity probe = nl;
  Vector fd(nl.coefficients.size());
  for (Index k = 0; k < nl.coefficients.size(); ++k) {
    const double saved = nl.coefficients[k];
    probe.coefficients[k] = saved + step;
    const double plus = cost(x_true, ista_forward(p, probe, x0, depth).x_final);
    probe.coefficients[k] = saved - step;
    const double minus = cost(x_true, ista_forward(p, probe, x0, depth).x_final);
    probe.coefficients[k] = saved;
    fd[k] = (plus - minus) / (2.0 * step);
  }
  return fd;
}

double max_relative_error(const Vector& a, const Vector& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("max_relative_error: length mismatch");
  const double scale = std::max(b.cwiseAbs().maxCoeff(), 1e-12);
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

}  // namespace shrinklearn
