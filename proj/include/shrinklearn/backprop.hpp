#pragma once

#include <vector>

#include "shrinklearn/ista.hpp"
#include "shrinklearn/spline.hpp"
#include "shrinklearn/types.hpp"

namespace shrinklearn {

/// 1/2 ||x_true - x_est||^2.
double cost(const Vector& x_true, const Vector& x_est);

/// Gradient of cost(x_true, x^T) with respect to the spline coefficients,
/// by reverse recursion through the stored pre-activations:
///   r^T = x^T - x_true, g = 0
///   for t = T..1:  g += Psi(z^t)^T r,  r <- S^T (phi'(z^t) .* r)
/// Basis rows are generated on the fly (at most 4 nonzeros per component),
/// so the N x (2K+1) matrix Psi^t is never materialized.
Vector gradient(const Problem& p, const SplineNonlinearity& nl,
                const IterateTrace& trace, const Vector& x_true);

struct TrainingExample {
  Problem problem;
  Vector x_true;
};

struct ExampleEval {
  Vector gradient;
  Vector x_final;
};

/// Per-example gradient and final estimate, each from a fresh forward pass
/// of the given depth started at x0 = 0.
std::vector<ExampleEval> evaluate_batch(
    const std::vector<const TrainingExample*>& batch,
    const SplineNonlinearity& nl, int depth, int threads = 1);

/// Mean of per-example gradients in list order, independent of thread count.
Vector mean_gradient(const std::vector<ExampleEval>& evals);

Vector batch_gradient(const std::vector<const TrainingExample*>& batch,
                      const SplineNonlinearity& nl, int depth,
                      int threads = 1);

/// Central finite differences of the cost over each coefficient, one fresh
/// forward pass per perturbation. Touches only the forward path, never the
/// reverse recursion, so it serves as the independent check of gradient().
Vector finite_difference_gradient(const Problem& p,
                                  const SplineNonlinearity& nl,
                                  const Vector& x_true, int depth,
                                  double step = 1e-6);

/// ||a - b||_inf relative to the magnitude of the reference vector b.
double max_relative_error(const Vector& a, const Vector& b);

}  // namespace shrinklearn
