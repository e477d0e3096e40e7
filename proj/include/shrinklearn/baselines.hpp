#pragma once

#include "shrinklearn/datagen.hpp"
#include "shrinklearn/ista.hpp"
#include "shrinklearn/types.hpp"

namespace shrinklearn {

struct EstimatorResult {
  Vector x_hat;
  int iterations_used = 0;
  bool converged = false;
};

/// Accelerated proximal gradient (Beck-Teboulle momentum) for the l1
/// objective 1/2 ||y - Hx||^2 + lambda ||x||_1, step gamma from the problem.
EstimatorResult fista_lasso(const Problem& p, double lambda, int max_iter,
                            double tol);

/// Support-aware MMSE bound. With S = supp(x_true) and unit-variance
/// Gaussian actives, the posterior mean is
///   x_S = (H_S^T H_S + noise_var I)^{-1} H_S^T y,   zero off-support.
EstimatorResult genie_mmse(const Instance& instance);

}  // namespace shrinklearn
