#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "shrinklearn/spline.hpp"
#include "shrinklearn/types.hpp"

namespace shrinklearn {

struct AutoGamma {};
struct FixedGamma {
  double value;
};
using GammaPolicy = std::variant<AutoGamma, FixedGamma>;

/// Whether the iteration matrix S = I - gamma H^T H is materialized densely
/// or applied as two products with H. Same results either way; the operator
/// form avoids the N x N storage at larger N.
enum class SForm { Dense, Operator };

/// One inverse problem y = H x + e together with the cached ISTA operator
/// pieces S = I - gamma H^T H and b = gamma H^T y. S is symmetric.
struct Problem {
  Matrix H;
  Vector y;
  double gamma = 0.0;
  double lambda_max = 0.0;  // power-iteration estimate of lambda_max(H^T H)
  Vector b;
  std::optional<Matrix> S;  // present in dense form

  Index n() const { return H.cols(); }
  Index m() const { return H.rows(); }

  Vector apply_S(const Vector& v) const;
  Vector apply_St(const Vector& v) const;  // S is symmetric

  /// Max deviation of the cached S, b from their definitions.
  double consistency_error() const;
};

/// Largest eigenvalue of H^T H by power iteration with a normalized all-ones
/// start vector.
double power_lambda_max(const Matrix& H, double rel_tol = 1e-8,
                        int max_iter = 1000);

/// Builds the problem. Auto picks gamma = 1/lambda_max(H^T H), with the
/// estimate inflated by 1e-7 so gamma stays strictly on the descent side.
Problem build_problem(const Matrix& H, const Vector& y,
                      const GammaPolicy& policy = AutoGamma{},
                      SForm form = SForm::Dense);

/// Pre-activations z^1..z^T and final estimate of one unrolled pass.
struct IterateTrace {
  std::vector<Vector> z_history;
  Vector x_final;
  int depth = 0;
};

/// Unrolled ISTA with the pointwise nonlinearity phi:
///   z^t = S x^{t-1} + b,  x^t = phi(z^t).
/// Throws DivergenceError naming the iteration if values go nonfinite.
IterateTrace ista_forward(const Problem& p, const SplineNonlinearity& nl,
                          const Vector& x0, int depth);

struct SoftIstaResult {
  Vector x;
  int iterations_used = 0;
  bool converged = false;
};

/// Classic ISTA with the exact soft-threshold prox T(z; gamma*lambda).
/// Stops after max_iter iterations or when the relative change
/// ||x^t - x^{t-1}|| / ||x^{t-1}|| drops to tol (tol < 0 disables early
/// stopping). When `iterates` is given it receives x^1..x^T.
SoftIstaResult soft_threshold_ista(const Problem& p, double lambda,
                                   const Vector& x0, int max_iter, double tol,
                                   std::vector<Vector>* iterates = nullptr);

/// 1/2 ||y - H x||^2 + lambda ||x||_1.
double lasso_objective(const Problem& p, double lambda, const Vector& x);

}  // namespace shrinklearn
