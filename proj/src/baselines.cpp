#include "shrinklearn/baselines.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "shrinklearn/errors.hpp"
#include "shrinklearn/spline.hpp"

namespace shrinklearn {

EstimatorResult fista_lasso(const Problem& p, double lambda, int max_iter,
                            double tol) {
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");

  const double threshold = p.gamma * lambda;
  const Index n = p.n();
  EstimatorResult res;
  Vector x_prev = Vector::Zero(n);
  Vector v = x_prev;  // momentum point
  double t_k = 1.0;
  for (int k = 1; k <= max_iter; ++k) {
    Vector z = p.apply_S(v) + p.b;
    if (!z.allFinite())
      throw DivergenceError(k, "fista: nonfinite step at iteration " +
                                   std::to_string(k));
    Vector x(n);
    for (Index m = 0; m < n; ++m) x[m] = soft_threshold(z[m], threshold);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_k * t_k));
    v = x + ((t_k - 1.0) / t_next) * (x - x_prev);
    res.iterations_used = k;
    const double change = (x - x_prev).norm();
    const double prev_norm = x_prev.norm();
    x_prev = std::move(x);
    t_k = t_next;
    if (change == 0.0 || (prev_norm > 0.0 && change / prev_norm <= tol)) {
      res.converged = true;
      break;
    }
  }
  res.x_hat = std::move(x_prev);
  return res;
}

EstimatorResult genie_mmse(const Instance& instance) {
  const Index n = instance.x_true.size();
  std::vector<Index> support;
  for (Index i = 0; i < n; ++i)
    if (instance.x_true[i] != 0.0) support.push_back(i);

  EstimatorResult res;
  res.converged = true;
  res.x_hat = Vector::Zero(n);
  if (support.empty()) return res;

  const Index s = static_cast<Index>(support.size());
  Matrix Hs(instance.H.rows(), s);
  for (Index j = 0; j < s; ++j) Hs.col(j) = instance.H.col(support[j]);

  Matrix A = Hs.transpose() * Hs;
  A.diagonal().array() += instance.noise_var;
  Eigen::LDLT<Matrix> ldlt(A);
  if (ldlt.info() != Eigen::Success ||
      (instance.noise_var == 0.0 && !ldlt.isPositive()))
    throw NumericalError("genie_mmse: singular support system");
  const Vector xs = ldlt.solve(Hs.transpose() * instance.y);
  if (!xs.allFinite())
    throw NumericalError("genie_mmse: singular support system");
  for (Index j = 0; j < s; ++j) res.x_hat[support[j]] = xs[j];
  return res;
}

}  // namespace shrinklearn
