#include "shrinklearn/ista.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "shrinklearn/errors.hpp"

namespace shrinklearn {

Vector Problem::apply_S(const Vector& v) const {
  if (S) return (*S) * v;
  return v - gamma * (H.transpose() * (H * v));
}

Vector Problem::apply_St(const Vector& v) const { return apply_S(v); }

double Problem::consistency_error() const {
  double err = (b - gamma * (H.transpose() * y)).cwiseAbs().maxCoeff();
  if (S) {
    Matrix ref = Matrix::Identity(n(), n()) - gamma * (H.transpose() * H);
    err = std::max(err, (*S - ref).cwiseAbs().maxCoeff());
  }
  return err;
}

double power_lambda_max(const Matrix& H, double rel_tol, int max_iter) {
  const Index n = H.cols();
  Vector v = Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector w = H.transpose() * (H * v);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    const double lambda_new = v.dot(H.transpose() * (H * v));
    if (std::abs(lambda_new - lambda) <= rel_tol * std::abs(lambda_new)) {
      return lambda_new;
    }
    lambda = lambda_new;
  }
  return lambda;
}

Problem build_problem(const Matrix& H, const Vector& y,
                      const GammaPolicy& policy, SForm form) {
  if (H.rows() == 0 || H.cols() == 0)
    throw std::invalid_argument("H must be nonempty");
  if (y.size() != H.rows())
    throw std::invalid_argument("y length must equal rows of H");

  Problem p;
  p.H = H;
  p.y = y;
  p.lambda_max = power_lambda_max(H);
  if (std::holds_alternative<AutoGamma>(policy)) {
    if (p.lambda_max <= 0.0)
      throw std::invalid_argument("H^T H has no positive spectrum; gamma undefined");
    // The Rayleigh estimate approaches lambda_max from below; the inflation
    // keeps gamma <= 1/lambda_max so the descent guarantee holds.
    p.gamma = 1.0 / (p.lambda_max * (1.0 + 1e-7));
  } else {
    const double g = std::get<FixedGamma>(policy).value;
    if (!(g > 0.0)) throw std::invalid_argument("fixed gamma must be positive");
    p.gamma = g;
  }
  p.b = p.gamma * (H.transpose() * y);
  if (form == SForm::Dense) {
    p.S = Matrix::Identity(H.cols(), H.cols()) - p.gamma * (H.transpose() * H);
  }
  return p;
}

IterateTrace ista_forward(const Problem& p, const SplineNonlinearity& nl,
                          const Vector& x0, int depth) {
  if (depth < 1) throw std::invalid_argument("depth must be >= 1");
  if (x0.size() != p.n()) throw std::invalid_argument("x0 length must equal N");

  IterateTrace trace;
  trace.depth = depth;
  trace.z_history.reserve(depth);
  Vector x = x0;
  for (int t = 1; t <= depth; ++t) {
    Vector z = p.apply_S(x) + p.b;
    if (!z.allFinite())
      throw DivergenceError(t, "nonfinite pre-activation at iteration " +
                                   std::to_string(t));
    for (Index m = 0; m < z.size(); ++m) x[m] = eval_phi(nl, z[m]);
    if (!x.allFinite())
      throw DivergenceError(t, "nonfinite iterate at iteration " +
                                   std::to_string(t));
    trace.z_history.push_back(std::move(z));
  }
  trace.x_final = std::move(x);
  return trace;
}

SoftIstaResult soft_threshold_ista(const Problem& p, double lambda,
                                   const Vector& x0, int max_iter, double tol,
                                   std::vector<Vector>* iterates) {
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (x0.size() != p.n()) throw std::invalid_argument("x0 length must equal N");

  const double threshold = p.gamma * lambda;
  SoftIstaResult res;
  Vector x = x0;
  for (int t = 1; t <= max_iter; ++t) {
    Vector z = p.apply_S(x) + p.b;
    if (!z.allFinite())
      throw DivergenceError(t, "nonfinite pre-activation at iteration " +
                                   std::to_string(t));
    Vector x_new(z.size());
    for (Index m = 0; m < z.size(); ++m)
      x_new[m] = soft_threshold(z[m], threshold);
    res.iterations_used = t;
    const double change = (x_new - x).norm();
    const double prev_norm = x.norm();
    x = std::move(x_new);
    if (iterates) iterates->push_back(x);
    if (tol >= 0.0 &&
        (change == 0.0 || (prev_norm > 0.0 && change / prev_norm <= tol))) {
      res.converged = true;
      break;
    }
  }
  res.x = std::move(x);
  return res;
}

double lasso_objective(const Problem& p, double lambda, const Vector& x) {
  return 0.5 * (p.y - p.H * x).squaredNorm() + lambda * x.lpNorm<1>();
}

}  // namespace shrinklearn
