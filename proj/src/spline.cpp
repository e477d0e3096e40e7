#include "shrinklearn/spline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace shrinklearn {

double bspline3(double z) {
  const double a = std::abs(z);
  if (a >= 2.0) return 0.0;
  if (a <= 1.0) return 2.0 / 3.0 - a * a + a * a * a / 2.0;
  const double w = 2.0 - a;
  return w * w * w / 6.0;
}

double bspline2(double z) {
  const double a = std::abs(z);
  if (a >= 1.5) return 0.0;
  if (a <= 0.5) return 0.75 - a * a;
  return 9.0 / 8.0 - 0.5 * a * (3.0 - a);
}

SplineNonlinearity make_zero_nonlinearity(int grid_halfwidth, double delta) {
  if (grid_halfwidth < 2) throw std::invalid_argument("grid_halfwidth must be >= 2");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  SplineNonlinearity nl;
  nl.coefficients = Vector::Zero(2 * grid_halfwidth + 1);
  nl.delta = delta;
  nl.grid_halfwidth = grid_halfwidth;
  return nl;
}

namespace {

inline double clamp_abscissa(const SplineNonlinearity& nl, double z) {
  const double r = nl.clamp_range();
  return std::clamp(z, -r, r);
}

}  // namespace

double eval_phi(const SplineNonlinearity& nl, double z) {
  if (!std::isfinite(z)) return std::numeric_limits<double>::quiet_NaN();
  const int K = nl.grid_halfwidth;
  const double u = clamp_abscissa(nl, z) / nl.delta;
  const int j = static_cast<int>(std::floor(u));
  double acc = 0.0;
  for (int k = j - 1; k <= j + 2; ++k) {
    if (k < -K || k > K) continue;
    acc += nl.coefficients[k + K] * bspline3(u - k);
  }
  return acc;
}

double eval_phi_prime(const SplineNonlinearity& nl, double z) {
  if (!std::isfinite(z)) return std::numeric_limits<double>::quiet_NaN();
  const int K = nl.grid_halfwidth;
  if (std::abs(z) > nl.clamp_range()) return 0.0;  // phi is constant outside
  const double u = z / nl.delta;
  const int j = static_cast<int>(std::floor(u));
  double acc = 0.0;
  for (int k = j - 1; k <= j + 2; ++k) {
    if (k < -K || k > K) continue;
    acc += nl.coefficients[k + K] * (bspline2(u - k + 0.5) - bspline2(u - k - 0.5));
  }
  return acc / nl.delta;
}

BasisRow eval_basis_row(const SplineNonlinearity& nl, double z) {
  const int K = nl.grid_halfwidth;
  const double u = clamp_abscissa(nl, z) / nl.delta;
  const int j = static_cast<int>(std::floor(u));
  BasisRow row;
  for (int k = j - 1; k <= j + 2; ++k) {
    if (k < -K || k > K) continue;
    const double v = bspline3(u - k);
    if (v == 0.0) continue;
    row.index[row.count] = k;
    row.value[row.count] = v;
    ++row.count;
  }
  return row;
}

double soft_threshold(double z, double threshold) {
  if (z > threshold) return z - threshold;
  if (z < -threshold) return z + threshold;
  return 0.0;
}

Vector interpolate_knot_values(const Vector& knot_values) {
  // Solves the tridiagonal system phi(j*delta) = f_j, i.e.
  //   (c_{j-1} + 4 c_j + c_{j+1}) / 6 = f_j,
  // with the out-of-grid coefficients clamped to the end ones, which turns
  // the two boundary rows into (c_{j+-1} + 5 c_j) / 6 = f_j. The system is
  // strictly diagonally dominant, so the Thomas sweep is stable.
  const Index n = knot_values.size();
  if (n < 3) throw std::invalid_argument("need at least 3 knot values");
  Vector diag = Vector::Constant(n, 4.0 / 6.0);
  diag[0] = diag[n - 1] = 5.0 / 6.0;
  const double off = 1.0 / 6.0;

  Vector cprime(n), dprime(n);
  cprime[0] = off / diag[0];
  dprime[0] = knot_values[0] / diag[0];
  for (Index i = 1; i < n; ++i) {
    const double m = diag[i] - off * cprime[i - 1];
    cprime[i] = off / m;
    dprime[i] = (knot_values[i] - off * dprime[i - 1]) / m;
  }
  Vector c(n);
  c[n - 1] = dprime[n - 1];
  for (Index i = n - 2; i >= 0; --i) c[i] = dprime[i] - cprime[i] * c[i + 1];
  return c;
}

SplineNonlinearity fit_soft_threshold(int grid_halfwidth, double delta,
                                      double threshold) {
  if (grid_halfwidth < 2) throw std::invalid_argument("grid_halfwidth must be >= 2");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (threshold < 0.0) throw std::invalid_argument("threshold must be >= 0");

  const int K = grid_halfwidth;
  Vector f(2 * K + 1);
  for (int k = -K; k <= K; ++k) f[k + K] = soft_threshold(k * delta, threshold);

  Vector c = interpolate_knot_values(f);
  // The target is odd and the system commutes with the flip, so the exact
  // solution is antisymmetric; enforce it bit-exactly.
  Vector sym(c.size());
  for (int k = -K; k <= K; ++k) sym[k + K] = 0.5 * (c[k + K] - c[-k + K]);

  SplineNonlinearity nl;
  nl.coefficients = std::move(sym);
  nl.delta = delta;
  nl.grid_halfwidth = K;
  return nl;
}

Vector project_coefficients(const Vector& c, const ConstraintSet& constraint) {
  return std::visit(
      [&](const auto& cs) -> Vector {
        using T = std::decay_t<decltype(cs)>;
        if constexpr (std::is_same_v<T, Unconstrained>) {
          return c;
        } else if constexpr (std::is_same_v<T, Box>) {
          return c.cwiseMax(cs.lo).cwiseMin(cs.hi);
        } else {
          const Index n = c.size();
          Vector out(n);
          for (Index i = 0; i < n; ++i)
            out[i] = 0.5 * (c[i] - c[n - 1 - i]);
          return out;
        }
      },
      constraint);
}

}  // namespace shrinklearn
