#pragma once

#include <array>
#include <variant>

#include "shrinklearn/types.hpp"

namespace shrinklearn {

/// Cardinal cubic B-spline. Symmetric, nonnegative, supported on (-2, 2).
double bspline3(double z);

/// Cardinal quadratic B-spline. Symmetric, supported on (-3/2, 3/2).
double bspline2(double z);

/// Pointwise nonlinearity phi(z) = sum_k c_k beta3(z/delta - k) on the
/// uniform grid delta * [-K, ..., K]. Coefficients are stored with index
/// k + K, i.e. coefficients[0] belongs to the leftmost knot -K*delta.
///
/// Outside |z| <= (K-2)*delta the abscissa is clamped before expansion, so
/// phi is constant there and phi' vanishes. Inside that range all four
/// active basis indices exist and partition of unity holds exactly.
struct SplineNonlinearity {
  Vector coefficients;  // length 2K+1
  double delta = 1.0;
  int degree = 3;
  int grid_halfwidth = 0;  // K

  /// Largest abscissa that is evaluated without clamping.
  double clamp_range() const { return (grid_halfwidth - 2) * delta; }
};

/// Zero-coefficient nonlinearity on the given grid.
SplineNonlinearity make_zero_nonlinearity(int grid_halfwidth, double delta);

double eval_phi(const SplineNonlinearity& nl, double z);
double eval_phi_prime(const SplineNonlinearity& nl, double z);

/// One row of the basis matrix: the nonzero entries psi(z_c/delta - k),
/// reported as (k, value) pairs. At most four entries.
struct BasisRow {
  std::array<int, 4> index;
  std::array<double, 4> value;
  int count = 0;
};

BasisRow eval_basis_row(const SplineNonlinearity& nl, double z);

/// Coefficients that interpolate the soft-threshold function
/// T(z) = sign(z) * max(|z| - threshold, 0) at every knot. The banded
/// interpolation system is closed at the ends by clamping the out-of-grid
/// coefficients to the boundary ones; the result is antisymmetrized so
/// c_{-k} = -c_k holds exactly.
SplineNonlinearity fit_soft_threshold(int grid_halfwidth, double delta,
                                      double threshold);

/// Same banded solve for an arbitrary set of knot values f(k*delta).
Vector interpolate_knot_values(const Vector& knot_values);

double soft_threshold(double z, double threshold);

// Constraint sets for the coefficient projection.
struct Unconstrained {};
struct Box {
  double lo;
  double hi;
};
struct OddSymmetric {};
using ConstraintSet = std::variant<Unconstrained, Box, OddSymmetric>;

/// Orthogonal projection of c onto the constraint set.
Vector project_coefficients(const Vector& c, const ConstraintSet& constraint);

}  // namespace shrinklearn
