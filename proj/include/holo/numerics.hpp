// Integration kernels: ordered products of matrix exponentials, a classic RK4
// for complex ODEs, and trapezoidal contour quadrature on circles.

#pragma once

#include <functional>

#include "holo/matrix.hpp"

namespace holo {

struct GeneratorSample {
  double theta = 0.0;
  CMatrix a;  // Hermitian generator sampled at theta
};

enum class OrderDirection {
  Forward,  // path ordering T: later-theta factors multiply on the left
  Reverse,  // anti ordering T*: later-theta factors multiply on the right
};

// prod_k exp(-i A(theta_k) dtheta_k) with midpoint panel widths inferred from
// the sample positions. theta_k must be strictly monotone. A single sample has
// zero width and yields the identity. Each factor is exactly unitary.
CMatrix ordered_product_exponential(const std::vector<GeneratorSample>& samples,
                                    OrderDirection direction);

// Classic fixed-step RK4 for y' = rhs(t, y) on complex state vectors.
// Aborts (std::runtime_error, offending time in the message) on non-finite
// values. Returns the final state; `observer`, when set, sees every accepted
// step including the initial state.
CVec rk4_complex_ode(const std::function<CVec(double, const CVec&)>& rhs, const CVec& y0,
                     double t0, double t1, long steps,
                     const std::function<void(double, const CVec&)>& observer = nullptr);

// (1/2pi i) closed-circle integral of f around `center` with `radius`,
// trapezoidal in the angle (exponentially convergent for analytic f).
// Non-finite samples abort with the sample angle reported.
Cplx contour_integral(const std::function<Cplx(Cplx)>& f, Cplx center, double radius,
                      int samples);

}  // namespace holo
