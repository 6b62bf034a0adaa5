#include "holo/numerics.hpp"

#include <cmath>
#include <string>

namespace holo {

CMatrix ordered_product_exponential(const std::vector<GeneratorSample>& samples,
                                    OrderDirection direction) {
  if (samples.empty()) throw std::invalid_argument("ordered_product_exponential: no samples");
  const int n = samples.front().a.dim();
  if (samples.size() == 1) return CMatrix::identity(n);

  const bool increasing = samples[1].theta > samples[0].theta;
  for (size_t k = 1; k < samples.size(); ++k) {
    const double d = samples[k].theta - samples[k - 1].theta;
    if ((increasing && d <= 0.0) || (!increasing && d >= 0.0))
      throw std::invalid_argument("ordered_product_exponential: grid not strictly monotone");
  }

  // midpoint panel widths: interior samples own half of each adjacent gap,
  // end samples own a full one-sided gap (uniform grids reduce to h everywhere)
  const size_t m = samples.size();
  std::vector<double> width(m);
  width[0] = samples[1].theta - samples[0].theta;
  width[m - 1] = samples[m - 1].theta - samples[m - 2].theta;
  for (size_t k = 1; k + 1 < m; ++k)
    width[k] = 0.5 * (samples[k + 1].theta - samples[k - 1].theta);

  CMatrix prod = CMatrix::identity(n);
  for (size_t k = 0; k < m; ++k) {
    const CMatrix factor = expm_hermitian_scaled(samples[k].a, Cplx(0.0, -width[k]));
    if (direction == OrderDirection::Forward)
      prod = factor * prod;  // later theta on the left
    else
      prod = prod * factor;  // later theta on the right
  }
  return prod;
}

CVec rk4_complex_ode(const std::function<CVec(double, const CVec&)>& rhs, const CVec& y0,
                     double t0, double t1, long steps,
                     const std::function<void(double, const CVec&)>& observer) {
  if (steps < 1) throw std::invalid_argument("rk4_complex_ode: steps must be >= 1");
  const double h = (t1 - t0) / static_cast<double>(steps);
  CVec y = y0;
  if (observer) observer(t0, y);
  const size_t n = y.size();

  auto finite = [](const CVec& v) {
    for (const auto& z : v)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  };

  CVec k1(n), k2(n), k3(n), k4(n), tmp(n);
  for (long s = 0; s < steps; ++s) {
    const double t = t0 + h * static_cast<double>(s);
    k1 = rhs(t, y);
    for (size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    k2 = rhs(t + 0.5 * h, tmp);
    for (size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    k3 = rhs(t + 0.5 * h, tmp);
    for (size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    k4 = rhs(t + h, tmp);
    for (size_t i = 0; i < n; ++i)
      y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!finite(y))
      throw std::runtime_error("rk4_complex_ode: non-finite state at t = " +
                               std::to_string(t + h));
    if (observer) observer(t + h, y);
  }
  return y;
}

Cplx contour_integral(const std::function<Cplx(Cplx)>& f, Cplx center, double radius,
                      int samples) {
  if (radius <= 0.0) throw std::invalid_argument("contour_integral: radius must be positive");
  if (samples < 4) throw std::invalid_argument("contour_integral: need at least 4 samples");
  Cplx acc(0.0, 0.0);
  for (int k = 0; k < samples; ++k) {
    const double phi = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(samples);
    const Cplx e(std::cos(phi), std::sin(phi));
    const Cplx val = f(center + radius * e);
    if (!std::isfinite(val.real()) || !std::isfinite(val.imag()))
      throw std::runtime_error("contour_integral: non-finite sample at angle " +
                               std::to_string(phi));
    acc += val * e;
  }
  return acc * (radius / static_cast<double>(samples));
}

}  // namespace holo
