#include "holo/holonomy.hpp"

#include <algorithm>
#include <cmath>

#include "holo/numerics.hpp"

namespace holo {

namespace {

CMatrix analytic_gauge_sample(const ModelSpec& spec, double theta) {
  if (spec.family == Family::TwoLevel) {
    const double f = gauge_f(spec, theta);
    CMatrix a(2);
    a(0, 1) = Cplx(0.0, f);
    a(1, 0) = Cplx(0.0, -f);
    return a;
  }
  if (spec.family == Family::ThreeLevel) {
    const double gp = gauge_g(spec, theta + 2.0 * M_PI);
    const double g0 = gauge_g(spec, theta);
    const double gm = gauge_g(spec, theta - 2.0 * M_PI);
    CMatrix a(3);
    a(0, 1) = Cplx(0.0, -gp);
    a(1, 0) = Cplx(0.0, gp);
    a(0, 2) = Cplx(0.0, g0);
    a(2, 0) = Cplx(0.0, -g0);
    a(1, 2) = Cplx(0.0, -gm);
    a(2, 1) = Cplx(0.0, gm);
    return a;
  }
  throw std::invalid_argument("analytic gauge field: solvable families only");
}

}  // namespace

GaugeField analytic_gauge_field(const ModelSpec& spec, double start, double end,
                                int samples) {
  if (!spec.solvable())
    throw std::invalid_argument("analytic_gauge_field: solvable families only");
  GaugeField field;
  field.spec = spec;
  field.provenance = GaugeProvenance::Analytic;
  field.span_start = start;
  field.span_end = end;
  const double h = (end - start) / static_cast<double>(samples);
  for (int k = 0; k < samples; ++k) {
    const double theta = start + (static_cast<double>(k) + 0.5) * h;
    field.grid.push_back(theta);
    field.a.push_back(analytic_gauge_sample(spec, theta));
  }
  return field;
}

GaugeField gauge_potential(const EigenPath& path, GaugeProvenance mode) {
  GaugeField field;
  field.spec = path.spec;
  field.provenance = mode;
  field.span_start = path.span_start;
  field.span_end = path.span_end;
  field.grid = path.grid;

  if (mode == GaugeProvenance::Analytic) {
    if (!path.spec.solvable())
      throw std::invalid_argument("gauge_potential: analytic mode needs a solvable family");
    for (double theta : path.grid) field.a.push_back(analytic_gauge_sample(path.spec, theta));
    return field;
  }

  if (!path.fully_matched())
    throw std::invalid_argument("gauge_potential: unmatched step in tracked path");
  const int n = path.levels();
  const size_t m = path.grid.size();
  if (m < 3) throw std::invalid_argument("gauge_potential: need at least 3 samples");

  for (size_t k = 0; k < m; ++k) {
    const size_t lo = (k == 0) ? 0 : k - 1;
    const size_t hi = (k + 1 == m) ? k : k + 1;
    const double dh = path.grid[hi] - path.grid[lo];
    CMatrix b(n);
    for (int col = 0; col < n; ++col) {
      CVec d(n);
      for (int row = 0; row < n; ++row)
        d[row] = (path.frames[hi](row, col) - path.frames[lo](row, col)) / dh;
      const CVec dv = d;
      for (int row = 0; row < n; ++row) {
        const CVec vn = path.frames[k].column(row);
        b(row, col) = Cplx(0.0, 1.0) * dot(vn, dv);
      }
    }
    // exact Hermitization kills the O(h) asymmetry of the stencil
    CMatrix a(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = 0.5 * (b(i, j) + std::conj(b(j, i)));
    field.a.push_back(a);
  }
  return field;
}

GaugeField diagonal_reduction(const GaugeField& field) {
  GaugeField out = field;
  for (auto& a : out.a) {
    const int n = a.dim();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) a(i, j) = Cplx(0.0, 0.0);
  }
  return out;
}

HolonomyMatrix classify_holonomy(const CMatrix& m) {
  const int n = m.dim();
  HolonomyMatrix h;
  h.m = m;
  h.sigma.assign(n, 0);
  h.entry_phases.assign(n, Cplx(0.0, 0.0));
  std::vector<int> row_hits(n, 0);
  for (int col = 0; col < n; ++col) {
    int arg = 0;
    double best = -1.0;
    int big = 0;
    for (int row = 0; row < n; ++row) {
      const double v = std::abs(m(row, col));
      if (v > best) {
        best = v;
        arg = row;
      }
      if (v > 0.5) ++big;
    }
    if (big != 1) h.reliable = false;
    h.sigma[col] = arg + 1;
    h.entry_phases[col] = m(arg, col) / best;
    h.residual = std::max(h.residual, std::abs(best - 1.0));
    ++row_hits[arg];
  }
  for (int r : row_hits)
    if (r != 1) h.reliable = false;
  if (h.residual > 0.05) h.reliable = false;
  return h;
}

HolonomyMatrix holonomy_matrix(const GaugeField& field) {
  const ModelSpec& spec = field.spec;
  const double cycle = std::abs(field.span_end - field.span_start);
  if (std::abs(cycle - spec.period()) > 1e-9 &&
      std::abs(std::remainder(cycle, spec.period())) > 1e-9)
    throw std::invalid_argument("holonomy_matrix: field must span closed cycles of H");

  std::vector<GeneratorSample> main_samples, diag_samples;
  main_samples.reserve(field.grid.size());
  diag_samples.reserve(field.grid.size());
  for (size_t k = 0; k < field.grid.size(); ++k) {
    main_samples.push_back({field.grid[k], field.a[k]});
    CMatrix neg_diag(field.a[k].dim());
    for (int i = 0; i < field.a[k].dim(); ++i) neg_diag(i, i) = -field.a[k](i, i);
    diag_samples.push_back({field.grid[k], neg_diag});
  }
  // M = T* exp(-i Int A) . T exp(+i Int A^D)
  const CMatrix m_main = ordered_product_exponential(main_samples, OrderDirection::Reverse);
  const CMatrix m_diag = ordered_product_exponential(diag_samples, OrderDirection::Forward);
  return classify_holonomy(m_main * m_diag);
}

HolonomyMatrix holonomy_of(const ModelSpec& spec, int samples) {
  if (spec.solvable())
    return holonomy_matrix(analytic_gauge_field(spec, 0.0, spec.period(), samples));
  const EigenPath path = track(spec, 0.0, spec.period(), samples, GridKind::Midpoint);
  return holonomy_matrix(gauge_potential(path, GaugeProvenance::FiniteDifference));
}

CrossValidation cross_validate(const ModelSpec& spec) {
  CrossValidation cv;
  const int n = spec.levels;
  const double period = spec.period();

  // integrated route, with a grid-refinement drift estimate
  GaugeField field_hi, field_lo;
  if (spec.solvable()) {
    field_hi = analytic_gauge_field(spec, 0.0, period, 4096);
    field_lo = analytic_gauge_field(spec, 0.0, period, 2048);
  } else {
    const EigenPath p_hi = track(spec, 0.0, period, 4096, GridKind::Midpoint);
    const EigenPath p_lo = track(spec, 0.0, period, 2048, GridKind::Midpoint);
    field_hi = gauge_potential(p_hi, GaugeProvenance::FiniteDifference);
    field_lo = gauge_potential(p_lo, GaugeProvenance::FiniteDifference);
  }
  const HolonomyMatrix hm_hi = holonomy_matrix(field_hi);
  const HolonomyMatrix hm_lo = holonomy_matrix(field_lo);
  cv.integrated_m = hm_hi.m;
  cv.grid_drift = max_entry_diff(hm_hi.m, hm_lo.m);

  // tracker route
  const EigenPath flow_path = track(spec, 0.0, period, 2048, GridKind::Endpoint);
  const FlowPermutation flow = extract_flow(flow_path);
  cv.flow_m = flow_matrix(flow, n);

  // closed-form frame transport: M = F(0)^dag F(period)
  if (spec.solvable()) {
    cv.has_analytic = true;
    CMatrix f0(n), f1(n);
    for (int b = 1; b <= n; ++b) {
      f0.set_column(b - 1, eigvec_branch(spec, b, 0.0));
      f1.set_column(b - 1, eigvec_branch(spec, b, period));
    }
    cv.analytic_m = f0.adjoint() * f1;
  }

  cv.max_discrepancy = max_entry_diff(cv.integrated_m, cv.flow_m);
  if (cv.has_analytic) {
    cv.max_discrepancy =
        std::max(cv.max_discrepancy, max_entry_diff(cv.integrated_m, cv.analytic_m));
    cv.max_discrepancy =
        std::max(cv.max_discrepancy, max_entry_diff(cv.flow_m, cv.analytic_m));
  }
  cv.pass = cv.max_discrepancy < 1e-4;
  return cv;
}

}  // namespace holo
