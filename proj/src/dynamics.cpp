#include "holo/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace holo {

double Schedule::s(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  switch (shape) {
    case ScheduleShape::SmoothSine:
      return u - std::sin(2.0 * M_PI * u) / (2.0 * M_PI);
    case ScheduleShape::SmoothCubic:
      return u * u * (3.0 - 2.0 * u);
  }
  return u;
}

long default_steps_for(double tau) {
  return std::max<long>(20000, static_cast<long>(std::ceil(80.0 * tau)));
}

namespace {

// Flattened H(t) psi evaluation: H = env(theta)[hc Z + v hs F] + eps C with
// Z, F, C cached as raw arrays. This is the plain RK4 of the numerics kernel,
// restated without per-step allocation so 1e8-step sweeps stay affordable.
struct FastEvolver {
  int n;
  double v;
  double eps;
  double period;
  Envelope envelope;
  Schedule schedule;
  std::vector<Cplx> z, f, c;

  FastEvolver(const ModelSpec& spec, double eps_in, const Schedule& sch)
      : n(spec.levels), v(spec.v), eps(eps_in), period(spec.period()),
        envelope(spec.envelope), schedule(sch) {
    CMatrix zz, ff;
    hamiltonian_blocks(spec, zz, ff);
    z.resize(static_cast<size_t>(n) * n);
    f.resize(static_cast<size_t>(n) * n);
    c.resize(static_cast<size_t>(n) * n, Cplx(0.0, 0.0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        z[static_cast<size_t>(i) * n + j] = zz(i, j);
        f[static_cast<size_t>(i) * n + j] = ff(i, j);
      }
    CMatrix cc = symmetry_breaking(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c[static_cast<size_t>(i) * n + j] = cc(i, j);
  }

  // y_out = -i (H(theta(t)) + eps C) y
  inline void deriv(double t, const Cplx* y, Cplx* y_out) const {
    const double theta = schedule.theta(t, period);
    const double hc = std::cos(0.5 * theta);
    const double hs = std::sin(0.5 * theta);
    const double env = (envelope == Envelope::CosHalf) ? hc : 1.0;
    const double az = env * hc;
    const double af = env * v * hs;
    for (int i = 0; i < n; ++i) {
      Cplx acc(0.0, 0.0);
      const size_t row = static_cast<size_t>(i) * n;
      for (int j = 0; j < n; ++j)
        acc += (az * z[row + j] + af * f[row + j] + eps * c[row + j]) * y[j];
      y_out[i] = Cplx(acc.imag(), -acc.real());  // multiply by -i
    }
  }

  // fixed-step RK4; returns final state, reports norm drift
  CVec run(const CVec& y0, long steps, double* drift) const {
    const double h = schedule.tau / static_cast<double>(steps);
    CVec y = y0;
    std::vector<Cplx> k1(n), k2(n), k3(n), k4(n), tmp(n);
    for (long st = 0; st < steps; ++st) {
      const double t = h * static_cast<double>(st);
      deriv(t, y.data(), k1.data());
      for (int i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
      deriv(t + 0.5 * h, tmp.data(), k2.data());
      for (int i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
      deriv(t + 0.5 * h, tmp.data(), k3.data());
      for (int i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
      deriv(t + h, tmp.data(), k4.data());
      for (int i = 0; i < n; ++i)
        y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    double nn = 0.0;
    for (const auto& zz : y) nn += std::norm(zz);
    if (!std::isfinite(nn)) throw std::runtime_error("evolve: non-finite state");
    *drift = std::abs(std::sqrt(nn) - 1.0);
    return y;
  }
};

}  // namespace

AdiabaticRun evolve(const ModelSpec& spec, double eps, const Schedule& schedule,
                    long steps) {
  spec.validate();
  if (steps < 1) throw std::invalid_argument("evolve: steps must be positive");

  AdiabaticRun run;
  run.spec = spec;
  run.eps = eps;
  run.schedule = schedule;

  CMatrix h0 = hamiltonian(spec, 0.0);
  if (eps != 0.0) h0 += Cplx(eps, 0.0) * symmetry_breaking(spec.levels);
  const EigenSystem fresh = eig_hermitian(h0);
  const int n = spec.levels;

  const FastEvolver ev(spec, eps, schedule);
  for (int b = 0; b < n; ++b) {
    CVec psi;
    double drift = 0.0;
    long use = steps;
    for (int attempt = 0;; ++attempt) {
      psi = ev.run(fresh.vectors.column(b), use, &drift);
      if (drift <= 1e-5) break;
      if (attempt >= 4)
        throw std::runtime_error("evolve: norm drift persists after step doubling");
      use *= 2;
    }
    run.steps_used = std::max(run.steps_used, use);
    run.norm_drift = std::max(run.norm_drift, drift);
    run.final_states.push_back(psi);
  }

  run.fidelities.assign(n, std::vector<double>(n));
  run.dynamical_phases.assign(n, 0.0);
  for (int b = 0; b < n; ++b) {
    double best = -1.0;
    Cplx raw(0.0, 0.0);
    for (int m = 0; m < n; ++m) {
      const Cplx o = dot(fresh.vectors.column(m), run.final_states[b]);
      run.fidelities[b][m] = std::abs(o);
      if (std::abs(o) > best) {
        best = std::abs(o);
        raw = o;
      }
    }
    run.dynamical_phases[b] = -std::arg(raw);
  }
  return run;
}

std::vector<LandauZenerRow> landau_zener_window(const ModelSpec& spec, double eps,
                                                const std::vector<double>& taus, int jobs) {
  if (taus.empty()) throw std::invalid_argument("landau_zener_window: tau list empty");

  // gaps from a tracked path of the (possibly perturbed) model
  const EigenPath path = track(spec, 0.0, spec.period(), 4096, GridKind::Midpoint, eps);
  const int n = spec.levels;
  double delta = 1e300, dgap = 0.0;
  double dgap_min_window = 1e300;
  for (size_t k = 0; k < path.grid.size(); ++k) {
    const double g01 = path.values[1][k] - path.values[0][k];
    const double near_pi = std::abs(std::remainder(path.grid[k] - M_PI, 2.0 * M_PI));
    if (near_pi < 0.5) delta = std::min(delta, std::abs(g01));
    if (n == 2) {
      dgap = std::max(dgap, std::abs(g01));
    } else if (near_pi < 0.5) {
      dgap_min_window = std::min(dgap_min_window, path.values[2][k] - path.values[1][k]);
    }
  }
  if (n > 2) dgap = dgap_min_window;

  std::vector<LandauZenerRow> rows(taus.size());
  auto work = [&](size_t i) {
    Schedule sch;
    sch.tau = taus[i];
    const AdiabaticRun run = evolve(spec, eps, sch, default_steps_for(taus[i]));
    LandauZenerRow row;
    row.tau = taus[i];
    row.delta = delta;
    row.dgap = dgap;
    row.exchange_fidelity = run.fidelities[0][1];
    for (int b = 0; b < n; ++b)
      row.exchange_per_state.push_back(run.fidelities[b][(b + 1) % n]);
    rows[i] = row;
  };

  if (jobs <= 1) {
    for (size_t i = 0; i < taus.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    for (int j = 0; j < jobs; ++j)
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < taus.size(); i = next.fetch_add(1)) work(i);
      });
    for (auto& t : pool) t.join();
  }
  return rows;
}

}  // namespace holo
