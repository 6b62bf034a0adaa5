#include "holo/spectral_flow.hpp"

#include <algorithm>
#include <cmath>

namespace holo {

namespace {

constexpr double kOverlapAmbiguity = 1e-3;
constexpr double kContinuityFloor = 0.9;
constexpr int kMaxBisection = 12;

CMatrix sample_hamiltonian(const ModelSpec& spec, double eps, double theta) {
  CMatrix h = hamiltonian(spec, theta);
  if (eps != 0.0) {
    const CMatrix c = symmetry_breaking(spec.levels);
    h += Cplx(eps, 0.0) * c;
  }
  return h;
}

// Diagonalize and, for the solvable families, phase-align each column to the
// closed-form branch gauge so tracked holonomy phases land in the same gauge
// as the analytic routes.
EigenSystem anchored_eigensystem(const ModelSpec& spec, double eps, double theta) {
  EigenSystem es = eig_hermitian(sample_hamiltonian(spec, eps, theta));
  if (!spec.solvable()) return es;
  const int n = spec.levels;
  for (int j = 0; j < n; ++j) {
    CVec col = es.vectors.column(j);
    Cplx best(0.0, 0.0);
    for (int b = 1; b <= n; ++b) {
      const Cplx ov = dot(eigvec_branch(spec, b, theta), col);
      if (std::abs(ov) > std::abs(best)) best = ov;
    }
    if (std::abs(best) > 0.5) {
      const Cplx phase = std::conj(best) / std::abs(best);
      for (auto& z : col) z *= phase;
      es.vectors.set_column(j, col);
    }
  }
  return es;
}

std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

struct StepMatch {
  std::vector<int> assign;  // branch m -> sorted index of the new sample
  CMatrix frame;            // transported branch vectors at the new sample
  std::vector<double> values;
  double min_overlap = 1.0;
  bool resolved = true;
};

// Match the branch frame at theta_a onto the sorted eigensystem at theta_b,
// bisecting the step when two assignments are within the ambiguity tolerance
// and eigenvalue extrapolation cannot separate them.
StepMatch match_step(const ModelSpec& spec, double eps, double theta_a, const CMatrix& frame_a,
                     const std::vector<double>& predicted, double theta_b, int depth) {
  const int n = spec.levels;
  const EigenSystem es = eig_hermitian(sample_hamiltonian(spec, eps, theta_b));

  // |<v_m(a)|w_j(b)>|
  std::vector<std::vector<double>> ov(n, std::vector<double>(n));
  std::vector<std::vector<Cplx>> raw(n, std::vector<Cplx>(n));
  for (int m = 0; m < n; ++m) {
    const CVec vm = frame_a.column(m);
    for (int j = 0; j < n; ++j) {
      raw[m][j] = dot(vm, es.vectors.column(j));
      ov[m][j] = std::abs(raw[m][j]);
    }
  }

  double best = -1.0, second = -1.0;
  std::vector<int> best_assign;
  double best_pred = 0.0, second_pred = 0.0;
  if (n <= 5) {
    for (const auto& p : all_permutations(n)) {
      double score = 0.0, pred = 0.0;
      for (int m = 0; m < n; ++m) {
        score += ov[m][p[m]];
        pred += std::abs(es.values[p[m]] - predicted[m]);
      }
      if (score > best) {
        second = best;
        second_pred = best_pred;
        best = score;
        best_pred = pred;
        best_assign = p;
      } else if (score > second) {
        second = score;
        second_pred = pred;
      }
    }
  } else {
    // greedy for larger dimensions
    best_assign.assign(n, -1);
    std::vector<bool> used(n, false);
    best = 0.0;
    for (int m = 0; m < n; ++m) {
      double bo = -1.0;
      int bj = -1;
      for (int j = 0; j < n; ++j)
        if (!used[j] && ov[m][j] > bo) {
          bo = ov[m][j];
          bj = j;
        }
      best_assign[m] = bj;
      used[bj] = true;
      best += bo;
    }
    second = -1.0;  // no runner-up bookkeeping in the greedy path
  }

  bool ambiguous = second >= 0.0 && (best - second) < kOverlapAmbiguity;
  if (ambiguous) {
    // extrapolated eigenvalues settle near-degenerate assignments
    if (second_pred > 2.0 * best_pred + 1e-12 || best_pred > 2.0 * second_pred + 1e-12) {
      ambiguous = false;
      if (best_pred > second_pred) {
        // overlap preferred one assignment, extrapolation the other: bisect
        ambiguous = true;
      }
    }
  }

  if (ambiguous && depth < kMaxBisection) {
    const double mid = 0.5 * (theta_a + theta_b);
    if (mid != theta_a && mid != theta_b) {
      StepMatch first = match_step(spec, eps, theta_a, frame_a, predicted, mid, depth + 1);
      StepMatch rest =
          match_step(spec, eps, mid, first.frame, first.values, theta_b, depth + 1);
      rest.min_overlap = std::min(first.min_overlap, rest.min_overlap);
      rest.resolved = first.resolved && rest.resolved;
      return rest;
    }
  }

  StepMatch out;
  out.assign = best_assign;
  out.resolved = !ambiguous;
  out.frame = CMatrix(n);
  out.values.resize(n);
  for (int m = 0; m < n; ++m) {
    const int j = best_assign[m];
    CVec w = es.vectors.column(j);
    const Cplx o = raw[m][j];
    const double mag = std::abs(o);
    if (mag > 1e-14) {
      const Cplx phase = std::conj(o) / mag;  // parallel transport on the grid
      for (auto& z : w) z *= phase;
    }
    out.frame.set_column(m, w);
    out.values[m] = es.values[j];
    out.min_overlap = std::min(out.min_overlap, mag);
  }
  return out;
}

}  // namespace

bool EigenPath::fully_matched() const {
  for (bool b : matched)
    if (!b) return false;
  return true;
}

EigenPath track(const ModelSpec& spec, double theta_start, double theta_end, int steps,
                GridKind kind, double eps) {
  spec.validate();
  if (steps < 16 && theta_start != theta_end)
    throw std::invalid_argument("track: need at least 16 steps");

  EigenPath path;
  path.spec = spec;
  path.eps = eps;
  path.span_start = theta_start;
  path.span_end = theta_end;
  path.kind = kind;

  const int n = spec.levels;
  if (theta_start == theta_end) {
    // null path: identity assignment
    const EigenSystem es = anchored_eigensystem(spec, eps, theta_start);
    path.grid = {theta_start};
    path.frames = {es.vectors};
    path.values.assign(n, std::vector<double>(1));
    for (int m = 0; m < n; ++m) path.values[m][0] = es.values[m];
    path.bridged = {false};
    return path;
  }

  const double h = (theta_end - theta_start) / static_cast<double>(steps);
  const int samples = (kind == GridKind::Endpoint) ? steps + 1 : steps;
  for (int k = 0; k < samples; ++k) {
    const double off = (kind == GridKind::Endpoint) ? static_cast<double>(k)
                                                    : (static_cast<double>(k) + 0.5);
    path.grid.push_back(theta_start + off * h);
  }

  // overall scale for the H ~ 0 bridge test
  double hscale = 0.0;
  for (int k = 0; k < 8; ++k)
    hscale = std::max(
        hscale,
        sample_hamiltonian(spec, eps, theta_start + (theta_end - theta_start) * k / 8.0)
            .max_abs());
  const double bridge_tol = 1e-12 * std::max(1.0, hscale);

  path.values.assign(n, std::vector<double>(path.grid.size()));
  path.frames.resize(path.grid.size());
  path.bridged.assign(path.grid.size(), false);
  path.matched.assign(path.grid.size() - 1, true);
  path.unresolved.assign(path.grid.size() - 1, false);

  // first sample: sorted order anchors the branch labels
  {
    const EigenSystem es = anchored_eigensystem(spec, eps, path.grid[0]);
    path.frames[0] = es.vectors;
    for (int m = 0; m < n; ++m) path.values[m][0] = es.values[m];
    if (kind == GridKind::Midpoint) {
      // carry the base gauge at span_start onto the first midpoint sample so
      // holonomies from midpoint and endpoint paths live in the same frame
      const EigenSystem base = anchored_eigensystem(spec, eps, theta_start);
      for (int j = 0; j < n; ++j) {
        CVec col = path.frames[0].column(j);
        Cplx best(0.0, 0.0);
        for (int m = 0; m < n; ++m) {
          const Cplx ov = dot(base.vectors.column(m), col);
          if (std::abs(ov) > std::abs(best)) best = ov;
        }
        if (std::abs(best) > 0.5) {
          const Cplx phase = std::conj(best) / std::abs(best);
          for (auto& z : col) z *= phase;
          path.frames[0].set_column(j, col);
        }
      }
    }
  }

  int last_solid = 0;  // most recent non-bridged sample
  for (size_t k = 1; k < path.grid.size(); ++k) {
    const CMatrix h_k = sample_hamiltonian(spec, eps, path.grid[k]);
    if (h_k.max_abs() < bridge_tol) {
      // spectrum collapse: the sample carries no eigenvector information
      path.bridged[k] = true;
      path.frames[k] = path.frames[k - 1];
      const EigenSystem es = eig_hermitian(h_k);
      for (int m = 0; m < n; ++m) path.values[m][k] = es.values[m];
      continue;
    }

    std::vector<double> predicted(n);
    for (int m = 0; m < n; ++m) {
      const size_t p1 = static_cast<size_t>(last_solid);
      if (p1 >= 1 && !path.bridged[p1 - 1]) {
        const double slope = (path.values[m][p1] - path.values[m][p1 - 1]) /
                             (path.grid[p1] - path.grid[p1 - 1]);
        predicted[m] = path.values[m][p1] + slope * (path.grid[k] - path.grid[p1]);
      } else {
        predicted[m] = path.values[m][p1];
      }
    }

    StepMatch sm = match_step(spec, eps, path.grid[last_solid], path.frames[last_solid],
                              predicted, path.grid[k], 0);
    path.frames[k] = sm.frame;
    for (int m = 0; m < n; ++m) path.values[m][k] = sm.values[m];
    path.matched[k - 1] = sm.min_overlap > kContinuityFloor;
    path.unresolved[k - 1] = !sm.resolved;
    last_solid = static_cast<int>(k);
  }
  return path;
}

FlowPermutation extract_flow(const EigenPath& path) {
  if (path.kind != GridKind::Endpoint)
    throw std::invalid_argument("extract_flow: endpoint path required");
  const ModelSpec& spec = path.spec;
  const int n = spec.levels;

  const CMatrix h0 = sample_hamiltonian(spec, path.eps, path.span_start);
  const CMatrix h1 = sample_hamiltonian(spec, path.eps, path.span_end);
  if (max_entry_diff(h0, h1) > 1e-12 * std::max(1.0, h0.max_abs()))
    throw std::invalid_argument("extract_flow: path does not span a closed cycle of H");

  const EigenSystem fresh = anchored_eigensystem(spec, path.eps, path.span_start);
  const CMatrix& tracked = path.frames.back();

  FlowPermutation flow;
  flow.sigma.assign(n, 0);
  flow.phases.assign(n, Cplx(0.0, 0.0));
  double min_mag = 1.0;
  for (int b = 0; b < n; ++b) {
    double best = -1.0;
    int arg = 0;
    Cplx raw(0.0, 0.0);
    for (int m = 0; m < n; ++m) {
      const Cplx o = dot(fresh.vectors.column(m), tracked.column(b));
      if (std::abs(o) > best) {
        best = std::abs(o);
        arg = m;
        raw = o;
      }
    }
    flow.sigma[b] = arg + 1;
    flow.phases[b] = raw / std::abs(raw);
    min_mag = std::min(min_mag, best);
  }
  flow.residual = 1.0 - min_mag;
  flow.ok = flow.residual <= 0.1;

  // a residual this large means tracking failed; sigma may not be a bijection
  std::vector<bool> seen(n, false);
  for (int b = 0; b < n; ++b) {
    if (seen[flow.sigma[b] - 1]) flow.ok = false;
    seen[flow.sigma[b] - 1] = true;
  }
  return flow;
}

CMatrix flow_matrix(const FlowPermutation& flow, int levels) {
  CMatrix m(levels);
  for (int b = 0; b < levels; ++b) m(flow.sigma[b] - 1, b) = flow.phases[b];
  return m;
}

std::vector<SigmaFlowRow> classify_sigma_flows(
    const std::vector<std::array<double, 4>>& c_grid, double v) {
  std::vector<SigmaFlowRow> rows;
  for (const auto& c : c_grid) {
    if (std::abs(c[3]) > 0.2)
      throw std::invalid_argument("classify_sigma_flows: |c5| <= 0.2 required");
    SigmaFlowRow row;
    row.c = c;
    const ModelSpec spec = ModelSpec::sigma_general(c[0], c[1], c[2], c[3], v);
    const EigenPath path = track(spec, 0.0, 2.0 * M_PI, 2048, GridKind::Endpoint);
    row.flow = extract_flow(path);
    row.resolved = row.flow.ok;
    for (bool u : path.unresolved)
      if (u) row.resolved = false;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace holo
