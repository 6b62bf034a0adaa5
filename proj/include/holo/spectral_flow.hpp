// Continuous eigen-branch tracking along real-theta paths, including the
// spectrum-collapse point H = 0 (bridged) and exact symmetry-protected
// crossings (disambiguated by eigenvalue extrapolation, then step bisection).

#pragma once

#include <array>

#include "holo/models.hpp"

namespace holo {

enum class GridKind { Endpoint, Midpoint };

struct EigenPath {
  ModelSpec spec;
  double eps = 0.0;  // optional |1><2|+|2><1| coupling added to H
  double span_start = 0.0, span_end = 0.0;
  GridKind kind = GridKind::Endpoint;
  std::vector<double> grid;
  std::vector<std::vector<double>> values;  // [branch][sample]
  std::vector<CMatrix> frames;              // per sample; columns = branch vectors
  std::vector<bool> matched;                // per step, |overlap| > 0.9 continuity
  std::vector<bool> bridged;                // per sample, H ~ 0 skipped
  std::vector<bool> unresolved;             // per step, ambiguous after bisection

  bool fully_matched() const;
  int levels() const { return spec.levels; }
};

// Track branches over [theta_start, theta_end].  Endpoint grids carry
// steps+1 samples including both ends; midpoint grids carry `steps` panel
// midpoints (these never hit the H = 0 collapse).
EigenPath track(const ModelSpec& spec, double theta_start, double theta_end, int steps,
                GridKind kind = GridKind::Endpoint, double eps = 0.0);

struct FlowPermutation {
  std::vector<int> sigma;   // 1-based: tracked branch n arrives at fresh level sigma[n-1]
  std::vector<Cplx> phases; // unit overlaps <fresh_sigma(n) | tracked_n>
  double residual = 0.0;    // 1 - min_n |overlap|
  bool ok = true;           // false when residual > 0.1
};

// Requires an endpoint path spanning one closed cycle of H.
FlowPermutation extract_flow(const EigenPath& path);

// Permutation matrix with the Manini-Pistolesi phases filled in:
// M[sigma(n)-1][n-1] = phase_n.
CMatrix flow_matrix(const FlowPermutation& flow, int levels);

struct SigmaFlowRow {
  std::array<double, 4> c;  // c1 c2 c3 c5
  FlowPermutation flow;
  bool resolved = true;
};

// Flow classification for the sigma family; enforces |c5| <= 0.2.
std::vector<SigmaFlowRow> classify_sigma_flows(
    const std::vector<std::array<double, 4>>& c_grid, double v);

}  // namespace holo
