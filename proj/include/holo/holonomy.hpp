// Gauge potential A(theta) = <Psi_n | i d_theta Psi_m>, its diagonal reduction,
// and the cycle holonomy M = (anti-ordered exp of -i A) (ordered exp of +i A^D).

#pragma once

#include "holo/spectral_flow.hpp"

namespace holo {

enum class GaugeProvenance { Analytic, FiniteDifference };

struct GaugeField {
  ModelSpec spec;
  GaugeProvenance provenance = GaugeProvenance::Analytic;
  double span_start = 0.0, span_end = 0.0;
  std::vector<double> grid;
  std::vector<CMatrix> a;  // Hermitian at every sample
};

// Analytic mode evaluates the closed-form f/g assembly (solvable families only);
// finite-difference mode differentiates the parallel-transported frame of `path`
// and symmetrizes. Both need a fully matched path in FD mode.
GaugeField gauge_potential(const EigenPath& path, GaugeProvenance mode);

// Closed-form gauge field on a fresh midpoint grid (no tracking involved).
GaugeField analytic_gauge_field(const ModelSpec& spec, double start, double end,
                                int samples);

GaugeField diagonal_reduction(const GaugeField& field);

struct HolonomyMatrix {
  CMatrix m;
  std::vector<int> sigma;        // column n carries its big entry in row sigma[n-1]
  std::vector<Cplx> entry_phases;
  double residual = 0.0;         // max | |selected entry| - 1 |
  bool reliable = true;          // residual <= 0.05 and permutation structure intact
};

// Requires a field spanning one closed cycle of H.
HolonomyMatrix holonomy_matrix(const GaugeField& field);

// Convenience: one-cycle holonomy of a model on the default midpoint grid.
HolonomyMatrix holonomy_of(const ModelSpec& spec, int samples = 4096);

HolonomyMatrix classify_holonomy(const CMatrix& m);

struct CrossValidation {
  bool has_analytic = false;
  CMatrix analytic_m;    // frame-transport prediction from the closed-form gauge
  CMatrix integrated_m;  // path-ordered integral
  CMatrix flow_m;        // tracker permutation with phases
  double max_discrepancy = 0.0;
  double grid_drift = 0.0;  // |M(4096) - M(2048)| entrywise
  bool pass = false;        // max_discrepancy < 1e-4
};

CrossValidation cross_validate(const ModelSpec& spec);

}  // namespace holo
