// Exceptional points of the complexified models, pole residues of the gauge
// scalars, Re(E_m - E_n) = 0 branch-cut curves, and the Mercator chart.

#pragma once

#include "holo/models.hpp"

namespace holo {

enum class EpKind { PoleOfA, SpectatorDegeneracy };
enum class EpMethod { Analytic, NewtonSearch };

struct ExceptionalPoint {
  Cplx theta{0.0, 0.0};
  std::pair<int, int> pair{1, 2};  // coalescing branch labels, 1-based, first < second
  EpKind kind = EpKind::PoleOfA;
  EpMethod method = EpMethod::Analytic;
  Cplx residue{0.0, 0.0};   // filled by pole_residue when requested
  bool at_infinity = false;  // |v| = 1 two-level marker: poles escaped to +-i inf
};

// Closed-form exceptional points (solvable families), Re folded into [0, 2pi).
// Two-level: theta = pi spectator plus the conjugate pole pair from
// cot^2(theta/2) = -v^2.  Three-level: theta = pi spectator plus the four pole
// points from 27 K^4 + 9 K^2 + 1 = 0, K = v tan(theta/2).
std::vector<ExceptionalPoint> analytic_exceptional_points(const ModelSpec& spec);

// Newton iteration on the discriminant of the characteristic polynomial in
// complex theta. Non-converging seeds are dropped; roots deduplicated within
// 1e-6 and classified pole-vs-spectator by the circle growth of the pair
// scalar.
std::vector<ExceptionalPoint> newton_exceptional_points(const ModelSpec& spec,
                                                        const std::vector<Cplx>& seeds);

// Discriminant of det(H(theta) - lambda) as a function of complex theta.
Cplx discriminant_at(const ModelSpec& spec, Cplx theta);

// Scalar gauge function of a level pair continued off the real axis,
// <Psi_m | dH/dtheta | Psi_n> / (E_n - E_m) in the bilinear (transpose) form,
// with branch tracking along the sampling path. N <= 3 families.
// (1/2pi i) contour integral around ep.theta; radius-halving consistency is
// checked and inconsistency reported via std::runtime_error.
Cplx pole_residue(const ModelSpec& spec, const ExceptionalPoint& ep, double radius,
                  int samples = 512);

struct Window {
  double re_min, re_max, im_min, im_max;
};

struct BranchCutCurve {
  std::pair<int, int> pair;
  std::vector<std::vector<Cplx>> polylines;  // zero contours of Re(E_m - E_n)
};

// Marching-squares zero contour of Re(E_m - E_n) over the window, with the
// complexified branches ray-tracked column by column from the real axis.
BranchCutCurve branch_cuts(const ModelSpec& spec, std::pair<int, int> pair,
                           const Window& window, int resolution);

// gd(y) = 2 arctan(tanh(y/2)): compactifies +-i inf onto +-pi/2.
double gudermannian(double y);

struct MercatorPoint {
  double re = 0.0;
  double gd_im = 0.0;
  EpKind kind = EpKind::PoleOfA;
  std::pair<int, int> pair{1, 2};
};

struct MercatorMap {
  std::vector<MercatorPoint> points;
  std::vector<BranchCutCurve> cuts;
};

// Chart of the exceptional points and branch cuts over one period,
// Re theta in [0, 2pi), vertical axis gd(Im theta).
MercatorMap mercator_map(const ModelSpec& spec, double im_extent = 4.0, int resolution = 161);

}  // namespace holo
