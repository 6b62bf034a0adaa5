// Closed-form parametric Hamiltonian families and their analytic eigensystems.
//
// All families share the shape H(theta) = R(theta)[cos(theta/2) Z + v sin(theta/2) F]
// with R either cos(theta/2) (2pi-periodic H) or 1 (4pi-periodic, anti-periodic H).
// The two- and three-level families are solvable: branch energies, continuous-gauge
// eigenvectors, the reparameterizing angles chi/xi and the scalar gauge functions
// f(theta), g(theta) are all available in closed form here.

#pragma once

#include <optional>
#include <string>

#include "holo/matrix.hpp"

namespace holo {

enum class Family { TwoLevel, ThreeLevel, SigmaGeneral, NLevelRankOne };
enum class Envelope { CosHalf, Unit };

struct ModelSpec {
  Family family = Family::TwoLevel;
  int levels = 2;
  double v = 0.5773502691896258;  // 1/sqrt(3), the two-level default
  Envelope envelope = Envelope::CosHalf;
  double c1 = 0.0, c2 = 0.0, c3 = 0.0, c5 = 0.0;  // sigma-family coefficients
  std::vector<double> w;                          // rank-one coupling direction

  static ModelSpec two_level(double v = 0.5773502691896258,
                             Envelope env = Envelope::CosHalf);
  static ModelSpec three_level(double v = 1.0, Envelope env = Envelope::CosHalf);
  static ModelSpec sigma_general(double c1, double c2, double c3, double c5,
                                 double v = 1.0);
  static ModelSpec n_level_rank_one(int n, double v, std::vector<double> w = {},
                                    Envelope env = Envelope::Unit);

  // Throws std::invalid_argument on violated invariants (v = 0, level-count
  // mismatches, unnormalized w, or a rank-one w orthogonal to a Z eigenvector).
  void validate() const;

  double period() const { return envelope == Envelope::CosHalf ? 2.0 * M_PI : 4.0 * M_PI; }
  bool solvable() const { return family == Family::TwoLevel || family == Family::ThreeLevel; }
};

// H(theta) on the real axis; theta is reduced modulo the period first so
// H(theta + period) == H(theta) holds bit-exactly.
CMatrix hamiltonian(const ModelSpec& spec, double theta);

// Analytic continuation to complex theta (no reduction).
CMatrix hamiltonian_complex(const ModelSpec& spec, Cplx theta);

// Constant symmetry-breaking term eps * Z_N (the model's diagonal generator)
// used to open the crossing at theta = pi into an avoided crossing with gap
// 2 eps (a transverse |1><2|-type coupling would only displace the crossing).
CMatrix symmetry_breaking(int dim);

// The Z and F blocks of H = R(theta)[cos(theta/2) Z + v sin(theta/2) F].
void hamiltonian_blocks(const ModelSpec& spec, CMatrix& z, CMatrix& f);

// ---- two-level closed forms -------------------------------------------------

// P_n(theta) (branch-continued); P_2 diverges at odd multiples of pi.
double p_branch_2(const ModelSpec& spec, int n, double theta);
// chi(theta): the continuous re-parameterizing angle, chi(0) = 0,
// chi(theta + 2pi) = chi(theta) + 2pi sgn(v).
double chi_angle(const ModelSpec& spec, double theta);
// f(theta) = (1/4) dchi/dtheta = v / (4 (cos^2(theta/2) + v^2 sin^2(theta/2))).
double gauge_f(const ModelSpec& spec, double theta);
Cplx gauge_f_complex(const ModelSpec& spec, Cplx theta);

// ---- three-level closed forms -----------------------------------------------

// Q_n(theta) (branch-continued); diverges at odd multiples of pi on one branch.
double q_branch_3(const ModelSpec& spec, int n, double theta);
// eta(theta): monotone angle with sin(eta/2) = sin^3(psi), psi the mixing angle.
double eta_angle(const ModelSpec& spec, double theta);
// xi(theta): continuous angle with Q_2(theta) = Rt(xi/6); xi(0) = 0,
// xi(theta + 2pi) = xi(theta) + 2pi sgn(v).
double xi_angle(const ModelSpec& spec, double theta);
// g(theta) = <Psi_1 | d/dtheta Psi_3>; the gauge potential entries are
// g(theta) and its theta +- 2pi translates.
double gauge_g(const ModelSpec& spec, double theta);

struct RtRsRc {
  double rt, rs, rc;  // rt is +-inf at cos(xi) = 0
};
// Rs xi = 3^(-1/4) sgn(sin xi) sqrt|sin xi|, Rc xi = sgn(cos xi) sqrt|cos xi|,
// Rt = Rs/Rc. sgn(0) := +1 throughout.
RtRsRc rt_rs_rc(double xi);

// ---- branch-ordered eigensystems ----------------------------------------------

struct AnalyticBranch {
  int n = 0;
  double value = 0.0;  // P_n or Q_n
  double angle = 0.0;  // chi (2-level) or xi (3-level)
};

struct AnalyticEigensystem {
  std::vector<double> energies;  // branch order (ascending only at theta = 0)
  CMatrix vectors;               // continuous-gauge eigenvectors as columns
  std::vector<AnalyticBranch> branches;
};

AnalyticEigensystem analytic_eigensystem_2(const ModelSpec& spec, double theta);
AnalyticEigensystem analytic_eigensystem_3(const ModelSpec& spec, double theta);

// Branch energy / eigenvector for either solvable family.
double energy_branch(const ModelSpec& spec, int n, double theta);
CVec eigvec_branch(const ModelSpec& spec, int n, double theta);

// Complexified branch energies continued from the real axis (ray tracking in
// the imaginary direction). Labels agree with energy_branch on the real axis.
std::vector<Cplx> complex_energies(const ModelSpec& spec, Cplx theta, int ray_steps = 96);

// ---- serialization ------------------------------------------------------------

std::string to_kv(const ModelSpec& spec);
ModelSpec spec_from_kv(const std::string& text);

// sgn with sgn(0) := +1
inline double sgn(double x) { return x < 0.0 ? -1.0 : 1.0; }

}  // namespace holo
