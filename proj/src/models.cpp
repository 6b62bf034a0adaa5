#include "holo/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace holo {

namespace {

constexpr double kPi = M_PI;
constexpr double kSqrt3 = 1.7320508075688772;

struct Reduced {
  long k;     // winding count
  double tr;  // theta - 2 pi k, in [0, 2 pi)
};

Reduced reduce_2pi(double theta) {
  double k = std::floor(theta / (2.0 * kPi));
  double tr = theta - 2.0 * kPi * k;
  if (tr < 0.0) {
    tr += 2.0 * kPi;
    k -= 1.0;
  }
  if (tr >= 2.0 * kPi) {
    tr -= 2.0 * kPi;
    k += 1.0;
  }
  return {static_cast<long>(k), tr};
}

int parity(long k) { return (k % 2 == 0) ? 1 : -1; }

// branch label shift per winding: n -> n+1 (mod N), 1-based
int eff_branch(int n, long k, int levels) {
  long m = (static_cast<long>(n) - 1 + k) % levels;
  if (m < 0) m += levels;
  return static_cast<int>(m) + 1;
}

// ---- two-level core ----------------------------------------------------------

struct TwoCore {
  double s, c, w;
  double ecore[2];  // cos(theta/2) * P_n, finite everywhere
};

TwoCore two_core(double v, double tr) {
  TwoCore t;
  t.s = std::sin(0.5 * tr);
  t.c = std::cos(0.5 * tr);
  t.w = std::sqrt(t.c * t.c + v * v * t.s * t.s);
  t.ecore[0] = v * t.s - sgn(v) * t.w;
  t.ecore[1] = v * t.s + sgn(v) * t.w;
  return t;
}

// ---- three-level core ----------------------------------------------------------

struct ThreeCore {
  double s, c, r;
  double cp, sp;    // cos psi = c/r (signed), sin psi = sqrt(3)|v|s/r (>= 0)
  double num[3];    // sin(psi) - 2 sin(x_n), evaluated in cancellation-free form
  double ecore[3];  // cos(theta/2) * Q_n = r * num / sqrt(3)
  double q[3];      // Q_n; one branch diverges at tr = pi
};

// numerators for the mixing angle psi in [0, pi], supplied through its exact
// ratios cp = cos psi, sp = sin psi (never through psi itself, which loses all
// relative precision near pi/2):
//   d = psi - pi/2 = asin(-cp)
//   e = (eta - pi)/6 = sgn(d) asin(|cp| sqrt(1+sp^2+sp^4))/3
//   num1 = -2 sin((d+e)/2) sin((d-e)/2) + sqrt(3) sin e
//   num2 = -2 sin((d+e)/2) sin((d-e)/2) - sqrt(3) sin e
//   num3 = cos d + 2 cos e
void three_numerators(double cp, double sp, double out[3]) {
  const double sgn_d = (cp > 0.0) ? -1.0 : 1.0;
  double d, e;
  if (std::abs(cp) <= sp) {  // middle band of the mixing angle
    d = std::asin(std::clamp(-cp, -1.0, 1.0));
    const double arg =
        std::min(1.0, std::abs(cp) * std::sqrt(1.0 + sp * sp + sp * sp * sp * sp));
    e = sgn_d * std::asin(arg) / 3.0;
  } else {  // psi near 0 or pi: complement form, exact since 1 - arg^2 = sin^6 psi
    d = sgn_d * (0.5 * kPi - std::asin(std::min(1.0, sp)));
    e = sgn_d * (0.5 * kPi - std::asin(std::min(1.0, sp * sp * sp))) / 3.0;
  }
  const double prod = -2.0 * std::sin(0.5 * (d + e)) * std::sin(0.5 * (d - e));
  out[0] = prod + kSqrt3 * std::sin(e);
  out[1] = prod - kSqrt3 * std::sin(e);
  out[2] = std::cos(d) + 2.0 * std::cos(e);
}

ThreeCore three_core(double v, double tr) {
  ThreeCore t;
  t.s = std::sin(0.5 * tr);
  t.c = std::cos(0.5 * tr);
  t.r = std::sqrt(t.c * t.c + 3.0 * v * v * t.s * t.s);
  t.cp = t.c / t.r;
  t.sp = kSqrt3 * std::abs(v) * t.s / t.r;
  if (v >= 0.0) {
    three_numerators(t.cp, t.sp, t.num);
  } else {
    // Q_n(psi) = -Q_{4-n}(-psi): mirror labels and flip signs
    double m[3];
    three_numerators(t.cp, t.sp, m);
    t.num[0] = -m[2];
    t.num[1] = -m[1];
    t.num[2] = -m[0];
  }
  for (int j = 0; j < 3; ++j) {
    t.ecore[j] = t.r * t.num[j] / kSqrt3;
    t.q[j] = t.ecore[j] / t.c;
  }
  return t;
}

// eta0 in [0, 2pi] for psi in [0, pi] (exact-ratio arguments), odd-extended
double eta_base(double cp, double sp, double vsign) {
  const double sgn_d = (cp > 0.0) ? -1.0 : 1.0;
  double half;
  if (std::abs(cp) <= sp) {
    const double arg =
        std::min(1.0, std::abs(cp) * std::sqrt(1.0 + sp * sp + sp * sp * sp * sp));
    half = sgn_d * std::asin(arg);
  } else {
    half = sgn_d * (0.5 * kPi - std::asin(std::min(1.0, sp * sp * sp)));
  }
  const double e = kPi + 2.0 * half;
  return vsign >= 0.0 ? e : -e;
}

CMatrix sigma_matrix(int j) {
  CMatrix m(3);
  switch (j) {
    case 1:
      m(1, 2) = m(2, 1) = 1.0;
      break;
    case 2:
      m(0, 2) = m(2, 0) = 1.0;
      break;
    case 3:
      m(0, 1) = m(1, 0) = 1.0;
      break;
    case 4:
      m(0, 0) = 1.0;
      m(2, 2) = -1.0;
      break;
    case 5:
      m(0, 0) = 1.0 / kSqrt3;
      m(1, 1) = -2.0 / kSqrt3;
      m(2, 2) = 1.0 / kSqrt3;
      break;
    default:
      throw std::invalid_argument("sigma_matrix: index out of range");
  }
  return m;
}

// Z and F blocks of H = R [cos(theta/2) Z + v sin(theta/2) F]
void model_blocks(const ModelSpec& spec, CMatrix& z, CMatrix& f) {
  switch (spec.family) {
    case Family::TwoLevel:
      z = CMatrix(2);
      z(0, 0) = 1.0;
      z(1, 1) = -1.0;
      f = CMatrix(2);
      f(0, 0) = f(0, 1) = f(1, 0) = f(1, 1) = 1.0;
      break;
    case Family::ThreeLevel:
      z = CMatrix(3);
      z(0, 0) = 1.0;
      z(2, 2) = -1.0;
      f = CMatrix(3);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) f(i, j) = 1.0;
      break;
    case Family::SigmaGeneral:
      z = sigma_matrix(4) + Cplx(spec.c5, 0.0) * sigma_matrix(5);
      f = CMatrix::identity(3) + Cplx(spec.c1, 0.0) * sigma_matrix(1) +
          Cplx(spec.c2, 0.0) * sigma_matrix(2) + Cplx(spec.c3, 0.0) * sigma_matrix(3);
      break;
    case Family::NLevelRankOne: {
      const int n = spec.levels;
      z = CMatrix(n);
      for (int i = 0; i < n; ++i)
        z(i, i) = (n == 1) ? 1.0 : 1.0 - 2.0 * static_cast<double>(i) / (n - 1);
      f = CMatrix(n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) f(i, j) = spec.w[i] * spec.w[j];
      break;
    }
  }
}

CMatrix assemble(const ModelSpec& spec, Cplx half_cos, Cplx half_sin, Cplx envelope) {
  CMatrix z, f;
  model_blocks(spec, z, f);
  CMatrix h = (envelope * half_cos) * z;
  h += (envelope * spec.v * half_sin) * f;
  return h;
}

}  // namespace

// ---- ModelSpec ------------------------------------------------------------------

ModelSpec ModelSpec::two_level(double v, Envelope env) {
  ModelSpec s;
  s.family = Family::TwoLevel;
  s.levels = 2;
  s.v = v;
  s.envelope = env;
  s.validate();
  return s;
}

ModelSpec ModelSpec::three_level(double v, Envelope env) {
  ModelSpec s;
  s.family = Family::ThreeLevel;
  s.levels = 3;
  s.v = v;
  s.envelope = env;
  s.validate();
  return s;
}

ModelSpec ModelSpec::sigma_general(double c1, double c2, double c3, double c5, double v) {
  ModelSpec s;
  s.family = Family::SigmaGeneral;
  s.levels = 3;
  s.v = v;
  s.c1 = c1;
  s.c2 = c2;
  s.c3 = c3;
  s.c5 = c5;
  s.validate();
  return s;
}

ModelSpec ModelSpec::n_level_rank_one(int n, double v, std::vector<double> w, Envelope env) {
  ModelSpec s;
  s.family = Family::NLevelRankOne;
  s.levels = n;
  s.v = v;
  s.envelope = env;
  if (w.empty()) w.assign(static_cast<size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
  s.w = std::move(w);
  s.validate();
  return s;
}

void ModelSpec::validate() const {
  if (v == 0.0) throw std::invalid_argument("ModelSpec: v = 0 is not admitted");
  switch (family) {
    case Family::TwoLevel:
      if (levels != 2) throw std::invalid_argument("ModelSpec: two_level requires N=2");
      break;
    case Family::ThreeLevel:
    case Family::SigmaGeneral:
      if (levels != 3) throw std::invalid_argument("ModelSpec: family requires N=3");
      break;
    case Family::NLevelRankOne: {
      if (levels < 2 || levels > 64)
        throw std::invalid_argument("ModelSpec: rank-one family needs 2 <= N <= 64");
      if (static_cast<int>(w.size()) != levels)
        throw std::invalid_argument("ModelSpec: w must have N components");
      double nrm = 0.0;
      for (double x : w) nrm += x * x;
      if (std::abs(std::sqrt(nrm) - 1.0) > 1e-12)
        throw std::invalid_argument("ModelSpec: w must be normalized");
      // every Z eigenvector (a basis vector) must overlap w
      for (double x : w)
        if (std::abs(x) < 1e-10)
          throw std::invalid_argument("ModelSpec: w has vanishing overlap with a Z eigenvector");
      break;
    }
  }
}

// ---- Hamiltonians ----------------------------------------------------------------

CMatrix hamiltonian(const ModelSpec& spec, double theta) {
  const Reduced rd = reduce_2pi(theta);
  const double hc = std::cos(0.5 * rd.tr);
  const double hs = std::sin(0.5 * rd.tr);
  if (spec.envelope == Envelope::CosHalf) {
    // (-1)^k from cos(theta/2), squared away: H is exactly 2pi-periodic
    return assemble(spec, hc, hs, hc);
  }
  // R = 1: H(theta + 2 pi) = -H(theta)
  return assemble(spec, hc, hs, static_cast<double>(parity(rd.k)));
}

CMatrix hamiltonian_complex(const ModelSpec& spec, Cplx theta) {
  const Cplx hc = std::cos(0.5 * theta);
  const Cplx hs = std::sin(0.5 * theta);
  const Cplx env = (spec.envelope == Envelope::CosHalf) ? hc : Cplx(1.0, 0.0);
  return assemble(spec, hc, hs, env);
}

CMatrix symmetry_breaking(int dim) {
  CMatrix m(dim);
  for (int i = 0; i < dim; ++i)
    m(i, i) = (dim == 1) ? 1.0 : 1.0 - 2.0 * static_cast<double>(i) / (dim - 1);
  return m;
}

void hamiltonian_blocks(const ModelSpec& spec, CMatrix& z, CMatrix& f) {
  model_blocks(spec, z, f);
}

// ---- two-level closed forms --------------------------------------------------------

double p_branch_2(const ModelSpec& spec, int n, double theta) {
  const Reduced rd = reduce_2pi(theta);
  const TwoCore t = two_core(spec.v, rd.tr);
  const int b = eff_branch(n, rd.k, 2);
  const double u = std::abs(spec.v);
  if (b == 1) return -sgn(spec.v) * t.c / (u * t.s + t.w);
  return sgn(spec.v) * (u * t.s + t.w) / t.c;  // +-inf at tr = pi
}

double chi_angle(const ModelSpec& spec, double theta) {
  const Reduced rd = reduce_2pi(theta);
  const double alpha0 = std::atan2(spec.v * std::sin(0.5 * rd.tr), std::cos(0.5 * rd.tr));
  const double alpha = sgn(spec.v) * kPi * static_cast<double>(rd.k) + alpha0;
  return 2.0 * alpha;
}

double gauge_f(const ModelSpec& spec, double theta) {
  const Reduced rd = reduce_2pi(theta);
  const TwoCore t = two_core(spec.v, rd.tr);
  return spec.v / (4.0 * t.w * t.w);
}

Cplx gauge_f_complex(const ModelSpec& spec, Cplx theta) {
  const Cplx c = std::cos(0.5 * theta);
  const Cplx s = std::sin(0.5 * theta);
  return spec.v / (4.0 * (c * c + spec.v * spec.v * s * s));
}

// ---- three-level closed forms --------------------------------------------------------

double q_branch_3(const ModelSpec& spec, int n, double theta) {
  const Reduced rd = reduce_2pi(theta);
  const ThreeCore t = three_core(spec.v, rd.tr);
  return t.q[eff_branch(n, rd.k, 3) - 1];
}

double eta_angle(const ModelSpec& spec, double theta) {
  const Reduced rd = reduce_2pi(theta);
  const ThreeCore t = three_core(spec.v, rd.tr);
  return 2.0 * kPi * sgn(spec.v) * static_cast<double>(rd.k) + eta_base(t.cp, t.sp, spec.v);
}

double xi_angle(const ModelSpec& spec, double theta) {
  const Reduced rd = reduce_2pi(theta);
  const ThreeCore t = three_core(spec.v, rd.tr);
  const double q2 = t.q[eff_branch(2, rd.k, 3) - 1];
  const double a = std::isinf(q2) ? (q2 > 0 ? 0.5 * kPi : -0.5 * kPi)
                                  : std::atan(kSqrt3 * q2 * std::abs(q2));
  // place the principal angle into the winding-k window of width pi/3
  const double center = sgn(spec.v) * (static_cast<double>(rd.k) + 0.5) * kPi / 3.0;
  const double m = std::round((center - a) / kPi);
  return 6.0 * (a + m * kPi);
}

RtRsRc rt_rs_rc(double xi) {
  RtRsRc r;
  const double s = std::sin(xi), c = std::cos(xi);
  r.rs = std::pow(3.0, -0.25) * sgn(s) * std::sqrt(std::abs(s));
  r.rc = sgn(c) * std::sqrt(std::abs(c));
  if (std::abs(c) < 1e-15) {  // cos(xi) vanished to rounding: signed infinity marker
    r.rt = sgn(s) * sgn(c) * std::numeric_limits<double>::infinity();
  } else {
    r.rt = r.rs / r.rc;
  }
  return r;
}

namespace {

// <Psi_a | d/dtheta Psi_b> for the three-level family, via
// <Psi_a | dH | Psi_b> / (E_b - E_a) with H in the cos-half form (the
// eigenvectors do not depend on the envelope). qa, qb are the branch values;
// ecb = cos(theta/2) Q_b.  Requires |qb| >= |qa|.
double pair_scalar_3(double v, double c, double s, double qa, double qb, double ecb) {
  const double na = std::sqrt(3.0 * qa * qa * qa * qa + 1.0);
  const double dz = c * c - s * s;
  if (std::abs(qb) > 1.0) {
    const double rb = c / ecb;  // 1/qb, finite even when qb overflows
    const double num = -2.0 * c * s * qa * (qa * rb + 1.0) +
                       0.5 * v * dz * (3.0 * qa * qa - 1.0) * (3.0 - rb * rb);
    const double den =
        c * ecb * (1.0 - qa * rb) * na * std::sqrt(3.0 + rb * rb * rb * rb);
    return num / den;
  }
  const double nb = std::sqrt(3.0 * qb * qb * qb * qb + 1.0);
  const double num = -2.0 * c * s * qa * qb * (qa + qb) +
                     0.5 * v * dz * (3.0 * qa * qa - 1.0) * (3.0 * qb * qb - 1.0);
  const double den = c * c * (qb - qa) * na * nb;
  return num / den;
}

}  // namespace

double gauge_g(const ModelSpec& spec, double theta) {
  const Reduced rd = reduce_2pi(theta);
  // removable 0/0 exactly at the spectrum-collapse point: evaluate symmetrically
  if (std::abs(std::cos(0.5 * rd.tr)) < 1e-8)
    return 0.5 * (gauge_g(spec, theta - 1e-5) + gauge_g(spec, theta + 1e-5));
  const ThreeCore t = three_core(spec.v, rd.tr);
  const int b1 = eff_branch(1, rd.k, 3) - 1;
  const int b3 = eff_branch(3, rd.k, 3) - 1;
  const double q1 = t.q[b1], q3 = t.q[b3];
  if (std::abs(q3) >= std::abs(q1))
    return pair_scalar_3(spec.v, t.c, t.s, q1, q3, t.ecore[b3]);
  return -pair_scalar_3(spec.v, t.c, t.s, q3, q1, t.ecore[b1]);
}

// ---- branch eigensystems ---------------------------------------------------------

double energy_branch(const ModelSpec& spec, int n, double theta) {
  const Reduced rd = reduce_2pi(theta);
  double ecore;
  if (spec.family == Family::TwoLevel) {
    ecore = two_core(spec.v, rd.tr).ecore[eff_branch(n, rd.k, 2) - 1];
  } else if (spec.family == Family::ThreeLevel) {
    ecore = three_core(spec.v, rd.tr).ecore[eff_branch(n, rd.k, 3) - 1];
  } else {
    throw std::invalid_argument("energy_branch: closed form only for the solvable families");
  }
  if (spec.envelope == Envelope::CosHalf) return std::cos(0.5 * rd.tr) * ecore;
  return static_cast<double>(parity(rd.k)) * ecore;
}

namespace {

CVec qform_vector(double q) {
  CVec u(3);
  if (std::abs(q) <= 1.0) {
    const double n = std::sqrt(3.0 * q * q * q * q + 1.0);
    u[0] = (q * q + q) / n;
    u[1] = (q * q - 1.0) / n;
    u[2] = (q * q - q) / n;
  } else {
    const double r = 1.0 / q;  // 0 when q has overflowed to +-inf
    const double n = std::sqrt(3.0 + r * r * r * r);
    u[0] = (1.0 + r) / n;
    u[1] = (1.0 - r * r) / n;
    u[2] = (1.0 - r) / n;
  }
  return u;
}

}  // namespace

CVec eigvec_branch(const ModelSpec& spec, int n, double theta) {
  if (spec.family == Family::TwoLevel) {
    const double quarter = 0.25 * chi_angle(spec, theta);
    CVec u(2);
    if (n == 1) {
      u[0] = -std::sin(quarter);
      u[1] = std::cos(quarter);
    } else {
      u[0] = std::cos(quarter);
      u[1] = std::sin(quarter);
    }
    return u;
  }
  if (spec.family == Family::ThreeLevel) return qform_vector(q_branch_3(spec, n, theta));
  throw std::invalid_argument("eigvec_branch: closed form only for the solvable families");
}

AnalyticEigensystem analytic_eigensystem_2(const ModelSpec& spec, double theta) {
  spec.validate();
  if (spec.family != Family::TwoLevel)
    throw std::invalid_argument("analytic_eigensystem_2: two-level spec required");
  AnalyticEigensystem out;
  out.energies = {energy_branch(spec, 1, theta), energy_branch(spec, 2, theta)};
  out.vectors = CMatrix(2);
  const double chi = chi_angle(spec, theta);
  for (int n = 1; n <= 2; ++n) {
    out.vectors.set_column(n - 1, eigvec_branch(spec, n, theta));
    out.branches.push_back({n, p_branch_2(spec, n, theta), chi});
  }
  return out;
}

AnalyticEigensystem analytic_eigensystem_3(const ModelSpec& spec, double theta) {
  spec.validate();
  if (spec.family != Family::ThreeLevel)
    throw std::invalid_argument("analytic_eigensystem_3: three-level spec required");
  AnalyticEigensystem out;
  out.vectors = CMatrix(3);
  const double xi = xi_angle(spec, theta);
  for (int n = 1; n <= 3; ++n) {
    out.energies.push_back(energy_branch(spec, n, theta));
    out.vectors.set_column(n - 1, eigvec_branch(spec, n, theta));
    out.branches.push_back({n, q_branch_3(spec, n, theta), xi});
  }
  return out;
}

// ---- complexified energies --------------------------------------------------------

namespace {

std::vector<Cplx> closed_roots(const ModelSpec& spec, Cplx theta) {
  const Cplx c = std::cos(0.5 * theta);
  const Cplx s = std::sin(0.5 * theta);
  const Cplx env = (spec.envelope == Envelope::CosHalf) ? c : Cplx(1.0, 0.0);
  if (spec.family == Family::TwoLevel) {
    const Cplx u = spec.v * s;
    const Cplx w = std::sqrt(c * c + u * u);
    return {env * (u - w), env * (u + w)};
  }
  // cubic for the bracket: m^3 - 3u m^2 - c^2 m + u c^2 = 0, u = v s
  const Cplx u = spec.v * s;
  const Cplx a = -3.0 * u;
  const Cplx b = -c * c;
  const Cplx d = u * c * c;
  // depressed form y^3 + p y + q with m = y - a/3
  const Cplx p = b - a * a / 3.0;
  const Cplx q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + d;
  const Cplx disc = std::sqrt(0.25 * q * q + p * p * p / 27.0);
  Cplx u1 = std::pow(-0.5 * q + disc, 1.0 / 3.0);
  if (std::abs(u1) < 1e-30) u1 = std::pow(-0.5 * q - disc, 1.0 / 3.0);
  std::vector<Cplx> roots;
  const Cplx zeta(-0.5, 0.5 * kSqrt3);
  Cplx uk = u1;
  for (int k = 0; k < 3; ++k) {
    const Cplx y = (std::abs(uk) < 1e-30) ? Cplx(0.0, 0.0) : uk - p / (3.0 * uk);
    roots.push_back(env * (y - a / 3.0));
    uk *= zeta;
  }
  return roots;
}

void match_nearest(const std::vector<Cplx>& prev, std::vector<Cplx>& cur) {
  const size_t n = prev.size();
  std::vector<int> perm(n);
  std::vector<bool> used(n, false);
  // greedy nearest matching; exact for the tiny dimensions used here
  for (size_t i = 0; i < n; ++i) {
    double best = 1e300;
    int bj = -1;
    for (size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      const double d = std::abs(cur[j] - prev[i]);
      if (d < best) {
        best = d;
        bj = static_cast<int>(j);
      }
    }
    perm[i] = bj;
    used[static_cast<size_t>(bj)] = true;
  }
  std::vector<Cplx> out(n);
  for (size_t i = 0; i < n; ++i) out[i] = cur[static_cast<size_t>(perm[i])];
  cur = out;
}

}  // namespace

std::vector<Cplx> complex_energies(const ModelSpec& spec, Cplx theta, int ray_steps) {
  if (!spec.solvable())
    throw std::invalid_argument("complex_energies: closed form only for the solvable families");
  const double re = theta.real(), im = theta.imag();
  // labels on the real axis from the branch closed forms
  std::vector<Cplx> cur;
  for (int n = 1; n <= spec.levels; ++n) cur.push_back(energy_branch(spec, n, re));
  const int steps = std::max(8, ray_steps + static_cast<int>(std::abs(im) * 48.0));
  for (int j = 1; j <= steps; ++j) {
    const Cplx z(re, im * static_cast<double>(j) / static_cast<double>(steps));
    std::vector<Cplx> roots = closed_roots(spec, z);
    match_nearest(cur, roots);
    cur = roots;
  }
  return cur;
}

// ---- serialization ------------------------------------------------------------------

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string family_name(Family f) {
  switch (f) {
    case Family::TwoLevel: return "two_level";
    case Family::ThreeLevel: return "three_level";
    case Family::SigmaGeneral: return "sigma_general";
    case Family::NLevelRankOne: return "n_level_rank_one";
  }
  return "?";
}

}  // namespace

std::string to_kv(const ModelSpec& spec) {
  std::ostringstream os;
  os << "family=" << family_name(spec.family) << "\n";
  os << "levels=" << spec.levels << "\n";
  os << "v=" << fmt(spec.v) << "\n";
  os << "envelope=" << (spec.envelope == Envelope::CosHalf ? "cos_half" : "unit") << "\n";
  os << "c1=" << fmt(spec.c1) << "\n";
  os << "c2=" << fmt(spec.c2) << "\n";
  os << "c3=" << fmt(spec.c3) << "\n";
  os << "c5=" << fmt(spec.c5) << "\n";
  os << "w=";
  for (size_t i = 0; i < spec.w.size(); ++i) os << (i ? " " : "") << fmt(spec.w[i]);
  os << "\n";
  return os.str();
}

ModelSpec spec_from_kv(const std::string& text) {
  ModelSpec s;
  s.w.clear();
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const std::string val = line.substr(eq + 1);
    if (key == "family") {
      if (val == "two_level") s.family = Family::TwoLevel;
      else if (val == "three_level") s.family = Family::ThreeLevel;
      else if (val == "sigma_general") s.family = Family::SigmaGeneral;
      else if (val == "n_level_rank_one") s.family = Family::NLevelRankOne;
      else throw std::invalid_argument("spec_from_kv: unknown family " + val);
    } else if (key == "levels") {
      s.levels = std::stoi(val);
    } else if (key == "v") {
      s.v = std::stod(val);
    } else if (key == "envelope") {
      if (val == "cos_half") s.envelope = Envelope::CosHalf;
      else if (val == "unit") s.envelope = Envelope::Unit;
      else throw std::invalid_argument("spec_from_kv: unknown envelope " + val);
    } else if (key == "c1") s.c1 = std::stod(val);
    else if (key == "c2") s.c2 = std::stod(val);
    else if (key == "c3") s.c3 = std::stod(val);
    else if (key == "c5") s.c5 = std::stod(val);
    else if (key == "w") {
      std::istringstream ws(val);
      double x;
      while (ws >> x) s.w.push_back(x);
    }
  }
  s.validate();
  return s;
}

}  // namespace holo
