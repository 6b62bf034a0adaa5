#include "holo/complex_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace holo {

namespace {

constexpr double kPi = M_PI;

double fold_re(double re) {
  double r = std::fmod(re, 2.0 * kPi);
  if (r < 0.0) r += 2.0 * kPi;
  return r;
}

// characteristic polynomial coefficients, p(l) = l^n + c[n-1] l^(n-1) + ... + c[0],
// by Faddeev-LeVerrier
std::vector<Cplx> char_coeffs(const CMatrix& h) {
  const int n = h.dim();
  std::vector<Cplx> c(static_cast<size_t>(n) + 1, Cplx(0.0, 0.0));
  c[n] = 1.0;
  CMatrix m = h;
  for (int k = 1; k <= n; ++k) {
    Cplx tr(0.0, 0.0);
    for (int i = 0; i < n; ++i) tr += m(i, i);
    const Cplx ck = -tr / static_cast<double>(k);
    c[n - k] = ck;
    if (k < n) {
      CMatrix adj = m;
      for (int i = 0; i < n; ++i) adj(i, i) += ck;
      m = h * adj;
    }
  }
  return c;
}

// roots of a monic polynomial of degree <= 3
std::vector<Cplx> poly_roots_small(const std::vector<Cplx>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  if (n == 1) return {-c[0]};
  if (n == 2) {
    const Cplx b = c[1], cc = c[0];
    const Cplx d = std::sqrt(b * b - 4.0 * cc);
    return {0.5 * (-b - d), 0.5 * (-b + d)};
  }
  if (n == 3) {
    const Cplx a = c[2], b = c[1], d = c[0];
    const Cplx p = b - a * a / 3.0;
    const Cplx q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + d;
    const Cplx disc = std::sqrt(0.25 * q * q + p * p * p / 27.0);
    Cplx u1 = std::pow(-0.5 * q + disc, 1.0 / 3.0);
    if (std::abs(u1) < 1e-30) u1 = std::pow(-0.5 * q - disc, 1.0 / 3.0);
    std::vector<Cplx> roots;
    const Cplx zeta(-0.5, 0.5 * std::sqrt(3.0));
    Cplx uk = u1;
    for (int k = 0; k < 3; ++k) {
      const Cplx y = (std::abs(uk) < 1e-30) ? Cplx(0.0, 0.0) : uk - p / (3.0 * uk);
      roots.push_back(y - a / 3.0);
      uk *= zeta;
    }
    return roots;
  }
  throw std::invalid_argument("poly_roots_small: degree > 3 unsupported here");
}

std::vector<Cplx> eigenvalues_complex(const ModelSpec& spec, Cplx theta) {
  return poly_roots_small(char_coeffs(hamiltonian_complex(spec, theta)));
}

void match_nearest_labels(const std::vector<Cplx>& prev, std::vector<Cplx>& cur) {
  const size_t n = prev.size();
  std::vector<bool> used(n, false);
  std::vector<Cplx> out(n);
  for (size_t i = 0; i < n; ++i) {
    double best = 1e300;
    size_t bj = 0;
    for (size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      const double dd = std::abs(cur[j] - prev[i]);
      if (dd < best) {
        best = dd;
        bj = j;
      }
    }
    out[i] = cur[bj];
    used[bj] = true;
  }
  cur = out;
}

// dH/dtheta, analytic in complex theta
CMatrix hamiltonian_derivative_complex(const ModelSpec& spec, Cplx theta) {
  CMatrix z, f;
  hamiltonian_blocks(spec, z, f);
  const Cplx c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
  if (spec.envelope == Envelope::CosHalf) {
    CMatrix d = (-c * s) * z;
    d += (0.5 * spec.v * (c * c - s * s)) * f;
    return d;
  }
  CMatrix d = (-0.5 * s) * z;
  d += (0.5 * spec.v * c) * f;
  return d;
}

// null vector of a (numerically rank n-1) complex matrix, by Gaussian
// elimination with partial pivoting
CVec null_vector(CMatrix a) {
  const int n = a.dim();
  std::vector<int> pivot_col;
  int row = 0;
  std::vector<int> col_of_row(n, -1);
  for (int col = 0; col < n && row < n; ++col) {
    int piv = row;
    double best = std::abs(a(row, col));
    for (int r = row + 1; r < n; ++r)
      if (std::abs(a(r, col)) > best) {
        best = std::abs(a(r, col));
        piv = r;
      }
    if (best < 1e-13 * std::max(1.0, a.max_abs())) continue;  // free column
    if (piv != row)
      for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(row, j));
    for (int r = 0; r < n; ++r) {
      if (r == row) continue;
      const Cplx fac = a(r, col) / a(row, col);
      for (int j = col; j < n; ++j) a(r, j) -= fac * a(row, j);
    }
    col_of_row[row] = col;
    pivot_col.push_back(col);
    ++row;
  }
  // free column = first column that never became a pivot
  int free_col = n - 1;
  for (int col = 0; col < n; ++col) {
    if (std::find(pivot_col.begin(), pivot_col.end(), col) == pivot_col.end()) {
      free_col = col;
      break;
    }
  }
  CVec v(n, Cplx(0.0, 0.0));
  v[free_col] = 1.0;
  for (int r = row - 1; r >= 0; --r) {
    const int pc = col_of_row[r];
    if (pc < 0) continue;
    Cplx acc(0.0, 0.0);
    for (int j = pc + 1; j < n; ++j) acc += a(r, j) * v[j];
    v[pc] = -acc / a(r, pc);
  }
  return v;
}

Cplx bilinear(const CVec& a, const CVec& b) {
  Cplx s(0.0, 0.0);
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// pair scalar a_mn(theta) = u_m^T dH u_n / ((E_n - E_m) sqrt(u_m.u_m) sqrt(u_n.u_n))
// up to the sign tracked by the caller
Cplx pair_scalar_at(const ModelSpec& spec, Cplx theta, Cplx em, Cplx en) {
  const CMatrix h = hamiltonian_complex(spec, theta);
  const CMatrix dh = hamiltonian_derivative_complex(spec, theta);
  const int n = h.dim();
  CMatrix am = h, an = h;
  for (int i = 0; i < n; ++i) {
    am(i, i) -= em;
    an(i, i) -= en;
  }
  const CVec um = null_vector(am);
  const CVec un = null_vector(an);
  Cplx num(0.0, 0.0);
  for (int i = 0; i < n; ++i) {
    Cplx acc(0.0, 0.0);
    for (int j = 0; j < n; ++j) acc += dh(i, j) * un[j];
    num += um[i] * acc;
  }
  const Cplx nm = std::sqrt(bilinear(um, um));
  const Cplx nn = std::sqrt(bilinear(un, un));
  return num / ((en - em) * nm * nn);
}

// Stateful continuation of the pair scalar along a discrete path of thetas.
struct ScalarTracker {
  const ModelSpec& spec;
  int m, n;  // 0-based labels into the tracked eigenvalue list
  std::vector<Cplx> labels;
  Cplx last_value;
  bool have_last = false;

  ScalarTracker(const ModelSpec& s, int m1, int n1, std::vector<Cplx> real_axis_labels)
      : spec(s), m(m1), n(n1), labels(std::move(real_axis_labels)) {}

  Cplx eval(Cplx theta) {
    std::vector<Cplx> cur = eigenvalues_complex(spec, theta);
    match_nearest_labels(labels, cur);
    labels = cur;
    Cplx a = pair_scalar_at(spec, theta, labels[m], labels[n]);
    if (have_last && std::abs(-a - last_value) < std::abs(a - last_value)) a = -a;
    last_value = a;
    have_last = true;
    return a;
  }

  // the scalar is tracked up to a global sign; pin it from outside
  void flip() { last_value = -last_value; }
};

// real-axis anchored labels near re_anchor (branch order for the solvable
// families, sorted order otherwise)
std::vector<Cplx> anchor_labels(const ModelSpec& spec, double re_anchor) {
  std::vector<Cplx> out;
  if (spec.solvable()) {
    for (int b = 1; b <= spec.levels; ++b)
      out.push_back(Cplx(energy_branch(spec, b, re_anchor), 0.0));
    return out;
  }
  const EigenSystem es = eig_hermitian(hamiltonian(spec, re_anchor));
  for (double e : es.values) out.push_back(Cplx(e, 0.0));
  return out;
}

Cplx contour_residue_tracked(const ModelSpec& spec, const ExceptionalPoint& ep,
                             double radius, int samples) {
  // anchor away from the real degeneracy at pi, then walk up and over to the
  // circle point nearest the real axis
  const double re0 = fold_re(ep.theta.real());
  const double re_anchor = re0 + 0.45;
  ScalarTracker trk(spec, ep.pair.first - 1, ep.pair.second - 1,
                    anchor_labels(spec, re_anchor));

  // seed at the real-axis anchor; for the solvable three-level family pin the
  // tracked sign to the closed-form gauge scalar there
  const Cplx seed = trk.eval(Cplx(re_anchor, 0.0));
  if (spec.family == Family::ThreeLevel) {
    double expected;
    if (ep.pair == std::make_pair(1, 2))
      expected = -gauge_g(spec, re_anchor + 2.0 * M_PI);
    else if (ep.pair == std::make_pair(1, 3))
      expected = gauge_g(spec, re_anchor);
    else
      expected = -gauge_g(spec, re_anchor - 2.0 * M_PI);
    if (expected * seed.real() < 0.0) trk.flip();
  }

  const double im_join =
      ep.theta.imag() - (ep.theta.imag() >= 0.0 ? radius : -radius);
  const int walk = 96;
  for (int k = 1; k <= walk; ++k) {  // vertical leg
    const double t = static_cast<double>(k) / walk;
    trk.eval(Cplx(re_anchor, im_join * t));
  }
  for (int k = 1; k <= walk; ++k) {  // horizontal leg
    const double t = static_cast<double>(k) / walk;
    trk.eval(Cplx(re_anchor + (re0 - re_anchor) * t, im_join));
  }

  // circle, starting from the point nearest the real axis
  const double phi0 = (ep.theta.imag() >= 0.0) ? -0.5 * kPi : 0.5 * kPi;
  Cplx acc(0.0, 0.0);
  const Cplx center(re0, ep.theta.imag());
  for (int k = 0; k < samples; ++k) {
    const double phi = phi0 + 2.0 * kPi * static_cast<double>(k) / samples;
    const Cplx e(std::cos(phi), std::sin(phi));
    acc += trk.eval(center + radius * e) * e;
  }
  return acc * (radius / static_cast<double>(samples));
}

}  // namespace

Cplx discriminant_at(const ModelSpec& spec, Cplx theta) {
  const std::vector<Cplx> c = char_coeffs(hamiltonian_complex(spec, theta));
  const int n = static_cast<int>(c.size()) - 1;
  // resultant of p and p' via the Sylvester determinant
  std::vector<Cplx> dp(static_cast<size_t>(n), Cplx(0.0, 0.0));
  for (int k = 1; k <= n; ++k) dp[k - 1] = static_cast<double>(k) * c[k];
  const int dim = 2 * n - 1;
  CMatrix syl(dim);
  for (int r = 0; r < n - 1; ++r)  // rows of p (degree n)
    for (int k = 0; k <= n; ++k) syl(r, r + (n - k)) = c[k];
  for (int r = 0; r < n; ++r)  // rows of p' (degree n-1)
    for (int k = 0; k <= n - 1; ++k) syl(n - 1 + r, r + (n - 1 - k)) = dp[k];
  return determinant(syl);
}

std::vector<ExceptionalPoint> analytic_exceptional_points(const ModelSpec& spec) {
  spec.validate();
  if (!spec.solvable())
    throw std::invalid_argument("analytic_exceptional_points: solvable families only");

  std::vector<ExceptionalPoint> out;
  if (spec.family == Family::TwoLevel) {
    ExceptionalPoint sp;
    sp.theta = Cplx(kPi, 0.0);
    sp.pair = {1, 2};
    sp.kind = EpKind::SpectatorDegeneracy;
    out.push_back(sp);

    const double av = std::abs(spec.v);
    if (std::abs(av - 1.0) < 1e-12) {
      for (int sgn_im : {+1, -1}) {
        ExceptionalPoint ep;
        ep.at_infinity = true;
        ep.theta = Cplx(0.0, sgn_im * std::numeric_limits<double>::infinity());
        ep.pair = {1, 2};
        ep.kind = EpKind::PoleOfA;
        out.push_back(ep);
      }
      return out;
    }
    // cot^2(theta*/2) = -v^2:  |v|<1 -> pi +- 2i artanh|v|;  |v|>1 -> +-2i arcoth|v|
    const double re = (av < 1.0) ? kPi : 0.0;
    const double im = (av < 1.0) ? 2.0 * std::atanh(av) : 2.0 * std::atanh(1.0 / av);
    for (int sgn_im : {+1, -1}) {
      ExceptionalPoint ep;
      ep.theta = Cplx(re, sgn_im * im);
      ep.pair = {1, 2};
      ep.kind = EpKind::PoleOfA;
      out.push_back(ep);
    }
    return out;
  }

  // three level: 27 K^4 + 9 K^2 + 1 = 0, K = v tan(theta/2)
  ExceptionalPoint sp;
  sp.theta = Cplx(kPi, 0.0);
  sp.pair = {1, 3};
  sp.kind = EpKind::SpectatorDegeneracy;
  out.push_back(sp);

  const Cplx k2a = Cplx(-3.0, std::sqrt(3.0)) / 18.0;
  const Cplx k2b = Cplx(-3.0, -std::sqrt(3.0)) / 18.0;
  std::vector<Cplx> ks = {std::sqrt(k2a), -std::sqrt(k2a), std::sqrt(k2b), -std::sqrt(k2b)};
  for (const Cplx& k : ks) {
    ExceptionalPoint ep;
    const Cplx th = 2.0 * std::atan(k / spec.v);
    ep.theta = Cplx(fold_re(th.real()), th.imag());
    ep.kind = EpKind::PoleOfA;
    // identify the coalescing pair from the ray-tracked branches
    const std::vector<Cplx> es = complex_energies(spec, ep.theta);
    double best = 1e300;
    for (int m = 0; m < 3; ++m)
      for (int n = m + 1; n < 3; ++n)
        if (std::abs(es[m] - es[n]) < best) {
          best = std::abs(es[m] - es[n]);
          ep.pair = {m + 1, n + 1};
        }
    out.push_back(ep);
  }
  std::sort(out.begin() + 1, out.end(), [](const ExceptionalPoint& a, const ExceptionalPoint& b) {
    if (a.theta.imag() != b.theta.imag()) return a.theta.imag() > b.theta.imag();
    return a.theta.real() < b.theta.real();
  });
  return out;
}

std::vector<ExceptionalPoint> newton_exceptional_points(const ModelSpec& spec,
                                                        const std::vector<Cplx>& seeds) {
  spec.validate();
  std::vector<ExceptionalPoint> out;
  for (const Cplx& seed : seeds) {
    Cplx x = seed;
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      const double h = 1e-7 * (1.0 + std::abs(x));
      const Cplx d0 = discriminant_at(spec, x);
      const Cplx dp = (discriminant_at(spec, x + h) - discriminant_at(spec, x - h)) / (2.0 * h);
      if (std::abs(dp) == 0.0) break;
      const Cplx step = d0 / dp;
      x -= step;
      if (std::abs(step) < 1e-13 * (1.0 + std::abs(x))) {
        converged = true;
        break;
      }
    }
    if (!converged) continue;
    const Cplx folded(fold_re(x.real()), x.imag());
    bool dup = false;
    for (const auto& ep : out)
      if (std::abs(ep.theta - folded) < 1e-6) dup = true;
    if (dup) continue;

    ExceptionalPoint ep;
    ep.theta = folded;
    ep.method = EpMethod::NewtonSearch;
    // coalescing pair from the complexified spectrum
    const int n = spec.levels;
    std::vector<Cplx> es;
    if (spec.solvable()) {
      es = complex_energies(spec, ep.theta);
    } else {
      es = eigenvalues_complex(spec, ep.theta);
    }
    double best = 1e300;
    for (int m = 0; m < n; ++m)
      for (int j = m + 1; j < n; ++j)
        if (std::abs(es[m] - es[j]) < best) {
          best = std::abs(es[m] - es[j]);
          ep.pair = {m + 1, j + 1};
        }

    // pole vs spectator: |a_mn| growth on a shrinking circle
    if (spec.levels <= 3) {
      auto circle_max = [&](double r) {
        ScalarTracker trk(spec, ep.pair.first - 1, ep.pair.second - 1,
                          anchor_labels(spec, fold_re(ep.theta.real()) + 0.45));
        double mx = 0.0;
        for (int k = 0; k < 48; ++k) {
          const double phi = 2.0 * kPi * k / 48.0;
          const Cplx z = ep.theta + r * Cplx(std::cos(phi), std::sin(phi));
          mx = std::max(mx, std::abs(trk.eval(z)));
        }
        return mx;
      };
      const double big = circle_max(0.08), small = circle_max(0.04);
      ep.kind = (small > 1.5 * big) ? EpKind::PoleOfA : EpKind::SpectatorDegeneracy;
    } else {
      ep.kind = std::abs(ep.theta.imag()) < 1e-8 ? EpKind::SpectatorDegeneracy
                                                 : EpKind::PoleOfA;
    }
    out.push_back(ep);
  }
  return out;
}

Cplx pole_residue(const ModelSpec& spec, const ExceptionalPoint& ep, double radius,
                  int samples) {
  spec.validate();
  if (ep.at_infinity)
    throw std::invalid_argument("pole_residue: point at infinity has no finite contour");
  if (std::abs(ep.theta.imag()) > 0.0 && radius > 0.9 * std::abs(ep.theta.imag()))
    throw std::invalid_argument("pole_residue: radius reaches the real axis / conjugate point");

  auto residue_at = [&](double r) -> Cplx {
    if (spec.family == Family::TwoLevel) {
      // meromorphic closed form, no tracking needed
      Cplx acc(0.0, 0.0);
      for (int k = 0; k < samples; ++k) {
        const double phi = 2.0 * kPi * k / samples;
        const Cplx e(std::cos(phi), std::sin(phi));
        acc += gauge_f_complex(spec, ep.theta + r * e) * e;
      }
      return acc * (r / static_cast<double>(samples));
    }
    if (spec.levels > 3)
      throw std::invalid_argument("pole_residue: implemented for N <= 3 families");
    return contour_residue_tracked(spec, ep, r, samples);
  };

  const Cplx res_full = residue_at(radius);
  const Cplx res_half = residue_at(0.5 * radius);
  if (std::abs(res_full - res_half) > std::max(1e-5, 0.01 * std::abs(res_half)))
    throw std::runtime_error(
        "pole_residue: radius-halving inconsistency (another singularity inside?)");
  return res_half;
}

double gudermannian(double y) { return 2.0 * std::atan(std::tanh(0.5 * y)); }

namespace {

struct Segment {
  double x0, y0, x1, y1;
};

void emit_cell(double x0, double x1, double y0, double y1, double f00, double f10,
               double f01, double f11, std::vector<Segment>& segs) {
  struct Pt {
    double x, y;
  };
  auto interp = [](double a, double b, double fa, double fb) {
    const double t = fa / (fa - fb);
    return a + t * (b - a);
  };
  int idx = 0;
  if (f00 > 0) idx |= 1;
  if (f10 > 0) idx |= 2;
  if (f11 > 0) idx |= 4;
  if (f01 > 0) idx |= 8;
  if (idx == 0 || idx == 15) return;

  const Pt bottom{interp(x0, x1, f00, f10), y0};
  const Pt right{x1, interp(y0, y1, f10, f11)};
  const Pt top{interp(x0, x1, f01, f11), y1};
  const Pt left{x0, interp(y0, y1, f00, f01)};

  auto add = [&](Pt a, Pt b) { segs.push_back({a.x, a.y, b.x, b.y}); };
  switch (idx) {
    case 1: case 14: add(left, bottom); break;
    case 2: case 13: add(bottom, right); break;
    case 3: case 12: add(left, right); break;
    case 4: case 11: add(right, top); break;
    case 6: case 9: add(bottom, top); break;
    case 7: case 8: add(left, top); break;
    case 5: case 10: {
      const double center = 0.25 * (f00 + f10 + f01 + f11);
      const bool flip = (center > 0) != (idx == 5);
      if (!flip) {
        add(left, bottom);
        add(right, top);
      } else {
        add(left, top);
        add(bottom, right);
      }
      break;
    }
    default: break;
  }
}

}  // namespace

BranchCutCurve branch_cuts(const ModelSpec& spec, std::pair<int, int> pair,
                           const Window& window, int resolution) {
  spec.validate();
  if (spec.levels > 3)
    throw std::invalid_argument("branch_cuts: implemented for N <= 3 families");
  const int nx = resolution, ny = resolution;
  const int m = pair.first - 1, n = pair.second - 1;

  // Work with u = (E_m - E_n)^2: invariant under the pair's own sheet exchange,
  // so it stays continuous across the cuts themselves. The locus
  // Re(E_m - E_n) = 0 is exactly { Im u = 0, Re u <= 0 }.
  std::vector<std::vector<Cplx>> usq(nx, std::vector<Cplx>(ny));
  for (int i = 0; i < nx; ++i) {
    const double re = window.re_min + (window.re_max - window.re_min) * i / (nx - 1);
    std::vector<double> ims(ny);
    for (int j = 0; j < ny; ++j)
      ims[j] = window.im_min + (window.im_max - window.im_min) * j / (ny - 1);
    std::vector<Cplx> up = anchor_labels(spec, re), down = up;
    auto walk_to = [&](std::vector<Cplx>& labels, double im_from, double im_to) {
      const int steps = 1 + static_cast<int>(std::abs(im_to - im_from) * 24.0);
      for (int k = 1; k <= steps; ++k) {
        const double im = im_from + (im_to - im_from) * k / steps;
        std::vector<Cplx> cur = eigenvalues_complex(spec, Cplx(re, im));
        match_nearest_labels(labels, cur);
        labels = cur;
      }
    };
    std::vector<int> order(ny);
    for (int j = 0; j < ny; ++j) order[j] = j;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return std::abs(ims[a]) < std::abs(ims[b]); });
    double up_at = 0.0, down_at = 0.0;
    for (int j : order) {
      const double im = ims[j];
      if (im >= 0.0) {
        walk_to(up, up_at, im);
        up_at = im;
        usq[i][j] = (up[m] - up[n]) * (up[m] - up[n]);
      } else {
        walk_to(down, down_at, im);
        down_at = im;
        usq[i][j] = (down[m] - down[n]) * (down[m] - down[n]);
      }
    }
  }

  // marching squares on Im u, keeping only cells that reach Re u <= 0
  std::vector<Segment> segs;
  for (int i = 0; i + 1 < nx; ++i) {
    const double x0 = window.re_min + (window.re_max - window.re_min) * i / (nx - 1);
    const double x1 = window.re_min + (window.re_max - window.re_min) * (i + 1) / (nx - 1);
    for (int j = 0; j + 1 < ny; ++j) {
      const double y0 = window.im_min + (window.im_max - window.im_min) * j / (ny - 1);
      const double y1 = window.im_min + (window.im_max - window.im_min) * (j + 1) / (ny - 1);
      const Cplx u00 = usq[i][j], u10 = usq[i + 1][j], u01 = usq[i][j + 1],
                 u11 = usq[i + 1][j + 1];
      const double re_min_cell = std::min(std::min(u00.real(), u10.real()),
                                          std::min(u01.real(), u11.real()));
      if (re_min_cell > 0.0) continue;  // pair difference real: not a cut cell
      emit_cell(x0, x1, y0, y1, u00.imag(), u10.imag(), u01.imag(), u11.imag(), segs);
    }
  }

  // fresh-point evaluation of u (vertical ray track), for vertex polish
  auto u_at = [&](double re, double im) {
    std::vector<Cplx> labels = anchor_labels(spec, re);
    const int steps = 1 + static_cast<int>(std::abs(im) * 32.0);
    for (int k = 1; k <= steps; ++k) {
      std::vector<Cplx> cur =
          eigenvalues_complex(spec, Cplx(re, im * static_cast<double>(k) / steps));
      match_nearest_labels(labels, cur);
      labels = cur;
    }
    return (labels[m] - labels[n]) * (labels[m] - labels[n]);
  };
  const double dx = (window.re_max - window.re_min) / (nx - 1);
  const double dy = (window.im_max - window.im_min) / (ny - 1);
  // |Re(E_m - E_n)| at a point: the principal sqrt of u has Re >= 0
  auto re_diff = [&](double x, double y) { return std::sqrt(u_at(x, y)).real(); };
  auto refine_vertex = [&](double& x, double& y) -> bool {
    const double ix = (x - window.re_min) / dx;
    const bool vertical = std::abs(ix - std::round(ix)) < 1e-9;
    double lo, hi;
    if (vertical) {
      const int j = std::clamp(static_cast<int>((y - window.im_min) / dy), 0, ny - 2);
      lo = window.im_min + j * dy;
      hi = lo + dy;
    } else {
      const int i = std::clamp(static_cast<int>((x - window.re_min) / dx), 0, nx - 2);
      lo = window.re_min + i * dx;
      hi = lo + dx;
    }
    auto eval = [&](double t) {
      return vertical ? u_at(x, t).imag() : u_at(t, y).imag();
    };
    double flo = eval(lo), fhi = eval(hi);
    if (flo != 0.0 && fhi != 0.0 && (flo > 0) == (fhi > 0)) return false;
    for (int it = 0; it < 46; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = eval(mid);
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((fm > 0) == (flo > 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
        fhi = fm;
      }
    }
    (vertical ? y : x) = 0.5 * (lo + hi);
    return std::abs(re_diff(x, y)) < 1e-6;
  };

  // chain segments into polylines through shared endpoints
  auto key = [](double x, double y) {
    return std::pair<long long, long long>(llround(x * 1e7), llround(y * 1e7));
  };
  std::map<std::pair<long long, long long>, std::vector<size_t>> at;
  for (size_t t = 0; t < segs.size(); ++t) {
    at[key(segs[t].x0, segs[t].y0)].push_back(t);
    at[key(segs[t].x1, segs[t].y1)].push_back(t);
  }
  std::vector<bool> used(segs.size(), false);
  BranchCutCurve curve;
  curve.pair = pair;
  for (size_t t = 0; t < segs.size(); ++t) {
    if (used[t]) continue;
    used[t] = true;
    std::vector<Cplx> line = {Cplx(segs[t].x0, segs[t].y0), Cplx(segs[t].x1, segs[t].y1)};
    bool grew = true;
    while (grew) {
      grew = false;
      const Cplx tail = line.back();
      for (size_t w : at[key(tail.real(), tail.imag())]) {
        if (used[w]) continue;
        used[w] = true;
        const Cplx a(segs[w].x0, segs[w].y0), b(segs[w].x1, segs[w].y1);
        line.push_back(std::abs(a - tail) < std::abs(b - tail) ? b : a);
        grew = true;
        break;
      }
    }
    grew = true;
    while (grew) {
      grew = false;
      const Cplx head = line.front();
      for (size_t w : at[key(head.real(), head.imag())]) {
        if (used[w]) continue;
        used[w] = true;
        const Cplx a(segs[w].x0, segs[w].y0), b(segs[w].x1, segs[w].y1);
        line.insert(line.begin(), std::abs(a - head) < std::abs(b - head) ? b : a);
        grew = true;
        break;
      }
    }
    // polish every vertex onto the true locus, dropping any that fail
    std::vector<Cplx> polished;
    for (auto& p : line) {
      double x = p.real(), y = p.imag();
      if (refine_vertex(x, y)) polished.push_back(Cplx(x, y));
    }
    if (polished.size() >= 2) curve.polylines.push_back(std::move(polished));
  }
  return curve;
}

MercatorMap mercator_map(const ModelSpec& spec, double im_extent, int resolution) {
  spec.validate();
  MercatorMap map;
  for (const auto& ep : analytic_exceptional_points(spec)) {
    MercatorPoint p;
    p.re = ep.at_infinity ? 0.0 : fold_re(ep.theta.real());
    p.gd_im = ep.at_infinity ? (ep.theta.imag() > 0 ? 0.5 * kPi : -0.5 * kPi)
                             : gudermannian(ep.theta.imag());
    p.kind = ep.kind;
    p.pair = ep.pair;
    map.points.push_back(p);
  }
  const Window win{0.0, 2.0 * kPi, -im_extent, im_extent};
  if (spec.family == Family::TwoLevel) {
    map.cuts.push_back(branch_cuts(spec, {1, 2}, win, resolution));
  } else {
    map.cuts.push_back(branch_cuts(spec, {1, 2}, win, resolution));
    map.cuts.push_back(branch_cuts(spec, {2, 3}, win, resolution));
  }
  return map;
}

}  // namespace holo
