#include "holo/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace holo {

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  const int n = a.dim();
  CMatrix r(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const Cplx aik = a(i, k);
      if (aik == Cplx(0.0, 0.0)) continue;
      for (int j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

CMatrix operator*(Cplx z, CMatrix a) { return a *= z; }

CVec operator*(const CMatrix& a, const CVec& v) {
  const int n = a.dim();
  CVec r(n, Cplx(0.0, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r[i] += a(i, j) * v[j];
  return r;
}

Cplx dot(const CVec& a, const CVec& b) {
  Cplx s(0.0, 0.0);
  for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm(const CVec& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

void normalize(CVec& v) {
  const double n = norm(v);
  if (n > 0.0)
    for (auto& z : v) z /= n;
}

double max_entry_diff(const CMatrix& a, const CMatrix& b) {
  double m = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

double CMatrix::unitarity_defect() const {
  const CMatrix p = adjoint() * (*this);
  double m = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      m = std::max(m, std::abs(p(i, j) - (i == j ? Cplx(1.0, 0.0) : Cplx(0.0, 0.0))));
  return m;
}

namespace {

// One Jacobi rotation zeroing A(p,q).  J acts on the (p,q) plane as
// [[c, s], [-conj(s), c]] with c real; A <- J^dag A J, V <- V J.
void jacobi_rotate(CMatrix& a, CMatrix& v, int p, int q) {
  const Cplx apq = a(p, q);
  const double m = std::abs(apq);
  if (m == 0.0) return;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const Cplx phase = apq / m;

  // tan(2g) = 2m/(aqq-app), stable small-angle form
  double t;
  const double theta = (aqq - app) / (2.0 * m);
  if (std::abs(theta) > 1e15) {
    t = 1.0 / (2.0 * theta);
  } else {
    t = ((theta >= 0.0) ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const Cplx s = phase * (t * c);

  const int n = a.dim();
  // columns: A <- A J
  for (int k = 0; k < n; ++k) {
    const Cplx akp = a(k, p), akq = a(k, q);
    a(k, p) = c * akp - std::conj(s) * akq;
    a(k, q) = s * akp + c * akq;
  }
  // rows: A <- J^dag A
  for (int k = 0; k < n; ++k) {
    const Cplx apk = a(p, k), aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = std::conj(s) * apk + c * aqk;
  }
  for (int k = 0; k < n; ++k) {
    const Cplx vkp = v(k, p), vkq = v(k, q);
    v(k, p) = c * vkp - std::conj(s) * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

double offdiag_norm(const CMatrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

EigenSystem eig_hermitian(const CMatrix& h) {
  const int n = h.dim();
  const double scale = std::max(1.0, h.max_abs());
  const double defect = h.hermiticity_defect();
  if (defect > 1e-10 * scale) {
    throw std::invalid_argument("eig_hermitian: input not Hermitian, max asymmetry " +
                                std::to_string(defect));
  }

  // symmetrize exactly so the iteration sees a bit-Hermitian matrix
  CMatrix a(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));

  CMatrix v = CMatrix::identity(n);
  const double tol = 1e-15 * std::max(1.0, a.frobenius());
  for (int sweep = 0; sweep < 60; ++sweep) {
    if (offdiag_norm(a) <= tol) break;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) jacobi_rotate(a, v, p, q);
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i) vals[i] = a(i, i).real();

  // phase-fix before sorting so the tie-break is deterministic
  CMatrix w(n);
  for (int j = 0; j < n; ++j) {
    CVec col = v.column(j);
    int lead = -1;
    for (int i = 0; i < n; ++i)
      if (std::abs(col[i]) > 1e-12) {
        lead = i;
        break;
      }
    if (lead >= 0) {
      const Cplx ph = std::conj(col[lead]) / std::abs(col[lead]);
      for (auto& z : col) z *= ph;
    }
    normalize(col);
    w.set_column(j, col);
  }

  std::sort(order.begin(), order.end(), [&](int x, int y) {
    if (vals[x] != vals[y]) return vals[x] < vals[y];
    for (int i = 0; i < n; ++i) {
      const Cplx zx = w(i, x), zy = w(i, y);
      if (zx.real() != zy.real()) return zx.real() < zy.real();
      if (zx.imag() != zy.imag()) return zx.imag() < zy.imag();
    }
    return false;
  });

  EigenSystem es;
  es.values.resize(n);
  es.vectors = CMatrix(n);
  for (int j = 0; j < n; ++j) {
    es.values[j] = vals[order[j]];
    es.vectors.set_column(j, w.column(order[j]));
  }
  return es;
}

CMatrix expm_hermitian_scaled(const CMatrix& h, Cplx z) {
  const EigenSystem es = eig_hermitian(h);
  const int n = h.dim();
  CMatrix r(n);
  for (int k = 0; k < n; ++k) {
    const Cplx ek = std::exp(z * es.values[k]);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        r(i, j) += es.vectors(i, k) * ek * std::conj(es.vectors(j, k));
  }
  return r;
}

Cplx determinant(CMatrix a) {
  const int n = a.dim();
  Cplx det(1.0, 0.0);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(a(col, col));
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > best) {
        best = std::abs(a(r, col));
        piv = r;
      }
    if (best == 0.0) return Cplx(0.0, 0.0);
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
      det = -det;
    }
    det *= a(col, col);
    for (int r = col + 1; r < n; ++r) {
      const Cplx f = a(r, col) / a(col, col);
      for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
    }
  }
  return det;
}

}  // namespace holo
