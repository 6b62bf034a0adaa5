// Small dense complex matrices and a cyclic-Jacobi Hermitian eigensolver.
// Everything here is sized for dims <= ~8; no attempt at asymptotic speed.

#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace holo {

using Cplx = std::complex<double>;
using CVec = std::vector<Cplx>;

class CMatrix {
 public:
  CMatrix() : n_(0) {}
  explicit CMatrix(int n) : n_(n), a_(static_cast<size_t>(n) * n, Cplx(0.0, 0.0)) {}

  static CMatrix identity(int n) {
    CMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int dim() const { return n_; }

  Cplx& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
  const Cplx& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }

  CMatrix adjoint() const {
    CMatrix r(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) r(i, j) = std::conj((*this)(j, i));
    return r;
  }

  CMatrix transpose() const {
    CMatrix r(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) r(i, j) = (*this)(j, i);
    return r;
  }

  CVec column(int j) const {
    CVec v(n_);
    for (int i = 0; i < n_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  void set_column(int j, const CVec& v) {
    for (int i = 0; i < n_; ++i) (*this)(i, j) = v[i];
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& z : a_) m = std::max(m, std::abs(z));
    return m;
  }

  double frobenius() const {
    double s = 0.0;
    for (const auto& z : a_) s += std::norm(z);
    return std::sqrt(s);
  }

  // max |H - H^dagger| entrywise
  double hermiticity_defect() const {
    double m = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return m;
  }

  // max |U^dagger U - I| entrywise
  double unitarity_defect() const;

  CMatrix& operator+=(const CMatrix& b) {
    for (size_t k = 0; k < a_.size(); ++k) a_[k] += b.a_[k];
    return *this;
  }
  CMatrix& operator-=(const CMatrix& b) {
    for (size_t k = 0; k < a_.size(); ++k) a_[k] -= b.a_[k];
    return *this;
  }
  CMatrix& operator*=(Cplx z) {
    for (auto& w : a_) w *= z;
    return *this;
  }

 private:
  int n_;
  std::vector<Cplx> a_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator*(Cplx z, CMatrix a);
CVec operator*(const CMatrix& a, const CVec& v);

// <a|b> with conjugation on the first argument.
Cplx dot(const CVec& a, const CVec& b);
double norm(const CVec& v);
void normalize(CVec& v);
double max_entry_diff(const CMatrix& a, const CMatrix& b);

// Eigen-decomposition of a Hermitian matrix.
// values ascending; vectors orthonormal, stored as columns of `vectors`
// with the phase fixed so the first non-negligible component is real positive.
struct EigenSystem {
  std::vector<double> values;
  CMatrix vectors;
};

// Cyclic Jacobi. Deterministic for identical input. Throws std::invalid_argument
// (with the measured asymmetry) when the input is not Hermitian within tolerance.
EigenSystem eig_hermitian(const CMatrix& h);

// exp(z * H) for Hermitian H, evaluated through the eigen-decomposition so the
// result is exactly unitary when z is purely imaginary.
CMatrix expm_hermitian_scaled(const CMatrix& h, Cplx z);

// Determinant of a general complex matrix (partial-pivot LU).
Cplx determinant(CMatrix a);

}  // namespace holo
