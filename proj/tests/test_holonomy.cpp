#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "holo/holonomy.hpp"

using namespace holo;

namespace {
constexpr double kPi = M_PI;
const double kV2 = 1.0 / std::sqrt(3.0);

CMatrix expected_m2() {
  CMatrix m(2);
  m(0, 1) = 1.0;
  m(1, 0) = -1.0;
  return m;
}
}  // namespace

TEST_CASE("analytic gauge field: structure of A") {
  const ModelSpec s2 = ModelSpec::two_level(kV2);
  const GaugeField f2 = analytic_gauge_field(s2, 0.0, 2.0 * kPi, 128);
  for (size_t k = 0; k < f2.grid.size(); ++k) {
    CHECK(f2.a[k].hermiticity_defect() < 1e-12);
    CHECK(std::abs(f2.a[k](0, 1) - Cplx(0.0, gauge_f(s2, f2.grid[k]))) < 1e-12);
    CHECK(std::abs(f2.a[k](0, 0)) < 1e-12);  // zero diagonal
  }

  const ModelSpec s3 = ModelSpec::three_level(1.0);
  const GaugeField f3 = analytic_gauge_field(s3, 0.0, 2.0 * kPi, 128);
  for (size_t k = 0; k < f3.grid.size(); ++k) {
    const double th = f3.grid[k];
    CHECK(f3.a[k].hermiticity_defect() < 1e-12);
    CHECK(std::abs(f3.a[k](0, 1) - Cplx(0.0, -gauge_g(s3, th + 2.0 * kPi))) < 1e-12);
    CHECK(std::abs(f3.a[k](0, 2) - Cplx(0.0, gauge_g(s3, th))) < 1e-12);
    CHECK(std::abs(f3.a[k](1, 2) - Cplx(0.0, -gauge_g(s3, th - 2.0 * kPi))) < 1e-12);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(f3.a[k](i, i)) < 1e-12);
  }
}

TEST_CASE("finite-difference gauge field matches the closed form") {
  {
    const ModelSpec spec = ModelSpec::two_level(kV2);
    const EigenPath path = track(spec, 0.0, 2.0 * kPi, 4096, GridKind::Midpoint);
    const GaugeField fd = gauge_potential(path, GaugeProvenance::FiniteDifference);
    const GaugeField an = gauge_potential(path, GaugeProvenance::Analytic);
    double worst = 0.0;
    for (size_t k = 1; k + 1 < fd.grid.size(); ++k)
      worst = std::max(worst, max_entry_diff(fd.a[k], an.a[k]));
    CHECK(worst < 1e-5);
  }
  {
    const ModelSpec spec = ModelSpec::three_level(1.0);
    const EigenPath path = track(spec, 0.0, 2.0 * kPi, 4096, GridKind::Midpoint);
    const GaugeField fd = gauge_potential(path, GaugeProvenance::FiniteDifference);
    const GaugeField an = gauge_potential(path, GaugeProvenance::Analytic);
    double worst = 0.0;
    for (size_t k = 1; k + 1 < fd.grid.size(); ++k)
      worst = std::max(worst, max_entry_diff(fd.a[k], an.a[k]));
    CHECK(worst < 1e-4);
  }
}

TEST_CASE("diagonal reduction") {
  const ModelSpec s2 = ModelSpec::two_level(kV2);
  const GaugeField a2 = analytic_gauge_field(s2, 0.0, 2.0 * kPi, 64);
  const GaugeField d2 = diagonal_reduction(a2);
  for (const auto& a : d2.a) CHECK(a.max_abs() < 1e-12);  // A has zero diagonal

  // random Hermitian field: diagonal preserved exactly, reduction idempotent
  std::mt19937 rng(23u);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  GaugeField field;
  field.spec = s2;
  field.span_start = 0.0;
  field.span_end = 2.0 * kPi;
  for (int k = 0; k < 16; ++k) {
    field.grid.push_back(k * 2.0 * kPi / 16.0);
    CMatrix a(2);
    a(0, 0) = uni(rng);
    a(1, 1) = uni(rng);
    a(0, 1) = Cplx(uni(rng), uni(rng));
    a(1, 0) = std::conj(a(0, 1));
    field.a.push_back(a);
  }
  const GaugeField red = diagonal_reduction(field);
  for (size_t k = 0; k < red.a.size(); ++k) {
    for (int i = 0; i < 2; ++i) CHECK(red.a[k](i, i) == field.a[k](i, i));
    CHECK(std::abs(red.a[k](0, 1)) == 0.0);
  }
  const GaugeField red2 = diagonal_reduction(red);
  for (size_t k = 0; k < red.a.size(); ++k)
    CHECK(max_entry_diff(red.a[k], red2.a[k]) == 0.0);
}

TEST_CASE("holonomy: two-level matrix") {
  const HolonomyMatrix hm = holonomy_of(ModelSpec::two_level(kV2), 4096);
  CHECK(max_entry_diff(hm.m, expected_m2()) < 1e-6);
  CHECK(hm.reliable);
  CHECK(hm.sigma == std::vector<int>{2, 1});
  CHECK(hm.residual < 1e-6);
  CHECK(hm.m.unitarity_defect() < 1e-8);
}

TEST_CASE("holonomy: three-level cyclic matrix") {
  const HolonomyMatrix hm = holonomy_of(ModelSpec::three_level(1.0), 4096);
  CMatrix expected(3);
  expected(1, 0) = 1.0;
  expected(2, 1) = 1.0;
  expected(0, 2) = 1.0;
  CHECK(max_entry_diff(hm.m, expected) < 1e-4);
  CHECK(hm.reliable);
  CHECK(hm.sigma == std::vector<int>{2, 3, 1});
}

TEST_CASE("holonomy: zero gauge field gives the identity") {
  GaugeField field;
  field.spec = ModelSpec::two_level(kV2);
  field.span_start = 0.0;
  field.span_end = 2.0 * kPi;
  for (int k = 0; k < 64; ++k) {
    field.grid.push_back((k + 0.5) * 2.0 * kPi / 64.0);
    field.a.push_back(CMatrix(2));
  }
  const HolonomyMatrix hm = holonomy_matrix(field);
  CHECK(max_entry_diff(hm.m, CMatrix::identity(2)) < 1e-13);
}

TEST_CASE("holonomy: traversing the cycle backward gives the adjoint") {
  const ModelSpec spec = ModelSpec::three_level(1.0);
  const GaugeField fwd = analytic_gauge_field(spec, 0.0, 2.0 * kPi, 2048);
  GaugeField bwd = fwd;
  std::reverse(bwd.grid.begin(), bwd.grid.end());
  std::reverse(bwd.a.begin(), bwd.a.end());
  std::swap(bwd.span_start, bwd.span_end);
  const HolonomyMatrix m_f = holonomy_matrix(fwd);
  const HolonomyMatrix m_b = holonomy_matrix(bwd);
  CHECK(max_entry_diff(m_b.m, m_f.m.adjoint()) < 1e-8);
}

TEST_CASE("holonomy: M^2 = -I (two-level) and M^3 = I (three-level)") {
  {
    const CMatrix m = holonomy_of(ModelSpec::two_level(kV2), 4096).m;
    CMatrix minus_i = CMatrix::identity(2);
    minus_i *= Cplx(-1.0, 0.0);
    CHECK(max_entry_diff(m * m, minus_i) < 1e-6);
  }
  {
    const CMatrix m = holonomy_of(ModelSpec::three_level(1.0), 4096).m;
    CHECK(max_entry_diff(m * (m * m), CMatrix::identity(3)) < 1e-4);
  }
}

TEST_CASE("cross validation: solvable families agree three ways") {
  {
    const CrossValidation cv = cross_validate(ModelSpec::two_level(kV2));
    CHECK(cv.has_analytic);
    CHECK(cv.pass);
    CHECK(cv.max_discrepancy < 1e-4);
    CHECK(max_entry_diff(cv.analytic_m, expected_m2()) < 1e-12);
  }
  {
    const CrossValidation cv = cross_validate(ModelSpec::three_level(1.0));
    CHECK(cv.pass);
  }
}

TEST_CASE("cross validation: sigma family integrated vs flow permutation") {
  const CrossValidation cv = cross_validate(ModelSpec::sigma_general(1.0, 0.0, 0.0, 0.05));
  CHECK_FALSE(cv.has_analytic);
  const HolonomyMatrix cls = classify_holonomy(cv.integrated_m);
  CHECK(cls.sigma == std::vector<int>{2, 1, 3});
  CHECK(cv.max_discrepancy < 1e-3);  // finite-difference route only
}

TEST_CASE("gauge covariance: smooth re-phasing leaves M invariant") {
  const ModelSpec spec = ModelSpec::two_level(kV2);
  const EigenPath path = track(spec, 0.0, 2.0 * kPi, 8192, GridKind::Midpoint);
  const HolonomyMatrix m0 =
      holonomy_matrix(gauge_potential(path, GaugeProvenance::FiniteDifference));

  EigenPath rephased = path;
  const double amp[2] = {0.31, -0.22};
  for (size_t k = 0; k < rephased.grid.size(); ++k) {
    const double u = std::sin(0.5 * rephased.grid[k]);
    for (int col = 0; col < 2; ++col) {
      const Cplx ph = std::exp(Cplx(0.0, amp[col] * u * u));
      for (int row = 0; row < 2; ++row) rephased.frames[k](row, col) *= ph;
    }
  }
  const GaugeField gf = gauge_potential(rephased, GaugeProvenance::FiniteDifference);
  // the re-phased frame has a nonzero diagonal gauge potential
  double diag_max = 0.0;
  for (const auto& a : gf.a)
    diag_max = std::max(diag_max, std::max(std::abs(a(0, 0)), std::abs(a(1, 1))));
  CHECK(diag_max > 1e-3);
  const HolonomyMatrix m1 = holonomy_matrix(gf);
  CHECK(max_entry_diff(m0.m, m1.m) < 1e-6);
}
