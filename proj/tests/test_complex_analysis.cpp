#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "holo/complex_analysis.hpp"

using namespace holo;

namespace {
constexpr double kPi = M_PI;
const double kV2 = 1.0 / std::sqrt(3.0);

const ExceptionalPoint* find_pole(const std::vector<ExceptionalPoint>& eps, bool upper) {
  for (const auto& ep : eps)
    if (ep.kind == EpKind::PoleOfA && !ep.at_infinity && (ep.theta.imag() > 0) == upper)
      return &ep;
  return nullptr;
}
}  // namespace

TEST_CASE("analytic exceptional points: two-level locations") {
  const auto eps = analytic_exceptional_points(ModelSpec::two_level(kV2));
  // spectator at pi plus a conjugate pole pair at Re = pi
  bool have_spectator = false;
  for (const auto& ep : eps)
    if (ep.kind == EpKind::SpectatorDegeneracy) {
      have_spectator = true;
      CHECK(std::abs(ep.theta - Cplx(kPi, 0.0)) < 1e-14);
    }
  CHECK(have_spectator);

  const double beta = 2.0 * std::atanh(kV2);
  const auto* up = find_pole(eps, true);
  const auto* dn = find_pole(eps, false);
  REQUIRE(up != nullptr);
  REQUIRE(dn != nullptr);
  CHECK(std::abs(up->theta - Cplx(kPi, beta)) < 1e-12);
  CHECK(std::abs(dn->theta - Cplx(kPi, -beta)) < 1e-12);
  CHECK(std::abs(up->theta - std::conj(dn->theta)) < 1e-12);

  // v > 1: the pair moves to the imaginary axis
  const auto eps2 = analytic_exceptional_points(ModelSpec::two_level(2.0));
  const auto* up2 = find_pole(eps2, true);
  REQUIRE(up2 != nullptr);
  CHECK(std::abs(up2->theta.real()) < 1e-12);
  CHECK(up2->theta.imag() == doctest::Approx(2.0 * std::atanh(0.5)));

  // |v| = 1: the pair escapes to +- i infinity
  const auto eps1 = analytic_exceptional_points(ModelSpec::two_level(1.0));
  int at_inf = 0;
  for (const auto& ep : eps1)
    if (ep.at_infinity) ++at_inf;
  CHECK(at_inf == 2);
}

TEST_CASE("analytic exceptional points: three-level set and pair labels") {
  const ModelSpec spec = ModelSpec::three_level(1.0);
  const auto eps = analytic_exceptional_points(spec);
  int poles = 0, spectators = 0;
  int pair12 = 0, pair23 = 0;
  for (const auto& ep : eps) {
    if (ep.kind == EpKind::SpectatorDegeneracy) {
      ++spectators;
      continue;
    }
    ++poles;
    // the complexified branch energies coalesce there (double-precision bound
    // for a square-root coalescence is ~1e-8)
    const auto es = complex_energies(spec, ep.theta);
    double gap = 1e300;
    for (int m = 0; m < 3; ++m)
      for (int n = m + 1; n < 3; ++n) gap = std::min(gap, std::abs(es[m] - es[n]));
    CHECK(gap < 5e-8);
    if (ep.pair == std::make_pair(1, 2)) ++pair12;
    if (ep.pair == std::make_pair(2, 3)) ++pair23;
  }
  CHECK(poles == 4);
  CHECK(spectators == 1);
  CHECK(pair12 == 2);
  CHECK(pair23 == 2);
}

TEST_CASE("newton search matches the closed forms") {
  {
    const ModelSpec spec = ModelSpec::two_level(kV2);
    const auto analytic = analytic_exceptional_points(spec);
    const auto* up = find_pole(analytic, true);
    const auto found = newton_exceptional_points(spec, {up->theta + Cplx(0.07, -0.04)});
    REQUIRE(found.size() == 1);
    CHECK(std::abs(found[0].theta - up->theta) < 1e-8);
    CHECK(found[0].kind == EpKind::PoleOfA);
  }
  {
    // seeding at the real degeneracy converges to the spectator point
    const ModelSpec spec = ModelSpec::two_level(kV2);
    const auto found = newton_exceptional_points(spec, {Cplx(3.0, 0.0)});
    REQUIRE(found.size() == 1);
    CHECK(std::abs(found[0].theta - Cplx(kPi, 0.0)) < 1e-4);
    CHECK(found[0].kind == EpKind::SpectatorDegeneracy);
  }
  {
    const ModelSpec spec = ModelSpec::three_level(1.0);
    const auto analytic = analytic_exceptional_points(spec);
    std::vector<Cplx> seeds;
    for (const auto& ep : analytic)
      if (ep.kind == EpKind::PoleOfA) seeds.push_back(ep.theta + Cplx(-0.05, 0.03));
    const auto found = newton_exceptional_points(spec, seeds);
    CHECK(found.size() == 4);
    for (const auto& ep : analytic) {
      if (ep.kind != EpKind::PoleOfA) continue;
      double best = 1e300;
      for (const auto& f : found) best = std::min(best, std::abs(f.theta - ep.theta));
      CHECK(best < 1e-8);
    }
  }
}

TEST_CASE("pole residues: -/+ i/4 pattern and conjugate symmetry") {
  const ModelSpec spec = ModelSpec::two_level(kV2);
  const auto eps = analytic_exceptional_points(spec);
  const auto* up = find_pole(eps, true);
  const auto* dn = find_pole(eps, false);
  const Cplx res_up = pole_residue(spec, *up, 0.3);
  const Cplx res_dn = pole_residue(spec, *dn, 0.3);
  CHECK(std::abs(res_up - Cplx(0.0, -0.25)) < 1e-4);
  CHECK(std::abs(res_dn - Cplx(0.0, 0.25)) < 1e-4);
  CHECK(std::abs(res_up - std::conj(res_dn)) < 1e-6);

  // the real-axis cycle encloses the upper pole: 2 pi i res = pi/2 = oint f
  const Cplx loop = Cplx(0.0, 2.0 * kPi) * res_up;
  CHECK(std::abs(loop - Cplx(kPi / 2.0, 0.0)) < 1e-4);
}

TEST_CASE("pole residues: spectator point carries none") {
  const ModelSpec spec = ModelSpec::two_level(kV2);
  ExceptionalPoint sp;
  sp.theta = Cplx(kPi, 0.0);
  sp.kind = EpKind::SpectatorDegeneracy;
  sp.pair = {1, 2};
  CHECK(std::abs(pole_residue(spec, sp, 0.3)) < 1e-6);
}

TEST_CASE("pole residues: three-level poles carry -/+ i/4 as well") {
  const ModelSpec spec = ModelSpec::three_level(1.0);
  const auto eps = analytic_exceptional_points(spec);
  for (const auto& ep : eps) {
    if (ep.kind != EpKind::PoleOfA) continue;
    const Cplx res = pole_residue(spec, ep, 0.12);
    const Cplx expect(0.0, ep.theta.imag() > 0 ? -0.25 : 0.25);
    CHECK(std::abs(res - expect) < 1e-4);
  }
}

TEST_CASE("sigma family: newton finds poles for the coupled pair only") {
  const ModelSpec spec = ModelSpec::sigma_general(1.0, 0.0, 0.0, 0.0);
  std::vector<Cplx> seeds;
  for (int i = 0; i < 8; ++i)
    seeds.push_back(Cplx(kPi + 0.8 * std::cos(kPi * i / 4.0), 0.7 + 0.5 * std::sin(kPi * i / 4.0)));
  const auto found = newton_exceptional_points(spec, seeds);
  int poles = 0;
  for (const auto& ep : found)
    if (ep.kind == EpKind::PoleOfA && ep.theta.imag() > 0) {
      ++poles;
      const Cplx res = pole_residue(spec, ep, 0.1);
      CHECK(std::abs(std::abs(res) - 0.25) < 1e-3);
    }
  CHECK(poles >= 1);
}

TEST_CASE("branch cuts: polyline points satisfy Re(E_m - E_n) = 0") {
  const ModelSpec spec = ModelSpec::two_level(0.5);
  const Window win{0.0, 2.0 * kPi, -2.5, 2.5};
  const BranchCutCurve curve = branch_cuts(spec, {1, 2}, win, 81);
  CHECK(!curve.polylines.empty());
  int checked = 0;
  for (const auto& line : curve.polylines)
    for (size_t i = 0; i < line.size(); i += 3) {
      const auto es = complex_energies(spec, line[i]);
      CHECK(std::abs((es[0] - es[1]).real()) < 1e-6);
      ++checked;
    }
  CHECK(checked > 10);
}

TEST_CASE("branch cuts: v < 1 and v > 1 give different topologies") {
  const Window win{0.0, 2.0 * kPi, -2.0, 2.0};
  const BranchCutCurve low = branch_cuts(ModelSpec::two_level(0.5), {1, 2}, win, 61);
  const BranchCutCurve high = branch_cuts(ModelSpec::two_level(2.0), {1, 2}, win, 61);
  // v < 1: cuts pass through Re = pi (the pole pair sits there); v > 1: they
  // live near the imaginary axis instead
  auto min_dist_to_re = [](const BranchCutCurve& c, double re) {
    double d = 1e300;
    for (const auto& line : c.polylines)
      for (const auto& p : line) d = std::min(d, std::abs(p.real() - re));
    return d;
  };
  CHECK(min_dist_to_re(low, kPi) < 0.1);
  CHECK(min_dist_to_re(high, 0.35 * kPi) < 0.2);
}

TEST_CASE("three-level cuts exist for both adjacent pairs") {
  const ModelSpec spec = ModelSpec::three_level(1.0);
  const Window win{0.0, 2.0 * kPi, -1.5, 1.5};
  const BranchCutCurve c12 = branch_cuts(spec, {1, 2}, win, 61);
  const BranchCutCurve c23 = branch_cuts(spec, {2, 3}, win, 61);
  CHECK(!c12.polylines.empty());
  CHECK(!c23.polylines.empty());
}

TEST_CASE("gudermannian compactification") {
  CHECK(gudermannian(0.0) == doctest::Approx(0.0));
  CHECK(gudermannian(1e9) == doctest::Approx(kPi / 2.0));
  CHECK(gudermannian(-1e9) == doctest::Approx(-kPi / 2.0));
  CHECK(gudermannian(1.0) == doctest::Approx(2.0 * std::atan(std::tanh(0.5))));
}

TEST_CASE("mercator map: marks and edge behavior") {
  {
    const MercatorMap map = mercator_map(ModelSpec::two_level(kV2), 3.0, 61);
    int poles = 0, spectators = 0;
    for (const auto& p : map.points) {
      if (p.kind == EpKind::PoleOfA) ++poles;
      if (p.kind == EpKind::SpectatorDegeneracy) {
        ++spectators;
        CHECK(p.gd_im == doctest::Approx(0.0));  // on the real-axis line
      }
    }
    CHECK(poles == 2);
    CHECK(spectators == 1);
    CHECK(map.cuts.size() == 1);
  }
  {
    // v -> 1^-: the poles approach the top/bottom map edges
    const MercatorMap map = mercator_map(ModelSpec::two_level(0.995), 3.0, 41);
    for (const auto& p : map.points)
      if (p.kind == EpKind::PoleOfA) CHECK(std::abs(p.gd_im) > 1.35);
  }
}
