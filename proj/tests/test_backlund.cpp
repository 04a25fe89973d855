#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "cgc/backlund.hpp"

using namespace cgc;
using namespace std::complex_literals;

namespace {

std::mt19937 rng(20240820u);

cplx rand_cplx(double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  return cplx(d(rng), d(rng));
}

Grid pend_grid() {
  Grid g;
  g.nx = g.ny = 50;
  g.hx = g.hy = 0.02;
  g.i0 = g.j0 = 25;
  return g;
}

const ScalarField& pend_field() {
  static ScalarField om = seed_pendulum(pend_grid(), 0.5, 0.0);
  return om;
}

const SurfaceField& pend_surface() {
  static SurfaceField s = sym_surface(pend_field(), 1.0);
  return s;
}

// frozen single-step example used across cases
const SimpleFactor& frozen_factor() {
  static SimpleFactor f(2.0, IsotropicLine(0.5i, 0.0));
  return f;
}

const ScalarField& frozen_theta() {
  static ScalarField th = [] {
    BBParams bp = bb_params(frozen_factor(), 1.0);
    return integrate_theta(pend_field(), bp.beta, bp.theta0);
  }();
  return th;
}

double surf_sup(const SurfaceField& a, const SurfaceField& b) {
  double w = 0.0;
  for (size_t k = 0; k < a.p.size(); ++k)
    w = std::max(w, (a.p[k] - b.p[k]).norm());
  return w;
}

// the well-conditioned real pair driven through both classical chains
struct ChainData {
  SimpleFactor f1, f2;
  ScalarField th1;
  SurfaceField step1, step2;
  BBParams b1, b2;
};

ChainData run_chain(const SimpleFactor& a, const SimpleFactor& b) {
  const ScalarField& om = pend_field();
  cplx om0 = om.at(om.grid.i0, om.grid.j0);
  BBParams p1 = bb_params(a, 1.0);
  ScalarField t1 = integrate_theta(om, p1.beta, p1.theta0);
  SurfaceField s1 = classical_transform(pend_surface(), om, t1, p1.beta);
  BBParams p2 = second_step_params(a, b, 1.0, om0);
  ScalarField t2 = integrate_theta(t1, p2.beta, p2.theta0);
  SurfaceField s2 = classical_transform(s1, t1, t2, p2.beta);
  return ChainData{a, b, std::move(t1), std::move(s1), std::move(s2), p1, p2};
}

const ChainData& fwd_chain() {
  static ChainData c = [] {
    cplx s = 1.0 - 0.5i;
    SimpleFactor f1(2.0, IsotropicLine(0.5i * std::cos(s), 0.5i * std::sin(s)));
    return run_chain(f1, real_partner(f1));
  }();
  return c;
}

}  // namespace

TEST_CASE("angle field solves the first-order transform system") {
  BBParams bp = bb_params(frozen_factor(), 1.0);
  CHECK(std::abs(bp.beta - std::log(2.0)) < 1e-14);
  CHECK(std::abs(bp.theta0 + 1.0i * M_PI / 2.0) < 1e-14);

  const ScalarField& th = frozen_theta();
  const Grid& g = th.grid;
  CHECK(std::abs(th.at(g.i0, g.j0) - bp.theta0) == 0.0);
  CHECK(theta_compat_residual(pend_field(), th, bp.beta) < 2e-4);

  // the integrated field carries consistent derivative closures
  CHECK(th.analytic());
  double h = 1e-5, x = 0.11, y = -0.07;
  cplx fd = (th.f(x + h, y) - th.f(x - h, y)) / (2.0 * h);
  CHECK(std::abs(fd - th.fx(x, y)) < 1e-6);
  fd = (th.f(x, y + h) - th.f(x, y - h)) / (2.0 * h);
  CHECK(std::abs(fd - th.fy(x, y)) < 1e-6);
}

TEST_CASE("angle dictionary follows the dressed line field") {
  const ScalarField& th = frozen_theta();
  const Grid& g = th.grid;
  FrameField pole = integrate_frame(pend_field(), frozen_factor().alpha);
  DressingField d = dressed_lines(pole, frozen_factor());
  double wc = 0.0, ws = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const IsotropicLine& L = d.at(i, j);
      cplx t = th.at(i, j);
      wc = std::max(wc, std::abs(std::cosh(t) + 2.0i * L.b));
      ws = std::max(ws, std::abs(std::sinh(t) + 2.0 * L.a));
    }
  CHECK(wc < 1e-8);
  CHECK(ws < 1e-8);
}

TEST_CASE("classical transform reproduces the dressed surface") {
  BBParams bp = bb_params(frozen_factor(), 1.0);
  SurfaceField cl = classical_transform(pend_surface(), pend_field(),
                                        frozen_theta(), bp.beta);
  SurfaceField dr = dressed_surface(pend_field(), frozen_factor(), 1.0);
  CHECK(surf_sup(cl, dr) < 1e-5);
}

TEST_CASE("the integrated angle is itself a transformed solution") {
  const ScalarField& th = frozen_theta();
  CHECK(sinh_gordon_residual(th) < 2e-2);

  SurfaceField dr = dressed_surface(pend_field(), frozen_factor(), 1.0);
  SurfaceField nr = dressed_normal(pend_field(), frozen_factor(), 1.0);
  FormField ff = fundamental_forms(dr, nr);
  const Grid& g = th.grid;
  double we = 0.0, wg = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!ff.valid(i, j)) continue;
      cplx t = th.at(i, j);
      int k = g.idx(i, j);
      we = std::max(we, std::abs(ff.E[k] - std::cosh(t) * std::cosh(t)));
      wg = std::max(wg, std::abs(ff.G[k] - std::sinh(t) * std::sinh(t)));
    }
  CHECK(we < 1e-4);
  CHECK(wg < 1e-4);
}

TEST_CASE("chained transforms close the real pair") {
  const ChainData& c = fwd_chain();
  CHECK(std::abs(c.b2.beta + std::conj(c.b1.beta)) < 1e-12);

  SurfaceField dr = dressed_surface(pend_field(), c.f1, 1.0);
  CHECK(surf_sup(c.step1, dr) < 1e-5);

  TwoStepData td = two_step_data(pend_field(), c.f1, c.f2, true);
  SurfaceField ts = two_step_surface(pend_field(), td, 1.0);
  CHECK(surf_sup(c.step2, ts) < 5e-4);
  CHECK(c.step2.imag_sup() < 1e-4);

  // the intermediate is genuinely complex, the pair closes to a real surface
  CHECK(c.step1.imag_sup() > 1e-2);
}

TEST_CASE("chained transforms commute") {
  const ChainData& c = fwd_chain();
  ChainData r = run_chain(c.f2, c.f1);
  CHECK(surf_sup(c.step2, r.step2) < 5e-4);
  CHECK(r.step2.imag_sup() < 1e-4);
}

TEST_CASE("domain rotation carries the transform to a rotated pole") {
  const ScalarField& om = pend_field();
  const Grid& g = om.grid;
  double sig = 0.35;
  IsotropicLine L(0.5i, 0.0);
  SurfaceField lhs =
      dressed_surface(om, SimpleFactor(std::exp(1.0i * (M_PI / 2 + sig)), L), 1.0);
  SurfaceField rhs = dressed_surface(rotate_domain(om, sig),
                                     SimpleFactor(1.0i, L),
                                     std::exp(-1.0i * sig));

  ScalarField comp[3] = {ScalarField(g), ScalarField(g), ScalarField(g)};
  for (int k = 0; k < g.size(); ++k)
    for (int c = 0; c < 3; ++c) comp[c].v[k] = lhs.p[k](c);

  double cs = std::cos(sig), sn = std::sin(sig), worst = 0.0;
  int used = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      double xr = cs * g.x(i) - sn * g.y(j), yr = sn * g.x(i) + cs * g.y(j);
      if (std::abs(xr) > 0.42 || std::abs(yr) > 0.42) continue;
      CVec3 want(comp[0].eval(xr, yr), comp[1].eval(xr, yr),
                 comp[2].eval(xr, yr));
      worst = std::max(worst, (rhs.p[g.idx(i, j)] - want).norm());
      ++used;
    }
  CHECK(used > 1000);
  CHECK(worst < 1e-5);
}

TEST_CASE("procrustes alignment recovers a rigid motion") {
  const SurfaceField& a = pend_surface();
  CVec3 axis(rand_cplx(0.7), rand_cplx(0.7), rand_cplx(0.7));
  CMat3 rot = expm(hat(axis));
  CVec3 shift(rand_cplx(1.0), rand_cplx(1.0), rand_cplx(1.0));

  SurfaceField b(a.grid);
  for (size_t k = 0; k < a.p.size(); ++k) b.p[k] = rot * a.p[k] + shift;
  Alignment al = procrustes_align(a, b);
  CHECK((al.rot - rot).norm() < 1e-8);
  CHECK((al.shift - shift).norm() < 1e-8);
  CHECK(al.rms < 1e-9);
  CHECK(al.worst < 1e-8);

  // a sheared copy admits no exact rigid fit
  SurfaceField sheared(a.grid);
  for (size_t k = 0; k < a.p.size(); ++k) {
    sheared.p[k] = a.p[k];
    sheared.p[k](0) *= 1.4;
    sheared.p[k](2) *= 0.7;
  }
  Alignment bad = procrustes_align(a, sheared);
  CHECK(bad.worst > 0.01);

  SurfaceField flat(a.grid);
  for (size_t k = 0; k < flat.p.size(); ++k) flat.p[k] = CVec3(1.0, 2.0, 3.0);
  CHECK_THROWS_AS(procrustes_align(flat, b), std::runtime_error);
}

TEST_CASE("domain rotation composes the seed closures") {
  const ScalarField& om = pend_field();
  ScalarField r = rotate_domain(om, -0.8);
  double cs = std::cos(-0.8), sn = std::sin(-0.8);
  const Grid& g = r.grid;
  CHECK(r.at(11, 30) == om.f(cs * g.x(11) - sn * g.y(30),
                             sn * g.x(11) + cs * g.y(30)));

  double h = 1e-5, x = 0.13, y = -0.21;
  cplx fd = (r.f(x + h, y) - r.f(x - h, y)) / (2.0 * h);
  CHECK(std::abs(fd - r.fx(x, y)) < 1e-8);
  fd = (r.f(x, y + h) - r.f(x, y - h)) / (2.0 * h);
  CHECK(std::abs(fd - r.fy(x, y)) < 1e-8);

  ScalarField bare(pend_grid());
  CHECK_THROWS_AS(rotate_domain(bare, 0.3), std::invalid_argument);
}

TEST_CASE("degenerate inputs are rejected") {
  const ScalarField& om = pend_field();
  CHECK_THROWS_AS(integrate_theta(om, 0.5, 0.1, 1e-3, 0.0), std::domain_error);
  CHECK_THROWS_AS(integrate_theta(om, 0.0, 0.1), PoleError);
  CHECK_THROWS_AS(integrate_theta(om, cplx(0.0, M_PI), 0.1), PoleError);

  // a field violating the equation is not a usable seed
  ScalarField off(pend_grid());
  off.f = [](double x, double) { return cplx(x * x, 0.0); };
  off.fx = [](double x, double) { return cplx(2.0 * x, 0.0); };
  off.fy = [](double, double) { return cplx(0.0, 0.0); };
  const Grid& g = off.grid;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) off.at(i, j) = off.f(g.x(i), g.y(j));
  CHECK_THROWS_AS(integrate_theta(off, 0.5, 0.1), std::domain_error);

  // vacuum surface coordinates degenerate under the classical move
  ScalarField vac = seed_vacuum(pend_grid());
  SurfaceField vs = sym_surface(vac, 1.0);
  CHECK_THROWS_AS(classical_transform(vs, vac, frozen_theta(), 0.5),
                  std::domain_error);
  CHECK_THROWS_AS(
      classical_transform(pend_surface(), om, frozen_theta(), cplx(0.0, 0.0)),
      PoleError);

  Grid small;
  small.nx = small.ny = 4;
  small.hx = small.hy = 0.1;
  small.i0 = small.j0 = 2;
  ScalarField sm(small);
  CHECK_THROWS_AS(theta_compat_residual(sm, sm, 0.5), std::domain_error);
}
