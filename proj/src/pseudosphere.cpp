#include "cgc/pseudosphere.hpp"

#include <cmath>
#include <memory>

#include "transport_detail.hpp"

namespace cgc {

using namespace std::complex_literals;

RealSimpleFactor::RealSimpleFactor(cplx a, const IsotropicLine& l)
    : alpha(a), line(l) {
  if (std::abs(a) < kTolAdmissible)
    throw PoleError("real factor: pole too close to zero");
  if (std::abs(a.real()) > 1e-12 * std::abs(a))
    throw std::invalid_argument("real factor: pole must be purely imaginary");
  if (std::abs(l.a.real()) > 1e-12 || std::abs(l.b.real()) > 1e-12)
    throw std::invalid_argument(
        "real factor: line must satisfy conj(L) = QL");
}

IsotropicLine real_class_line(double t) {
  return IsotropicLine(0.5i * std::cos(t), 0.5i * std::sin(t));
}

RealSimpleFactor backlund_factor(double beta, double t, double lambda) {
  if (!(beta > 0.0))
    throw std::domain_error("backlund_factor: beta must be positive");
  if (lambda == 0.0)
    throw std::domain_error("backlund_factor: lambda must be nonzero");
  return RealSimpleFactor(1.0i * beta * lambda, real_class_line(t));
}

ScalarField sg_seed_vacuum(const Grid& g) { return seed_vacuum(g); }

ScalarField sg_seed_kink(const Grid& g, double r, double phase) {
  g.validate();
  if (r == 0.0) throw std::domain_error("kink seed: scale must be nonzero");
  auto arg = [r, phase](double u, double v) { return u / r + r * v + phase; };
  ScalarField out(g);
  out.f = [arg](double u, double v) {
    return cplx(4.0 * std::atan(std::exp(arg(u, v))));
  };
  out.fx = [arg, r](double u, double v) {
    return cplx(2.0 / (r * std::cosh(arg(u, v))));
  };
  out.fy = [arg, r](double u, double v) {
    return cplx(2.0 * r / std::cosh(arg(u, v)));
  };
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) out.at(i, j) = out.f(g.x(i), g.y(j));
  return out;
}

double sine_gordon_residual(const ScalarField& omega) {
  const Grid& g = omega.grid;
  if (g.nx < 5 || g.ny < 5)
    throw std::domain_error("residual needs at least a 5x5 grid");
  static const int off[4] = {-2, -1, 1, 2};
  static const double wd1[4] = {1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0,
                                -1.0 / 12.0};
  double worst = 0.0;
  for (int j = 2; j < g.ny - 2; ++j)
    for (int i = 2; i < g.nx - 2; ++i) {
      cplx mixed = 0.0;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          mixed += wd1[a] * wd1[b] * omega.at(i + off[a], j + off[b]);
      mixed /= g.hx * g.hy;
      worst = std::max(worst, std::abs(mixed - std::sin(omega.at(i, j))));
    }
  return worst;
}

LaxSample sg_lax_connection_at(const ScalarField& omega, cplx lambda, double u,
                               double v) {
  if (lambda == 0.0) throw std::domain_error("sg lax connection: lambda = 0");
  cplx om = omega.eval(u, v);
  cplx omu = omega.eval_dx(u, v);
  cplx omv = omega.eval_dy(u, v);
  cplx c = std::cos(0.5 * om), s = std::sin(0.5 * om);
  cplx li = 1.0 / lambda;
  LaxSample out;
  out.U = hat(CVec3(0.5 * omu, -li * c, -li * s));
  out.V = hat(CVec3(-0.5 * omv, lambda * c, -lambda * s));
  return out;
}

LaxSample sg_lax_connection(const ScalarField& omega, cplx lambda, int i,
                            int j) {
  return sg_lax_connection_at(omega, lambda, omega.grid.x(i), omega.grid.y(j));
}

namespace {

struct SineConn {
  const ScalarField& omega;
  cplx lambda;
  LaxSample operator()(double u, double v) const {
    return sg_lax_connection_at(omega, lambda, u, v);
  }
};

CMat3 line_direction(const IsotropicLine& l) {
  ProjectorTriple pr = projectors(l);
  return pr.piQL - pr.piL;
}

}  // namespace

double sg_flatness_residual(const ScalarField& omega, cplx lambda) {
  omega.grid.validate();
  return detail::plaquette_residual(SineConn{omega, lambda}, omega.grid);
}

FrameField sg_integrate_frame(const ScalarField& omega, cplx lambda) {
  return sg_integrate_frame(omega, lambda, omega.grid);
}

FrameField sg_integrate_frame(const ScalarField& omega, cplx lambda,
                              const Grid& g) {
  g.validate();
  if (lambda == 0.0) throw std::domain_error("sg_integrate_frame: lambda = 0");
  if (!omega.analytic())
    for (const cplx& c : omega.v)
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw std::domain_error("sg_integrate_frame: non-finite seed value");
  return detail::integrate_sweep(SineConn{omega, lambda}, g, lambda);
}

SurfaceField sg_sym_surface(const ScalarField& omega, cplx lambda,
                            double dlam) {
  if (lambda == 0.0) throw std::domain_error("sg_sym_surface: lambda = 0");
  if (!(dlam > 0.0))
    throw std::domain_error("sg_sym_surface: dlam must be > 0");
  FrameField f0 = sg_integrate_frame(omega, lambda);
  FrameField fp = sg_integrate_frame(omega, lambda * (1.0 + dlam));
  FrameField fm = sg_integrate_frame(omega, lambda * (1.0 - dlam));
  SurfaceField out(omega.grid);
  const cplx scale = -1.0 / (2.0 * dlam);
  for (int k = 0; k < omega.grid.size(); ++k)
    out.p[k] = vee_part(scale * (fp.m[k] - fm.m[k]) * f0.m[k].transpose());
  return out;
}

DressingField sg_dressed_lines(const ScalarField& omega,
                               const RealSimpleFactor& f) {
  return dressed_lines(sg_integrate_frame(omega, f.alpha), f.factor());
}

FrameField sg_dress(const ScalarField& omega, const RealSimpleFactor& f,
                    cplx lambda) {
  return dress_frame(sg_integrate_frame(omega, lambda),
                     sg_dressed_lines(omega, f));
}

SurfaceField sg_dressed_surface(const ScalarField& omega,
                                const RealSimpleFactor& f, cplx lambda,
                                double dlam) {
  SurfaceField base = sg_sym_surface(omega, lambda, dlam);
  FrameField fl = sg_integrate_frame(omega, lambda);
  DressingField d = sg_dressed_lines(omega, f);
  cplx a = pole_coefficient(f.alpha, lambda);
  for (int j = 0; j < base.grid.ny; ++j)
    for (int i = 0; i < base.grid.nx; ++i) {
      const CMat3& g = fl.at(i, j);
      CMat3 corr =
          lambda * a * g * line_direction(d.at(i, j)) * g.transpose();
      base.at(i, j) += vee_part(corr);
    }
  return base;
}

SurfaceField sg_dressed_normal(const ScalarField& omega,
                               const RealSimpleFactor& f, cplx lambda) {
  FrameField fl = sg_integrate_frame(omega, lambda);
  DressingField d = sg_dressed_lines(omega, f);
  SurfaceField out(fl.grid);
  const CMat3 h1 = hat(CVec3::Unit(0));
  for (int j = 0; j < fl.grid.ny; ++j)
    for (int i = 0; i < fl.grid.nx; ++i) {
      CMat3 psi = fl.at(i, j) * local_factor(d, lambda, i, j).transpose();
      out.at(i, j) = vee_part(psi * h1 * psi.transpose());
    }
  return out;
}

namespace {

cplx unwrap_to(cplx prev, cplx raw) {
  constexpr double twopi = 6.283185307179586;
  return raw + twopi * std::round((prev.real() - raw.real()) / twopi);
}

}  // namespace

ScalarField sg_extract_angle(const SurfaceField& surf,
                             const SurfaceField& phi) {
  const Grid& g = surf.grid;
  if (g.nx != phi.grid.nx || g.ny != phi.grid.ny)
    throw std::invalid_argument("sg_extract_angle: grids do not match");
  if (surf.imag_sup() > 1e-6 || phi.imag_sup() > 1e-6)
    throw std::domain_error("sg_extract_angle: surface is not real");
  FormField forms = fundamental_forms(surf, phi);
  const int m = forms.margin;
  if (g.i0 < m || g.i0 >= g.nx - m || g.j0 < m || g.j0 >= g.ny - m)
    throw std::domain_error("sg_extract_angle: basepoint inside the margin");
  Grid gi{g.nx - 2 * m, g.ny - 2 * m, g.hx, g.hy, g.i0 - m, g.j0 - m};
  ScalarField out(gi);
  for (int j = 0; j < gi.ny; ++j)
    for (int i = 0; i < gi.nx; ++i) {
      int k = g.idx(i + m, j + m);
      if (std::abs(forms.E[k] - 1.0) > 5e-2 || std::abs(forms.G[k] - 1.0) > 5e-2)
        throw std::domain_error(
            "sg_extract_angle: surface is not unit-speed asymptotic");
      out.at(i, j) = std::atan2(-forms.f[k].real(), forms.F[k].real());
    }
  // unwrap along the basepoint row, then along every column
  for (int i = gi.i0 + 1; i < gi.nx; ++i)
    out.at(i, gi.j0) = unwrap_to(out.at(i - 1, gi.j0), out.at(i, gi.j0));
  for (int i = gi.i0 - 1; i >= 0; --i)
    out.at(i, gi.j0) = unwrap_to(out.at(i + 1, gi.j0), out.at(i, gi.j0));
  for (int i = 0; i < gi.nx; ++i) {
    for (int j = gi.j0 + 1; j < gi.ny; ++j)
      out.at(i, j) = unwrap_to(out.at(i, j - 1), out.at(i, j));
    for (int j = gi.j0 - 1; j >= 0; --j)
      out.at(i, j) = unwrap_to(out.at(i, j + 1), out.at(i, j));
  }
  return out;
}

double lie_backlund_decomposition_check(const ScalarField& omega, double beta,
                                        double line_angle) {
  if (!(beta > 0.0))
    throw std::domain_error("decomposition check: beta must be positive");
  const Grid& g = omega.grid;
  g.validate();

  RealSimpleFactor direct = backlund_factor(beta, line_angle);
  SurfaceField lhs = sg_dressed_surface(omega, direct, 1.0);

  // largest same-spacing grid whose image under (beta u, v/beta) stays in
  // the seed hull
  auto side = [](double extent, double h) {
    int n = static_cast<int>(std::floor(extent / h + 1e-9));
    while (n > 0 && n * h > extent + 1e-10 * h) --n;
    return n;
  };
  int neg_a = side(-g.x(0) / beta, g.hx);
  int pos_a = side(g.x(g.nx - 1) / beta, g.hx);
  int neg_b = side(-g.y(0) * beta, g.hy);
  int pos_b = side(g.y(g.ny - 1) * beta, g.hy);
  Grid gs{neg_a + pos_a + 1, neg_b + pos_b + 1, g.hx, g.hy, neg_a, neg_b};
  if (gs.nx < 5 || gs.ny < 5)
    throw std::domain_error(
        "decomposition check: rescaled domain leaves too few nodes");

  auto seed = std::make_shared<ScalarField>(omega);
  ScalarField oms(gs);
  if (seed->analytic()) {
    oms.f = [seed, beta](double a, double b) {
      return seed->f(beta * a, b / beta);
    };
    if (seed->fx)
      oms.fx = [seed, beta](double a, double b) {
        return beta * seed->fx(beta * a, b / beta);
      };
    if (seed->fy)
      oms.fy = [seed, beta](double a, double b) {
        return seed->fy(beta * a, b / beta) / beta;
      };
  }
  for (int j = 0; j < gs.ny; ++j)
    for (int i = 0; i < gs.nx; ++i)
      oms.at(i, j) = seed->eval(beta * gs.x(i), gs.y(j) / beta);

  RealSimpleFactor unit = backlund_factor(1.0, line_angle);
  SurfaceField rhs = sg_dressed_surface(oms, unit, 1.0 / beta);

  double worst = 0.0;
  double alo = gs.x(0) - 1e-9 * gs.hx, ahi = gs.x(gs.nx - 1) + 1e-9 * gs.hx;
  double blo = gs.y(0) - 1e-9 * gs.hy, bhi = gs.y(gs.ny - 1) + 1e-9 * gs.hy;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      double a = g.x(i) / beta, b = g.y(j) * beta;
      if (a < alo || a > ahi || b < blo || b > bhi) continue;
      worst = std::max(worst, (lhs.at(i, j) - rhs.eval(a, b)).norm());
    }
  return worst;
}

}  // namespace cgc
