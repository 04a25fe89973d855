#include "cgc/dressing.hpp"

#include <cmath>

namespace cgc {

using namespace std::complex_literals;

SimpleFactor::SimpleFactor(cplx a, const IsotropicLine& l) : alpha(a), line(l) {
  if (std::abs(a) < kTolAdmissible)
    throw PoleError("simple factor: pole too close to zero");
}

namespace {

cplx pole_ratio(cplx alpha, cplx lambda) {
  if (std::abs(alpha - lambda) < 1e-12 * (std::abs(alpha) + std::abs(lambda)) ||
      std::abs(alpha + lambda) < 1e-12 * (std::abs(alpha) + std::abs(lambda)))
    throw PoleError("simple factor evaluated at its pole");
  return (alpha - lambda) / (alpha + lambda);
}

CMat3 assemble(const ProjectorTriple& pr, cplx c) {
  return c * pr.piL + pr.piL0 + (1.0 / c) * pr.piQL;
}

}  // namespace

CMat3 eval_simple_factor(const SimpleFactor& f, cplx lambda) {
  return assemble(projectors(f.line), pole_ratio(f.alpha, lambda));
}

CMat3 p_infinity(const SimpleFactor& f) {
  return 2.0 * projectors(f.line).piL0 - CMat3::Identity();
}

CMat3 eval_q_factor(const SimpleFactor& f, cplx lambda) {
  return p_infinity(f) * eval_simple_factor(f, lambda);
}

cplx pole_coefficient(cplx alpha, cplx lambda) {
  pole_ratio(alpha, lambda);  // shared pole guard
  return 2.0 * alpha / ((alpha - lambda) * (alpha + lambda));
}

SimpleFactor real_partner(const SimpleFactor& f) {
  return SimpleFactor(1.0 / std::conj(f.alpha), f.line.conjugate());
}

DressingField dressed_lines(const FrameField& pole_frame,
                            const SimpleFactor& f) {
  if (std::abs(pole_frame.lambda - f.alpha) >
      1e-12 * (1.0 + std::abs(f.alpha)))
    throw std::invalid_argument(
        "dressed_lines: frame not integrated at the factor pole");
  DressingField out{f, pole_frame.grid, {}};
  out.lines.reserve(pole_frame.grid.size());
  for (int j = 0; j < pole_frame.grid.ny; ++j)
    for (int i = 0; i < pole_frame.grid.nx; ++i)
      out.lines.push_back(
          transform_line(pole_frame.at(i, j).transpose(), f.line, i, j));
  return out;
}

CMat3 local_factor(const DressingField& d, cplx lambda, int i, int j) {
  return assemble(projectors(d.at(i, j)), pole_ratio(d.factor.alpha, lambda));
}

FrameField dress_frame(const FrameField& base, const DressingField& d) {
  if (base.grid.nx != d.grid.nx || base.grid.ny != d.grid.ny)
    throw std::invalid_argument("dress_frame: grids do not match");
  FrameField out(base.grid, base.lambda);
  out.basepoint_normalized = base.basepoint_normalized;
  CMat3 p = eval_simple_factor(d.factor, base.lambda);
  for (int j = 0; j < base.grid.ny; ++j)
    for (int i = 0; i < base.grid.nx; ++i)
      out.at(i, j) = p * base.at(i, j) *
                     local_factor(d, base.lambda, i, j).transpose();
  return out;
}

namespace {

CMat3 line_direction(const IsotropicLine& l) {
  ProjectorTriple pr = projectors(l);
  return pr.piQL - pr.piL;
}

}  // namespace

SurfaceField dressed_surface(const ScalarField& omega, const SimpleFactor& f,
                             cplx lambda, double dlam) {
  SurfaceField base = sym_surface(omega, lambda, dlam);
  FrameField fl = integrate_frame(omega, lambda);
  DressingField d = dressed_lines(integrate_frame(omega, f.alpha), f);
  cplx a = pole_coefficient(f.alpha, lambda);
  for (int j = 0; j < base.grid.ny; ++j)
    for (int i = 0; i < base.grid.nx; ++i) {
      const CMat3& g = fl.at(i, j);
      CMat3 corr = 1.0i * lambda * a * g * line_direction(d.at(i, j)) *
                   g.transpose();
      base.at(i, j) += vee_part(corr);
    }
  return base;
}

SurfaceField dressed_normal(const ScalarField& omega, const SimpleFactor& f,
                            cplx lambda) {
  FrameField fl = integrate_frame(omega, lambda);
  DressingField d = dressed_lines(integrate_frame(omega, f.alpha), f);
  SurfaceField out(fl.grid);
  const CMat3 h1 = hat(CVec3::Unit(0));
  for (int j = 0; j < fl.grid.ny; ++j)
    for (int i = 0; i < fl.grid.nx; ++i) {
      CMat3 psi = fl.at(i, j) * local_factor(d, lambda, i, j).transpose();
      out.at(i, j) = vee_part(psi * h1 * psi.transpose());
    }
  return out;
}

BBParams bb_params(const SimpleFactor& f, cplx lambda) {
  pole_ratio(f.alpha, lambda);  // degenerate when the pole meets the point
  BBParams out;
  out.beta = std::log(f.alpha / lambda);
  out.theta0 = std::log(-2.0i * f.line.b - 2.0 * f.line.a);
  return out;
}

std::pair<SimpleFactor, SimpleFactor> exchange_factors(const SimpleFactor& f1,
                                                       const SimpleFactor& f2) {
  IsotropicLine l1x = transform_line(eval_simple_factor(f2, f1.alpha), f1.line);
  IsotropicLine l2x = transform_line(eval_simple_factor(f1, f2.alpha), f2.line);
  return {SimpleFactor(f1.alpha, l1x), SimpleFactor(f2.alpha, l2x)};
}

double permutability_defect(const SimpleFactor& f1, const SimpleFactor& f2,
                            const std::vector<cplx>& samples) {
  auto [f1x, f2x] = exchange_factors(f1, f2);
  double worst = 0.0;
  for (cplx lam : samples) {
    CMat3 lhs = eval_simple_factor(f2x, lam) * eval_simple_factor(f1, lam);
    CMat3 rhs = eval_simple_factor(f1x, lam) * eval_simple_factor(f2, lam);
    worst = std::max(worst, (lhs - rhs).norm());
  }
  return worst;
}

CMat3 find_k(const CMat3& P) {
  double off = std::max({std::abs(P(0, 0) - 1.0), std::abs(P(0, 1)),
                         std::abs(P(0, 2)), std::abs(P(1, 0)),
                         std::abs(P(2, 0))});
  if (off > 1e-8)
    throw std::domain_error("find_k: not a rotation about the first axis");
  cplx zeta = -1.0i * std::log(P(1, 1) + 1.0i * P(2, 1));
  if (std::abs(zeta.real()) > 1e-8)
    throw std::domain_error("find_k: rotation outside the solvable range");
  for (cplx mu : {-zeta / 2.0, zeta / 2.0}) {
    CMat3 k = rot_e1(mu);
    if ((k.transpose() * k.conjugate() - P).norm() < 1e-8) return k;
  }
  throw std::domain_error("find_k: no solution in the rotation family");
}

RealPair real_pair(const SimpleFactor& f1) {
  if (std::abs(std::abs(f1.alpha) - 1.0) < kTolAdmissible)
    throw PoleError("real pair: pole on the unit circle is degenerate");
  SimpleFactor f2 = real_partner(f1);
  auto [f1x, f2x] = exchange_factors(f1, f2);
  (void)f1x;
  // the normalizer solves k^-1 conj(k) = w(0) conj(w(inf)), w = p_{f2x} p_{f1}
  CMat3 winf = p_infinity(f2x) * p_infinity(f1);
  CMat3 k = find_k(winf.conjugate().inverse());
  return RealPair{f1, f2, f2x, k};
}

CMat3 eval_real_dressing(const RealPair& rp, cplx lambda) {
  return rp.k * eval_simple_factor(rp.f2x, lambda) *
         eval_simple_factor(rp.f1, lambda);
}

TwoStepData two_step_data(const ScalarField& omega, const SimpleFactor& f1,
                          const SimpleFactor& f2, bool with_k) {
  auto [f1x, f2x] = exchange_factors(f1, f2);
  (void)f1x;
  DressingField d1 = dressed_lines(integrate_frame(omega, f1.alpha), f1);
  DressingField d2 = dressed_lines(integrate_frame(omega, f2.alpha), f2);
  // push the second line field through the first, node by node
  DressingField d2x{f2x, d2.grid, {}};
  d2x.lines.reserve(d2.grid.size());
  for (int j = 0; j < d2.grid.ny; ++j)
    for (int i = 0; i < d2.grid.nx; ++i)
      d2x.lines.push_back(transform_line(local_factor(d1, f2.alpha, i, j),
                                         d2.at(i, j), i, j));
  CMat3 k = CMat3::Identity();
  if (with_k) {
    SimpleFactor partner = real_partner(f1);
    if (std::abs(f2.alpha - partner.alpha) > 1e-10 ||
        std::abs(f2.line.a - partner.line.a) > 1e-10 ||
        std::abs(f2.line.b - partner.line.b) > 1e-10)
      throw std::invalid_argument(
          "two_step_data: reality normalizer needs a partner pair");
    CMat3 winf = p_infinity(f2x) * p_infinity(f1);
    k = find_k(winf.conjugate().inverse());
  }
  return TwoStepData{f1, f2, f2x, std::move(d1), std::move(d2x), k};
}

FrameField two_step_frame(const ScalarField& omega, const TwoStepData& td,
                          cplx lambda) {
  FrameField base = integrate_frame(omega, lambda);
  CMat3 outer = td.k * eval_simple_factor(td.f2x, lambda) *
                eval_simple_factor(td.f1, lambda);
  FrameField out(base.grid, lambda);
  out.basepoint_normalized = false;
  for (int j = 0; j < base.grid.ny; ++j)
    for (int i = 0; i < base.grid.nx; ++i) {
      CMat3 right = local_factor(td.d2x, lambda, i, j) *
                    local_factor(td.d1, lambda, i, j);
      out.at(i, j) = outer * base.at(i, j) * right.transpose();
    }
  return out;
}

SurfaceField two_step_surface(const ScalarField& omega, const TwoStepData& td,
                              cplx lambda, double dlam) {
  SurfaceField base = sym_surface(omega, lambda, dlam);
  FrameField fl = integrate_frame(omega, lambda);
  cplx a1 = pole_coefficient(td.f1.alpha, lambda);
  cplx a2 = pole_coefficient(td.f2x.alpha, lambda);
  for (int j = 0; j < base.grid.ny; ++j)
    for (int i = 0; i < base.grid.nx; ++i) {
      const CMat3& g = fl.at(i, j);
      CMat3 g1 = g * local_factor(td.d1, lambda, i, j).transpose();
      CMat3 corr =
          1.0i * lambda *
          (a1 * g * line_direction(td.d1.at(i, j)) * g.transpose() +
           a2 * g1 * line_direction(td.d2x.at(i, j)) * g1.transpose());
      base.at(i, j) += vee_part(corr);
    }
  return base;
}

SurfaceField two_step_normal(const ScalarField& omega, const TwoStepData& td,
                             cplx lambda) {
  FrameField fl = integrate_frame(omega, lambda);
  SurfaceField out(fl.grid);
  const CMat3 h1 = hat(CVec3::Unit(0));
  for (int j = 0; j < fl.grid.ny; ++j)
    for (int i = 0; i < fl.grid.nx; ++i) {
      CMat3 psi = fl.at(i, j) *
                  (local_factor(td.d2x, lambda, i, j) *
                   local_factor(td.d1, lambda, i, j))
                      .transpose();
      out.at(i, j) = vee_part(psi * h1 * psi.transpose());
    }
  return out;
}

}  // namespace cgc
