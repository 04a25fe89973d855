#include "cgc/backlund.hpp"

#include <cmath>
#include <memory>

namespace cgc {

using namespace std::complex_literals;

namespace {

struct ThetaRhs {
  const ScalarField& omega;
  cplx sb, cb;

  cplx x_dir(cplx t, double x, double y) const {
    cplx w = omega.eval(x, y);
    return -1.0i * omega.eval_dy(x, y) + sb * std::sinh(t) * std::cosh(w) -
           cb * std::cosh(t) * std::sinh(w);
  }
  cplx y_dir(cplx t, double x, double y) const {
    cplx w = omega.eval(x, y);
    return 1.0i * (omega.eval_dx(x, y) + sb * std::cosh(t) * std::sinh(w) -
                   cb * std::sinh(t) * std::cosh(w));
  }
};

// RK4 along a single grid edge, sub-stepped
cplx advance(const ThetaRhs& rhs, cplx t, double x0, double y0, double h,
             bool xdir, double substep) {
  int n = std::max(1, static_cast<int>(std::ceil(std::abs(h) / substep)));
  double dh = h / n;
  auto f = [&](cplx tt, double s) {
    double x = xdir ? x0 + s : x0, y = xdir ? y0 : y0 + s;
    return xdir ? rhs.x_dir(tt, x, y) : rhs.y_dir(tt, x, y);
  };
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    cplx k1 = f(t, s);
    cplx k2 = f(t + 0.5 * dh * k1, s + 0.5 * dh);
    cplx k3 = f(t + 0.5 * dh * k2, s + 0.5 * dh);
    cplx k4 = f(t + dh * k3, s + dh);
    t += dh / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    s += dh;
    if (!(std::abs(t) < 1e6))
      throw std::range_error("angle field integration diverged");
  }
  return t;
}

// five-point fourth-order first-derivative rows, position t in 0..4
const double kD1Rows[5][5] = {
    {-25.0 / 12, 48.0 / 12, -36.0 / 12, 16.0 / 12, -3.0 / 12},
    {-3.0 / 12, -10.0 / 12, 18.0 / 12, -6.0 / 12, 1.0 / 12},
    {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12},
    {-1.0 / 12, 6.0 / 12, -18.0 / 12, 10.0 / 12, 3.0 / 12},
    {3.0 / 12, -16.0 / 12, 36.0 / 12, -48.0 / 12, 25.0 / 12}};

template <typename T, typename Get>
T d1_full(const Get& get, int i, int n, double h) {
  int b = std::clamp(i - 2, 0, n - 5);
  T acc = get(b) * kD1Rows[i - b][0];
  for (int a = 1; a < 5; ++a) acc += get(b + a) * kD1Rows[i - b][a];
  return acc * (1.0 / h);
}

}  // namespace

ScalarField integrate_theta(const ScalarField& omega, cplx beta, cplx theta0,
                            double seed_tol, double substep) {
  const Grid& g = omega.grid;
  g.validate();
  if (!(substep > 0.0))
    throw std::domain_error("integrate_theta: substep must be positive");
  if (std::abs(std::sinh(beta)) < kTolAdmissible)
    throw PoleError("integrate_theta: degenerate transform parameter");
  double resid = sinh_gordon_residual(omega);
  if (resid > seed_tol)
    throw std::domain_error("integrate_theta: seed field residual too large");

  ThetaRhs rhs{omega, std::sinh(beta), std::cosh(beta)};
  ScalarField out(g);
  out.at(g.i0, g.j0) = theta0;
  for (int i = g.i0; i < g.nx - 1; ++i)
    out.at(i + 1, g.j0) = advance(rhs, out.at(i, g.j0), g.x(i), g.y(g.j0),
                                  g.hx, true, substep);
  for (int i = g.i0; i > 0; --i)
    out.at(i - 1, g.j0) = advance(rhs, out.at(i, g.j0), g.x(i), g.y(g.j0),
                                  -g.hx, true, substep);
  for (int i = 0; i < g.nx; ++i) {
    for (int j = g.j0; j < g.ny - 1; ++j)
      out.at(i, j + 1) =
          advance(rhs, out.at(i, j), g.x(i), g.y(j), g.hy, false, substep);
    for (int j = g.j0; j > 0; --j)
      out.at(i, j - 1) =
          advance(rhs, out.at(i, j), g.x(i), g.y(j), -g.hy, false, substep);
  }

  // closures: value by interpolation, derivatives through the system itself,
  // so chained transforms see the seed derivatives at full accuracy
  auto vals = std::make_shared<ScalarField>(out);
  auto seed = std::make_shared<ScalarField>(omega);
  cplx sb = rhs.sb, cb = rhs.cb;
  out.f = [vals](double x, double y) { return vals->eval(x, y); };
  out.fx = [vals, seed, sb, cb](double x, double y) {
    return ThetaRhs{*seed, sb, cb}.x_dir(vals->eval(x, y), x, y);
  };
  out.fy = [vals, seed, sb, cb](double x, double y) {
    return ThetaRhs{*seed, sb, cb}.y_dir(vals->eval(x, y), x, y);
  };
  return out;
}

double theta_compat_residual(const ScalarField& omega,
                             const ScalarField& theta, cplx beta) {
  const Grid& g = omega.grid;
  if (g.nx < 5 || g.ny < 5)
    throw std::domain_error("theta_compat_residual: grid too small");
  ThetaRhs rhs{omega, std::sinh(beta), std::cosh(beta)};
  double worst = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      cplx tx =
          d1_full<cplx>([&](int a) { return theta.at(a, j); }, i, g.nx, g.hx);
      cplx ty =
          d1_full<cplx>([&](int a) { return theta.at(i, a); }, j, g.ny, g.hy);
      double x = g.x(i), y = g.y(j);
      worst = std::max(worst, std::abs(tx - rhs.x_dir(theta.at(i, j), x, y)));
      worst = std::max(worst, std::abs(ty - rhs.y_dir(theta.at(i, j), x, y)));
    }
  return worst;
}

SurfaceField classical_transform(const SurfaceField& surf,
                                 const ScalarField& omega,
                                 const ScalarField& theta, cplx beta) {
  const Grid& g = surf.grid;
  if (g.nx != omega.grid.nx || g.ny != omega.grid.ny ||
      g.nx != theta.grid.nx || g.ny != theta.grid.ny)
    throw std::invalid_argument("classical_transform: grids do not match");
  if (g.nx < 5 || g.ny < 5)
    throw std::domain_error("classical_transform: grid too small");
  cplx sb = std::sinh(beta);
  if (std::abs(sb) < kTolAdmissible)
    throw PoleError("classical_transform: degenerate transform parameter");

  SurfaceField out(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      CVec3 sx = d1_full<CVec3>([&](int a) { return CVec3(surf.at(a, j)); },
                                i, g.nx, g.hx);
      CVec3 sy = d1_full<CVec3>([&](int a) { return CVec3(surf.at(i, a)); },
                                j, g.ny, g.hy);
      cplx w = omega.at(i, j);
      cplx sw = std::sinh(w);
      if (std::abs(sw) < 1e-8)
        throw std::domain_error(
            "classical_transform: surface degenerates on the grid");
      CVec3 e1 = sx / std::cosh(w), e2 = sy / sw;
      cplx t = theta.at(i, j);
      out.at(i, j) = surf.at(i, j) +
                     (std::cosh(t) * e1 + 1.0i * std::sinh(t) * e2) / sb;
    }
  return out;
}

Alignment procrustes_align(const SurfaceField& a, const SurfaceField& b) {
  if (a.grid.nx != b.grid.nx || a.grid.ny != b.grid.ny)
    throw std::invalid_argument("procrustes_align: grids do not match");
  int n = a.grid.size();
  CVec3 ca = CVec3::Zero(), cb = CVec3::Zero();
  for (int k = 0; k < n; ++k) {
    ca += a.p[k];
    cb += b.p[k];
  }
  ca /= double(n);
  cb /= double(n);

  CMat3 S = CMat3::Zero(), C = CMat3::Zero();
  for (int k = 0; k < n; ++k) {
    CVec3 da = a.p[k] - ca, db = b.p[k] - cb;
    S += da * da.transpose();
    C += db * da.transpose();
  }
  Eigen::FullPivLU<CMat3> lu(S.transpose());
  if (!lu.isInvertible())
    throw std::runtime_error("procrustes_align: degenerate point cloud");
  CMat3 r0 = lu.solve(C.transpose()).transpose();
  // bilinear polar correction; near-orthogonal input keeps the branch safe
  CMat3 gram = r0.transpose() * r0;
  Eigen::ComplexEigenSolver<CMat3> es(gram);
  CMat3 isqrt = CMat3::Zero();
  CMat3 vecs = es.eigenvectors();
  for (int k = 0; k < 3; ++k) {
    cplx ev = es.eigenvalues()(k);
    if (std::abs(ev) < 1e-12)
      throw std::runtime_error("procrustes_align: degenerate point cloud");
    isqrt(k, k) = 1.0 / std::sqrt(ev);
  }
  CMat3 rot = r0 * vecs * isqrt * vecs.inverse();
  if (!((rot.transpose() * rot - CMat3::Identity()).norm() < 1e-6))
    throw std::runtime_error("procrustes_align: no orthogonal motion found");

  CVec3 shift = cb - rot * ca;
  double sum = 0.0, worst = 0.0;
  for (int k = 0; k < n; ++k) {
    double d = (rot * a.p[k] + shift - b.p[k]).norm();
    sum += d * d;
    worst = std::max(worst, d);
  }
  return Alignment{rot, shift, std::sqrt(sum / n), worst};
}

ScalarField rotate_domain(const ScalarField& omega, double sigma) {
  if (!omega.f || !omega.fx || !omega.fy)
    throw std::invalid_argument(
        "rotate_domain: seed needs analytic evaluators");
  double c = std::cos(sigma), s = std::sin(sigma);
  ScalarField out(omega.grid);
  auto f = omega.f, fx = omega.fx, fy = omega.fy;
  out.f = [=](double x, double y) { return f(c * x - s * y, s * x + c * y); };
  out.fx = [=](double x, double y) {
    return c * fx(c * x - s * y, s * x + c * y) +
           s * fy(c * x - s * y, s * x + c * y);
  };
  out.fy = [=](double x, double y) {
    return -s * fx(c * x - s * y, s * x + c * y) +
           c * fy(c * x - s * y, s * x + c * y);
  };
  const Grid& g = omega.grid;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) out.at(i, j) = out.f(g.x(i), g.y(j));
  return out;
}

BBParams second_step_params(const SimpleFactor& f1, const SimpleFactor& f2,
                            cplx lambda, cplx omega0) {
  SimpleFactor f2x = exchange_factors(f1, f2).second;
  BBParams one = bb_params(f1, lambda);
  BBParams two = bb_params(f2x, lambda);
  return {two.beta, two.theta0 - one.theta0 + omega0};
}

}  // namespace cgc
