#include "cgc/framing.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "transport_detail.hpp"

namespace cgc {

using namespace std::complex_literals;

void Grid::validate() const {
  if (nx < 2 || ny < 2) throw std::domain_error("grid: nx, ny must be >= 2");
  if (!(hx > 0.0) || !(hy > 0.0))
    throw std::domain_error("grid: spacings must be positive");
  if (i0 < 0 || i0 >= nx || j0 < 0 || j0 >= ny)
    throw std::domain_error("grid: basepoint outside the grid");
}

ScalarField::ScalarField(const Grid& g) : grid(g), v(g.size(), cplx(0.0)) {
  grid.validate();
}

namespace {

void lagrange_w(double t, double w[4]) {
  w[0] = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
  w[1] = t * (t - 2.0) * (t - 3.0) / 2.0;
  w[2] = -t * (t - 1.0) * (t - 3.0) / 2.0;
  w[3] = t * (t - 1.0) * (t - 2.0) / 6.0;
}

void lagrange_dw(double t, double dw[4]) {
  dw[0] = -((t - 2.0) * (t - 3.0) + (t - 1.0) * (t - 3.0) +
            (t - 1.0) * (t - 2.0)) /
          6.0;
  dw[1] =
      ((t - 2.0) * (t - 3.0) + t * (t - 3.0) + t * (t - 2.0)) / 2.0;
  dw[2] =
      -((t - 1.0) * (t - 3.0) + t * (t - 3.0) + t * (t - 1.0)) / 2.0;
  dw[3] =
      ((t - 1.0) * (t - 2.0) + t * (t - 1.0) + t * (t - 2.0)) / 6.0;
}

struct StencilPos {
  int ib, jb;
  double tx, ty;
};

StencilPos locate(const Grid& g, double x, double y) {
  if (g.nx < 4 || g.ny < 4)
    throw std::domain_error("field interpolation needs at least a 4x4 grid");
  double xi = (x - g.x(0)) / g.hx;
  double yj = (y - g.y(0)) / g.hy;
  const double slack = 1e-9;
  if (xi < -slack || xi > g.nx - 1 + slack || yj < -slack ||
      yj > g.ny - 1 + slack)
    throw std::domain_error("field evaluation outside the grid hull");
  int ib = std::clamp(static_cast<int>(std::floor(xi)) - 1, 0, g.nx - 4);
  int jb = std::clamp(static_cast<int>(std::floor(yj)) - 1, 0, g.ny - 4);
  return {ib, jb, xi - ib, yj - jb};
}

}  // namespace

cplx ScalarField::eval(double x, double y) const {
  if (f) return f(x, y);
  StencilPos s = locate(grid, x, y);
  double wx[4], wy[4];
  lagrange_w(s.tx, wx);
  lagrange_w(s.ty, wy);
  cplx acc = 0.0;
  for (int b = 0; b < 4; ++b)
    for (int a = 0; a < 4; ++a)
      acc += wy[b] * wx[a] * at(s.ib + a, s.jb + b);
  return acc;
}

cplx ScalarField::eval_dx(double x, double y) const {
  if (fx) return fx(x, y);
  if (f) throw std::domain_error("analytic field without x-derivative");
  StencilPos s = locate(grid, x, y);
  double wx[4], wy[4];
  lagrange_dw(s.tx, wx);
  lagrange_w(s.ty, wy);
  cplx acc = 0.0;
  for (int b = 0; b < 4; ++b)
    for (int a = 0; a < 4; ++a)
      acc += wy[b] * wx[a] * at(s.ib + a, s.jb + b);
  return acc / grid.hx;
}

cplx ScalarField::eval_dy(double x, double y) const {
  if (fy) return fy(x, y);
  if (f) throw std::domain_error("analytic field without y-derivative");
  StencilPos s = locate(grid, x, y);
  double wx[4], wy[4];
  lagrange_w(s.tx, wx);
  lagrange_dw(s.ty, wy);
  cplx acc = 0.0;
  for (int b = 0; b < 4; ++b)
    for (int a = 0; a < 4; ++a)
      acc += wy[b] * wx[a] * at(s.ib + a, s.jb + b);
  return acc / grid.hy;
}

ScalarField seed_vacuum(const Grid& g) {
  ScalarField out(g);
  out.f = [](double, double) { return cplx(0.0); };
  out.fx = [](double, double) { return cplx(0.0); };
  out.fy = [](double, double) { return cplx(0.0); };
  return out;
}

namespace {

// dense table for the planar-pendulum reduction, cubic hermite readout
struct PendTable {
  double x_lo = 0.0, step = 1e-3;
  std::vector<double> w, wp;

  static double acc(double w_) { return -std::sinh(w_) * std::cosh(w_); }

  double eval_w(double x) const {
    auto [k, t] = cell(x);
    double d = step;
    double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
    double h10 = t * (1.0 - t) * (1.0 - t);
    double h01 = t * t * (3.0 - 2.0 * t);
    double h11 = t * t * (t - 1.0);
    return h00 * w[k] + h10 * d * wp[k] + h01 * w[k + 1] + h11 * d * wp[k + 1];
  }

  double eval_wp(double x) const {
    auto [k, t] = cell(x);
    double d = step;
    double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
    double h10 = t * (1.0 - t) * (1.0 - t);
    double h01 = t * t * (3.0 - 2.0 * t);
    double h11 = t * t * (t - 1.0);
    return h00 * wp[k] + h10 * d * acc(w[k]) + h01 * wp[k + 1] +
           h11 * d * acc(w[k + 1]);
  }

 private:
  std::pair<int, double> cell(double x) const {
    double s = (x - x_lo) / step;
    int k = static_cast<int>(std::floor(s));
    if (k < 0 || k + 1 >= static_cast<int>(w.size()))
      throw std::domain_error("pendulum seed evaluated outside its range");
    return {k, s - k};
  }
};

void pend_rk4(double& w_, double& p, double h) {
  auto f = [](double a, double b, double& da, double& db) {
    da = b;
    db = PendTable::acc(a);
  };
  double k1w, k1p, k2w, k2p, k3w, k3p, k4w, k4p;
  f(w_, p, k1w, k1p);
  f(w_ + 0.5 * h * k1w, p + 0.5 * h * k1p, k2w, k2p);
  f(w_ + 0.5 * h * k2w, p + 0.5 * h * k2p, k3w, k3p);
  f(w_ + h * k3w, p + h * k3p, k4w, k4p);
  w_ += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
  p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
  if (!(std::abs(w_) < 30.0))
    throw std::range_error("pendulum seed amplitude overflow");
}

}  // namespace

ScalarField seed_pendulum(const Grid& g, double omega0, double omega0_prime) {
  g.validate();
  if (omega0 == 0.0 && omega0_prime == 0.0)
    throw std::invalid_argument("pendulum seed needs a nonzero initial state");

  double rx = std::max(std::abs(g.x(0)), std::abs(g.x(g.nx - 1)));
  double ry = std::max(std::abs(g.y(0)), std::abs(g.y(g.ny - 1)));
  double reach = 1.02 * std::hypot(rx, ry) + 2.0 * std::max(g.hx, g.hy) + 0.1;
  double step = std::clamp(std::min(g.hx, g.hy) / 32.0, 1e-5, 2e-3);

  auto table = std::make_shared<PendTable>();
  int n_side = static_cast<int>(std::ceil(reach / step));
  table->step = step;
  table->x_lo = -n_side * step;
  table->w.assign(2 * n_side + 1, 0.0);
  table->wp.assign(2 * n_side + 1, 0.0);

  double w_ = omega0, p = omega0_prime;
  table->w[n_side] = w_;
  table->wp[n_side] = p;
  for (int k = 1; k <= n_side; ++k) {  // forward sweep
    pend_rk4(w_, p, step);
    table->w[n_side + k] = w_;
    table->wp[n_side + k] = p;
  }
  w_ = omega0;
  p = omega0_prime;
  for (int k = 1; k <= n_side; ++k) {  // backward sweep
    pend_rk4(w_, p, -step);
    table->w[n_side - k] = w_;
    table->wp[n_side - k] = p;
  }

  ScalarField out(g);
  out.f = [table](double x, double) { return cplx(table->eval_w(x)); };
  out.fx = [table](double x, double) { return cplx(table->eval_wp(x)); };
  out.fy = [](double, double) { return cplx(0.0); };
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) out.at(i, j) = out.f(g.x(i), g.y(j));
  return out;
}

double sinh_gordon_residual(const ScalarField& omega) {
  const Grid& g = omega.grid;
  if (g.nx < 3 || g.ny < 3)
    throw std::domain_error("residual needs at least a 3x3 grid");
  double worst = 0.0;
  for (int j = 1; j < g.ny - 1; ++j)
    for (int i = 1; i < g.nx - 1; ++i) {
      cplx lap = (omega.at(i + 1, j) - 2.0 * omega.at(i, j) +
                  omega.at(i - 1, j)) /
                     (g.hx * g.hx) +
                 (omega.at(i, j + 1) - 2.0 * omega.at(i, j) +
                  omega.at(i, j - 1)) /
                     (g.hy * g.hy);
      cplx r = lap + std::sinh(omega.at(i, j)) * std::cosh(omega.at(i, j));
      worst = std::max(worst, std::abs(r));
    }
  return worst;
}

LaxSample lax_connection_at(const ScalarField& omega, cplx lambda, double x,
                            double y) {
  if (lambda == 0.0) throw std::domain_error("lax connection: lambda = 0");
  cplx om = omega.eval(x, y);
  cplx omx = omega.eval_dx(x, y);
  cplx omy = omega.eval_dy(x, y);
  cplx li = 1.0 / lambda;
  cplx cm = 0.5i * (li - lambda);
  cplx cp = 0.5 * (li + lambda);
  cplx ch = std::cosh(om), sh = std::sinh(om);
  LaxSample s;
  s.U = hat(CVec3(omy, cm * ch, -cp * sh));
  s.V = hat(CVec3(-omx, -cp * ch, -cm * sh));
  return s;
}

LaxSample lax_connection(const ScalarField& omega, cplx lambda, int i, int j) {
  return lax_connection_at(omega, lambda, omega.grid.x(i), omega.grid.y(j));
}

namespace {

struct SinhConn {
  const ScalarField& omega;
  cplx lambda;
  LaxSample operator()(double x, double y) const {
    return lax_connection_at(omega, lambda, x, y);
  }
};

}  // namespace

CMat3 edge_transport_x(const ScalarField& omega, cplx lambda, int i, int j) {
  return detail::transport_x(SinhConn{omega, lambda}, omega.grid, i, j);
}

CMat3 edge_transport_y(const ScalarField& omega, cplx lambda, int i, int j) {
  return detail::transport_y(SinhConn{omega, lambda}, omega.grid, i, j);
}

double flatness_residual(const ScalarField& omega, cplx lambda) {
  omega.grid.validate();
  return detail::plaquette_residual(SinhConn{omega, lambda}, omega.grid);
}

FrameField integrate_frame(const ScalarField& omega, cplx lambda) {
  return integrate_frame(omega, lambda, omega.grid);
}

FrameField integrate_frame(const ScalarField& omega, cplx lambda,
                           const Grid& g) {
  g.validate();
  if (lambda == 0.0) throw std::domain_error("integrate_frame: lambda = 0");
  if (!omega.analytic())
    for (const cplx& c : omega.v)
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw std::domain_error("integrate_frame: non-finite seed value");
  return detail::integrate_sweep(SinhConn{omega, lambda}, g, lambda);
}

double FrameField::orthogonality_drift() const {
  double worst = 0.0;
  for (const CMat3& g : m)
    worst = std::max(worst,
                     (g.transpose() * g - CMat3::Identity()).norm());
  return worst;
}

double SurfaceField::imag_sup() const {
  double worst = 0.0;
  for (const CVec3& q : p)
    for (int k = 0; k < 3; ++k)
      worst = std::max(worst, std::abs(q(k).imag()));
  return worst;
}

CVec3 SurfaceField::eval(double x, double y) const {
  StencilPos s = locate(grid, x, y);
  double wx[4], wy[4];
  lagrange_w(s.tx, wx);
  lagrange_w(s.ty, wy);
  CVec3 acc = CVec3::Zero();
  for (int b = 0; b < 4; ++b)
    for (int a = 0; a < 4; ++a)
      acc += wy[b] * wx[a] * at(s.ib + a, s.jb + b);
  return acc;
}

SurfaceField gauss_map(const FrameField& frame) {
  SurfaceField out(frame.grid);
  const CMat3 h1 = hat(CVec3::Unit(0));
  for (int k = 0; k < frame.grid.size(); ++k)
    out.p[k] = vee_part(frame.m[k] * h1 * frame.m[k].transpose());
  return out;
}

SurfaceField sym_surface(const ScalarField& omega, cplx lambda, double dlam) {
  if (lambda == 0.0) throw std::domain_error("sym_surface: lambda = 0");
  if (!(dlam > 0.0)) throw std::domain_error("sym_surface: dlam must be > 0");
  FrameField f0 = integrate_frame(omega, lambda);
  FrameField fp = integrate_frame(omega, lambda * (1.0 + dlam));
  FrameField fm = integrate_frame(omega, lambda * (1.0 - dlam));
  SurfaceField out(omega.grid);
  const cplx scale = -1.0i / (2.0 * dlam);
  for (int k = 0; k < omega.grid.size(); ++k)
    out.p[k] = vee_part(scale * (fp.m[k] - fm.m[k]) * f0.m[k].transpose());
  return out;
}

FormField::FormField(const Grid& gr)
    : grid(gr),
      E(gr.size()),
      F(gr.size()),
      G(gr.size()),
      e(gr.size()),
      f(gr.size()),
      g(gr.size()) {}

FormField fundamental_forms(const SurfaceField& surf, const SurfaceField& phi) {
  const Grid& g = surf.grid;
  if (g.nx != phi.grid.nx || g.ny != phi.grid.ny)
    throw std::domain_error("fundamental_forms: grids do not match");
  if (g.nx < 5 || g.ny < 5)
    throw std::domain_error("fundamental_forms: grid too small");
  FormField out(g);

  static const int off[4] = {-2, -1, 1, 2};
  static const double wd1[4] = {1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0,
                                -1.0 / 12.0};
  for (int j = out.margin; j < g.ny - out.margin; ++j)
    for (int i = out.margin; i < g.nx - out.margin; ++i) {
      CVec3 sx = CVec3::Zero(), sy = CVec3::Zero(), sxy = CVec3::Zero();
      for (int a = 0; a < 4; ++a) {
        sx += wd1[a] * surf.at(i + off[a], j);
        sy += wd1[a] * surf.at(i, j + off[a]);
        for (int b = 0; b < 4; ++b)
          sxy += wd1[a] * wd1[b] * surf.at(i + off[a], j + off[b]);
      }
      sx /= g.hx;
      sy /= g.hy;
      sxy /= g.hx * g.hy;
      CVec3 sxx = (-surf.at(i - 2, j) + 16.0 * surf.at(i - 1, j) -
                   30.0 * surf.at(i, j) + 16.0 * surf.at(i + 1, j) -
                   surf.at(i + 2, j)) /
                  (12.0 * g.hx * g.hx);
      CVec3 syy = (-surf.at(i, j - 2) + 16.0 * surf.at(i, j - 1) -
                   30.0 * surf.at(i, j) + 16.0 * surf.at(i, j + 1) -
                   surf.at(i, j + 2)) /
                  (12.0 * g.hy * g.hy);
      const CVec3& n = phi.at(i, j);
      int k = g.idx(i, j);
      out.E[k] = bilinear(sx, sx);
      out.F[k] = bilinear(sx, sy);
      out.G[k] = bilinear(sy, sy);
      out.e[k] = bilinear(sxx, n);
      out.f[k] = bilinear(sxy, n);
      out.g[k] = bilinear(syy, n);
    }
  return out;
}

double curvature_deviation(const FormField& forms, cplx target,
                           double degeneracy_floor) {
  const Grid& g = forms.grid;
  double worst = 0.0;
  int counted = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!forms.valid(i, j)) continue;
      int k = g.idx(i, j);
      cplx den = forms.E[k] * forms.G[k] - forms.F[k] * forms.F[k];
      if (std::abs(den) < degeneracy_floor) continue;
      cplx kg = (forms.e[k] * forms.g[k] - forms.f[k] * forms.f[k]) / den;
      worst = std::max(worst, std::abs(kg - target));
      ++counted;
    }
  if (counted == 0)
    throw std::domain_error("curvature_deviation: surface degenerate everywhere");
  return worst;
}

double laurent_fit_residual(const std::function<CMat3(cplx)>& conn,
                            const std::vector<cplx>& samples) {
  int n = static_cast<int>(samples.size());
  if (n < 4)
    throw std::domain_error("laurent fit needs at least 4 sample points");
  Eigen::MatrixXcd basis(n, 3), rhs(n, 9);
  for (int r = 0; r < n; ++r) {
    cplx lam = samples[r];
    basis(r, 0) = 1.0 / lam;
    basis(r, 1) = 1.0;
    basis(r, 2) = lam;
    CMat3 m = conn(lam);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) rhs(r, 3 * a + b) = m(a, b);
  }
  Eigen::MatrixXcd coef = basis.colPivHouseholderQr().solve(rhs);
  Eigen::MatrixXcd resid = basis * coef - rhs;
  return resid.cwiseAbs().maxCoeff();
}

}  // namespace cgc
