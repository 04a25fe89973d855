#pragma once

#include <functional>
#include <vector>

#include "cgc/linalg.hpp"

namespace cgc {

struct Grid {
  int nx = 2, ny = 2;
  double hx = 0.1, hy = 0.1;
  int i0 = 0, j0 = 0;  // basepoint node
  double x(int i) const { return (i - i0) * hx; }
  double y(int j) const { return (j - j0) * hy; }
  int idx(int i, int j) const { return j * nx + i; }  // row-major, i fastest
  int size() const { return nx * ny; }
  void validate() const;
};

struct ScalarField {
  Grid grid;
  std::vector<cplx> v;
  // analytic evaluators set by seeds; grid interpolation is the fallback
  std::function<cplx(double, double)> f, fx, fy;

  explicit ScalarField(const Grid& g);
  cplx& at(int i, int j) { return v[grid.idx(i, j)]; }
  const cplx& at(int i, int j) const { return v[grid.idx(i, j)]; }
  bool analytic() const { return static_cast<bool>(f); }
  cplx eval(double x, double y) const;
  cplx eval_dx(double x, double y) const;
  cplx eval_dy(double x, double y) const;
};

struct LaxSample {
  CMat3 U, V;
};

struct FrameField {
  Grid grid;
  cplx lambda;
  bool basepoint_normalized = true;
  std::vector<CMat3> m;
  FrameField(const Grid& g, cplx lam)
      : grid(g), lambda(lam), m(g.size(), CMat3::Identity()) {}
  CMat3& at(int i, int j) { return m[grid.idx(i, j)]; }
  const CMat3& at(int i, int j) const { return m[grid.idx(i, j)]; }
  double orthogonality_drift() const;
};

struct SurfaceField {
  Grid grid;
  std::vector<CVec3> p;
  explicit SurfaceField(const Grid& g) : grid(g), p(g.size(), CVec3::Zero()) {}
  CVec3& at(int i, int j) { return p[grid.idx(i, j)]; }
  const CVec3& at(int i, int j) const { return p[grid.idx(i, j)]; }
  double imag_sup() const;
  CVec3 eval(double x, double y) const;  // componentwise grid interpolation
};

// per-node first and second fundamental form samples on the interior
struct FormField {
  Grid grid;
  int margin = 2;
  std::vector<cplx> E, F, G, e, f, g;
  explicit FormField(const Grid& gr);
  bool valid(int i, int j) const {
    return i >= margin && i < grid.nx - margin && j >= margin &&
           j < grid.ny - margin;
  }
};

ScalarField seed_vacuum(const Grid& g);
// x-only reduction w'' = -sinh w cosh w integrated from (omega0, omega0_prime)
ScalarField seed_pendulum(const Grid& g, double omega0, double omega0_prime);

double sinh_gordon_residual(const ScalarField& omega);

LaxSample lax_connection_at(const ScalarField& omega, cplx lambda, double x,
                            double y);
LaxSample lax_connection(const ScalarField& omega, cplx lambda, int i, int j);

// transport from node (i,j) to (i+1,j) resp. (i,j+1): two-point Gauss
// Magnus exponential of the connection along the edge
CMat3 edge_transport_x(const ScalarField& omega, cplx lambda, int i, int j);
CMat3 edge_transport_y(const ScalarField& omega, cplx lambda, int i, int j);

double flatness_residual(const ScalarField& omega, cplx lambda);

FrameField integrate_frame(const ScalarField& omega, cplx lambda);
FrameField integrate_frame(const ScalarField& omega, cplx lambda,
                           const Grid& grid);

SurfaceField gauss_map(const FrameField& frame);
SurfaceField sym_surface(const ScalarField& omega, cplx lambda,
                         double dlam = 1e-4);

FormField fundamental_forms(const SurfaceField& surf, const SurfaceField& phi);

// max |K - target| over interior nodes where |EG - F^2| exceeds the floor
double curvature_deviation(const FormField& forms, cplx target,
                           double degeneracy_floor = 1e-6);

// least-squares fit of a loop-valued connection sample against {1/lam, 1, lam};
// returns the largest entrywise deviation of the fit
double laurent_fit_residual(const std::function<CMat3(cplx)>& conn,
                            const std::vector<cplx>& samples);

}  // namespace cgc
