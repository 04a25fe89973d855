#pragma once

// edge transports shared by the frame integrators: two-point Gauss sampling
// of a connection along a grid edge, second-order Magnus exponential, and the
// basepoint-row-then-columns sweep
#include <cmath>
#include <vector>

#include "cgc/framing.hpp"

namespace cgc::detail {

constexpr double kGauss = 0.28867513459481287;  // 1/(2 sqrt(3))

inline CMat3 magnus_edge(const CMat3& a1, const CMat3& a2, double h) {
  // right-multiplication convention: the commutator term is [A1, A2]
  CMat3 om = (h / 2.0) * (a1 + a2) +
             (h * h * std::sqrt(3.0) / 12.0) * (a1 * a2 - a2 * a1);
  return expm(om);
}

// Conn: LaxSample conn(double x, double y) at a fixed spectral point
template <typename Conn>
CMat3 transport_x(const Conn& conn, const Grid& g, int i, int j) {
  double xc = 0.5 * (g.x(i) + g.x(i + 1)), yy = g.y(j);
  double off = g.hx * kGauss;
  return magnus_edge(conn(xc - off, yy).U, conn(xc + off, yy).U, g.hx);
}

template <typename Conn>
CMat3 transport_y(const Conn& conn, const Grid& g, int i, int j) {
  double xx = g.x(i), yc = 0.5 * (g.y(j) + g.y(j + 1));
  double off = g.hy * kGauss;
  return magnus_edge(conn(xx, yc - off).V, conn(xx, yc + off).V, g.hy);
}

template <typename Conn>
FrameField integrate_sweep(const Conn& conn, const Grid& g, cplx lambda) {
  FrameField out(g, lambda);
  for (int i = g.i0; i < g.nx - 1; ++i)
    out.at(i + 1, g.j0) = out.at(i, g.j0) * transport_x(conn, g, i, g.j0);
  for (int i = g.i0; i > 0; --i)
    out.at(i - 1, g.j0) =
        out.at(i, g.j0) * transport_x(conn, g, i - 1, g.j0).transpose();
  for (int i = 0; i < g.nx; ++i) {
    for (int j = g.j0; j < g.ny - 1; ++j)
      out.at(i, j + 1) = out.at(i, j) * transport_y(conn, g, i, j);
    for (int j = g.j0; j > 0; --j)
      out.at(i, j - 1) =
          out.at(i, j) * transport_y(conn, g, i, j - 1).transpose();
  }
  return out;
}

template <typename Conn>
double plaquette_residual(const Conn& conn, const Grid& g) {
  std::vector<CMat3> tx((g.nx - 1) * g.ny), ty(g.nx * (g.ny - 1));
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx - 1; ++i)
      tx[j * (g.nx - 1) + i] = transport_x(conn, g, i, j);
  for (int j = 0; j < g.ny - 1; ++j)
    for (int i = 0; i < g.nx; ++i) ty[j * g.nx + i] = transport_y(conn, g, i, j);
  double worst = 0.0;
  for (int j = 0; j < g.ny - 1; ++j)
    for (int i = 0; i < g.nx - 1; ++i) {
      CMat3 loop = tx[j * (g.nx - 1) + i] * ty[j * g.nx + i + 1] *
                   tx[(j + 1) * (g.nx - 1) + i].transpose() *
                   ty[j * g.nx + i].transpose();
      worst = std::max(worst, (loop - CMat3::Identity()).norm());
    }
  return worst;
}

}  // namespace cgc::detail
