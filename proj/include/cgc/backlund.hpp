#pragma once

#include "cgc/dressing.hpp"

namespace cgc {

// angle field of the classical transform, integrated from the basepoint:
//   dtheta/dx = -i dw/dy + sinh b sinh t cosh w - cosh b cosh t sinh w
//   dtheta/dy = i (dw/dx + sinh b cosh t sinh w - cosh b sinh t cosh w)
// the seed must satisfy its field equation to seed_tol. the result is itself
// a solution and carries evaluator closures derived from the system, so it
// can seed a chained transform
ScalarField integrate_theta(const ScalarField& omega, cplx beta, cplx theta0,
                            double seed_tol = 1e-3, double substep = 0.005);

// sup of the first-order system residual of an integrated angle field,
// measured with one-sided-capable fourth-order differences on the full grid
double theta_compat_residual(const ScalarField& omega,
                             const ScalarField& theta, cplx beta);

// surface moved along the classical line congruence:
//   out = surf + (1/sinh b)(cosh t e1 + i sinh t e2),
// e1 = surf_x / cosh w, e2 = surf_y / sinh w from grid differences
SurfaceField classical_transform(const SurfaceField& surf,
                                 const ScalarField& omega,
                                 const ScalarField& theta, cplx beta);

struct Alignment {
  CMat3 rot;
  CVec3 shift;
  double rms;
  double worst;
};
// bilinear least-squares motion carrying a onto b: b ~ rot a + shift
Alignment procrustes_align(const SurfaceField& a, const SurfaceField& b);

// seed with the plane domain rotated by sigma, closures composed
ScalarField rotate_domain(const ScalarField& omega, double sigma);

// parameters of the second transform matching the pushed-through dressing
// factor: its pole ratio, and its basepoint angle corrected by the gauge
// offset between the once-transformed frame and the standard frame of the
// new seed (which is the step-one angle field itself)
BBParams second_step_params(const SimpleFactor& f1, const SimpleFactor& f2,
                            cplx lambda, cplx omega0);

}  // namespace cgc
