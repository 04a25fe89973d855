#pragma once

#include "cgc/dressing.hpp"

namespace cgc {

// The negative-curvature pipeline. Grid x is the characteristic coordinate u,
// grid y is v; seeds solve omega_uv = sin(omega) and frames are real
// orthogonal at real spectral points.

// simple factor in the real class: purely imaginary pole and a line with
// conj(L) = QL, so the loop satisfies conj(p(lambda)) = p(conj(lambda))
struct RealSimpleFactor {
  cplx alpha;
  IsotropicLine line;
  RealSimpleFactor(cplx a, const IsotropicLine& l);
  SimpleFactor factor() const { return SimpleFactor(alpha, line); }
};

// the circle (i/2)(cos t, sin t) that carries every real-class line
IsotropicLine real_class_line(double t);

// pole placed so that dressing at spectral point lambda tilts the tangent
// planes by the angle sigma with tan(sigma/2) = beta: alpha = i beta lambda.
// The dictionary is fitted against measured normal angles; see the tests.
RealSimpleFactor backlund_factor(double beta, double t, double lambda = 1.0);

ScalarField sg_seed_vacuum(const Grid& g);
// the one-soliton kink 4 atan(exp(u/r + r v + phase))
ScalarField sg_seed_kink(const Grid& g, double r = 1.0, double phase = 0.0);

// sup over interior nodes of omega_uv - sin(omega), fourth-order cross stencil
double sine_gordon_residual(const ScalarField& omega);

// rotation part omega_u/2 du - omega_v/2 dv about the first axis; half-angle
// direction cosines on the other two axes, weighted 1/lambda on du and
// lambda on dv
LaxSample sg_lax_connection_at(const ScalarField& omega, cplx lambda, double u,
                               double v);
LaxSample sg_lax_connection(const ScalarField& omega, cplx lambda, int i,
                            int j);

double sg_flatness_residual(const ScalarField& omega, cplx lambda);

FrameField sg_integrate_frame(const ScalarField& omega, cplx lambda);
FrameField sg_integrate_frame(const ScalarField& omega, cplx lambda,
                              const Grid& grid);

// F = -lambda dPhi/dlambda Phi^-1, central difference in the spectral ray
SurfaceField sg_sym_surface(const ScalarField& omega, cplx lambda,
                            double dlam = 1e-4);

DressingField sg_dressed_lines(const ScalarField& omega,
                               const RealSimpleFactor& f);
FrameField sg_dress(const ScalarField& omega, const RealSimpleFactor& f,
                    cplx lambda);
// surface and normal of the dressed frame with the constant outer rotation
// and translation stripped off
SurfaceField sg_dressed_surface(const ScalarField& omega,
                                const RealSimpleFactor& f, cplx lambda,
                                double dlam = 1e-4);
SurfaceField sg_dressed_normal(const ScalarField& omega,
                               const RealSimpleFactor& f, cplx lambda);

// asymptotic angle of a unit-speed real surface read off its fundamental
// forms, unwrapped from the basepoint outward; lives on the interior grid
// the forms cover
ScalarField sg_extract_angle(const SurfaceField& surf, const SurfaceField& phi);

// sup deviation between the transform at angle parameter beta and the
// rescale / unit transform / rescale-back route: the right side resamples the
// seed on (beta u, v / beta), dresses at the unit pole, and is read back at
// spectral 1/beta through surface interpolation
double lie_backlund_decomposition_check(const ScalarField& omega, double beta,
                                        double line_angle = 0.0);

}  // namespace cgc
