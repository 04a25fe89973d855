#pragma once

#include <utility>

#include "cgc/framing.hpp"

namespace cgc {

// rational loop with one pole pair: c piL + piL0 + c^-1 piQL, c = (a-l)/(a+l)
struct SimpleFactor {
  cplx alpha;
  IsotropicLine line;
  SimpleFactor(cplx a, const IsotropicLine& l);
};

CMat3 eval_simple_factor(const SimpleFactor& f, cplx lambda);
CMat3 p_infinity(const SimpleFactor& f);  // 2 piL0 - I, an involution
// p(inf) p(lambda): the variant normalized at infinity instead of zero
CMat3 eval_q_factor(const SimpleFactor& f, cplx lambda);

// coefficient in p^-1 dp/dlambda = A (piQL - piL)
cplx pole_coefficient(cplx alpha, cplx lambda);

// partner under g(lambda) -> conj(g(1 / conj lambda))
SimpleFactor real_partner(const SimpleFactor& f);

// line moved to each grid node by the inverse of the pole frame
struct DressingField {
  SimpleFactor factor;
  Grid grid;
  std::vector<IsotropicLine> lines;
  const IsotropicLine& at(int i, int j) const { return lines[grid.idx(i, j)]; }
};

DressingField dressed_lines(const FrameField& pole_frame,
                            const SimpleFactor& f);

// p_{alpha, L(i,j)}(lambda)
CMat3 local_factor(const DressingField& d, cplx lambda, int i, int j);

FrameField dress_frame(const FrameField& base, const DressingField& d);

// surface and normal of the dressed frame, with the constant outer
// rotation and translation stripped off
SurfaceField dressed_surface(const ScalarField& omega, const SimpleFactor& f,
                             cplx lambda, double dlam = 1e-4);
SurfaceField dressed_normal(const ScalarField& omega, const SimpleFactor& f,
                            cplx lambda);

struct BBParams {
  cplx beta;    // log of pole over spectral point
  cplx theta0;  // basepoint angle of the induced classical transform
};
BBParams bb_params(const SimpleFactor& f, cplx lambda);

// factors pushed through each other: first component keeps the pole of f1
std::pair<SimpleFactor, SimpleFactor> exchange_factors(const SimpleFactor& f1,
                                                       const SimpleFactor& f2);
// sup over samples of |p_{f2'} p_{f1} - p_{f1'} p_{f2}|
double permutability_defect(const SimpleFactor& f1, const SimpleFactor& f2,
                            const std::vector<cplx>& samples);

// solves k^-1 conj(k) = P inside the rotations about the first axis
CMat3 find_k(const CMat3& P);

// factor pair fixed by the real form up to the rotation k
struct RealPair {
  SimpleFactor f1, f2, f2x;  // f2 = partner of f1, f2x = f2 pushed past f1
  CMat3 k;
};
RealPair real_pair(const SimpleFactor& f1);
CMat3 eval_real_dressing(const RealPair& rp, cplx lambda);  // k p_{f2x} p_{f1}

// iterated dressing by f1 then f2-pushed-through, with optional reality
// normalizer k for a partner pair
struct TwoStepData {
  SimpleFactor f1, f2, f2x;
  DressingField d1, d2x;
  CMat3 k;
};
TwoStepData two_step_data(const ScalarField& omega, const SimpleFactor& f1,
                          const SimpleFactor& f2, bool with_k);
FrameField two_step_frame(const ScalarField& omega, const TwoStepData& td,
                          cplx lambda);
SurfaceField two_step_surface(const ScalarField& omega, const TwoStepData& td,
                              cplx lambda, double dlam = 1e-4);
SurfaceField two_step_normal(const ScalarField& omega, const TwoStepData& td,
                             cplx lambda);

}  // namespace cgc
