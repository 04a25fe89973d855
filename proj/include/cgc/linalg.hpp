#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cgc {

using cplx = std::complex<double>;
using CVec3 = Eigen::Vector3cd;
using CMat3 = Eigen::Matrix3cd;

// tolerance tiers: exact algebra / group membership / admissibility threshold
inline constexpr double kTolAlgebra = 1e-12;
inline constexpr double kTolGroup = 1e-10;
inline constexpr double kTolAdmissible = 1e-8;
// lines transported through integrated frames accumulate drift, so the
// constructor check is looser than the algebraic tier
inline constexpr double kTolLine = 1e-6;

struct PoleError : std::domain_error {
  using std::domain_error::domain_error;
};

struct AdmissibilityError : std::runtime_error {
  int node_i = -1;
  int node_j = -1;
  AdmissibilityError(const std::string& what, int i = -1, int j = -1)
      : std::runtime_error(what), node_i(i), node_j(j) {}
};

// complex-bilinear dot product, NOT hermitian
cplx bilinear(const CVec3& u, const CVec3& v);
double hnorm(const CVec3& u);  // hermitian length, residual measurement only
CVec3 cross(const CVec3& u, const CVec3& v);

CMat3 hat(const CVec3& u);
CVec3 vee(const CMat3& m);       // rejects matrices that are not skew
CVec3 vee_part(const CMat3& m);  // vee of the skew part, no check
CMat3 tau(const CMat3& m);       // conjugation by diag(1,-1,-1)
const CMat3& qmat();

// rotation about e1 by a complex angle: block diag(1, [[cos,-sin],[sin,cos]])
CMat3 rot_e1(cplx angle);

// Pade-7 with scaling and squaring, 3x3 complex
CMat3 expm(const CMat3& a);

// null line in C^3 stored by (a,b) with a^2+b^2 = -1/4; generator (1/2, a, b)
struct IsotropicLine {
  cplx a;
  cplx b;
  IsotropicLine(cplx a_, cplx b_);
  CVec3 generator() const { return CVec3(cplx(0.5, 0.0), a, b); }
  IsotropicLine conjugate() const {
    return IsotropicLine(std::conj(a), std::conj(b));
  }
};

struct ProjectorTriple {
  CMat3 piL;
  CMat3 piL0;
  CMat3 piQL;
};

ProjectorTriple projectors(const IsotropicLine& line);

// line spanned by g*v, renormalized to e1-component 1/2; throws
// AdmissibilityError when g*v is too close to the e1-orthogonal plane
IsotropicLine transform_line(const CMat3& g, const IsotropicLine& line,
                             int node_i = -1, int node_j = -1);

}  // namespace cgc
