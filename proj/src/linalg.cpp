#include "cgc/linalg.hpp"

#include <cmath>

namespace cgc {

cplx bilinear(const CVec3& u, const CVec3& v) {
  return u(0) * v(0) + u(1) * v(1) + u(2) * v(2);
}

double hnorm(const CVec3& u) { return u.norm(); }

CVec3 cross(const CVec3& u, const CVec3& v) {
  return CVec3(u(1) * v(2) - u(2) * v(1), u(2) * v(0) - u(0) * v(2),
               u(0) * v(1) - u(1) * v(0));
}

CMat3 hat(const CVec3& u) {
  CMat3 m;
  m << 0.0, -u(2), u(1), u(2), 0.0, -u(0), -u(1), u(0), 0.0;
  return m;
}

CVec3 vee_part(const CMat3& m) {
  return CVec3(0.5 * (m(2, 1) - m(1, 2)), 0.5 * (m(0, 2) - m(2, 0)),
               0.5 * (m(1, 0) - m(0, 1)));
}

CVec3 vee(const CMat3& m) {
  double skew_dev = (m + m.transpose()).norm();
  if (!(skew_dev < kTolGroup * (1.0 + m.norm())))
    throw std::domain_error("vee: matrix is not skew-symmetric, deviation " +
                            std::to_string(skew_dev));
  return vee_part(m);
}

const CMat3& qmat() {
  static const CMat3 q = (CMat3() << 1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0,
                          -1.0)
                             .finished();
  return q;
}

CMat3 tau(const CMat3& m) { return qmat() * m * qmat(); }

CMat3 rot_e1(cplx angle) {
  cplx c = std::cos(angle), s = std::sin(angle);
  CMat3 m = CMat3::Identity();
  m(1, 1) = c;
  m(1, 2) = -s;
  m(2, 1) = s;
  m(2, 2) = c;
  return m;
}

CMat3 expm(const CMat3& a) {
  if (!a.allFinite()) throw std::domain_error("expm: non-finite input");
  // coefficients of the [7/7] Pade numerator
  static const double c[8] = {1.0,
                              1.0 / 2.0,
                              3.0 / 26.0,
                              5.0 / 312.0,
                              5.0 / 3432.0,
                              1.0 / 11440.0,
                              1.0 / 308880.0,
                              1.0 / 17297280.0};
  double n = a.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  if (n > 0.5) {
    s = static_cast<int>(std::ceil(std::log2(n / 0.5)));
    if (s > 64) throw std::range_error("expm: matrix norm too large");
  }
  CMat3 x = a / std::ldexp(1.0, s);
  CMat3 x2 = x * x;
  CMat3 x4 = x2 * x2;
  CMat3 x6 = x4 * x2;
  CMat3 id = CMat3::Identity();
  CMat3 odd = x * (c[1] * id + c[3] * x2 + c[5] * x4 + c[7] * x6);
  CMat3 even = c[0] * id + c[2] * x2 + c[4] * x4 + c[6] * x6;
  CMat3 r = (even - odd).partialPivLu().solve(even + odd);
  for (int k = 0; k < s; ++k) r = r * r;
  return r;
}

IsotropicLine::IsotropicLine(cplx a_, cplx b_) : a(a_), b(b_) {
  cplx constraint = a * a + b * b + cplx(0.25, 0.0);
  if (!(std::abs(constraint) < kTolLine))
    throw std::domain_error("IsotropicLine: a^2+b^2 != -1/4, deviation " +
                            std::to_string(std::abs(constraint)));
}

ProjectorTriple projectors(const IsotropicLine& line) {
  CVec3 v = line.generator();
  CVec3 qv = qmat() * v;
  CVec3 w = cross(v, qv);
  ProjectorTriple t;
  t.piL = 2.0 * v * qv.transpose();
  t.piQL = 2.0 * qv * v.transpose();
  t.piL0 = -4.0 * w * w.transpose();
  return t;
}

IsotropicLine transform_line(const CMat3& g, const IsotropicLine& line,
                             int node_i, int node_j) {
  CVec3 gv = g * line.generator();
  double scale = hnorm(gv);
  if (!(std::abs(gv(0)) >= kTolAdmissible * scale))
    throw AdmissibilityError(
        "transform_line: image line lies in the e1-orthogonal plane", node_i,
        node_j);
  cplx d = 2.0 * gv(0);
  return IsotropicLine(gv(1) / d, gv(2) / d);
}

}  // namespace cgc
