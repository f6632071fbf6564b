#include "rls/dirac_algebra.hpp"

#include <cmath>

namespace rls {

namespace {

std::array<Matrix4, 3> build_alpha() {
  Eigen::Matrix2cd s1, s2, s3;
  s1 << 0, 1, 1, 0;
  s2 << 0, -I, I, 0;
  s3 << 1, 0, 0, -1;
  std::array<Eigen::Matrix2cd, 3> sigma = {s1, s2, s3};
  std::array<Matrix4, 3> a;
  for (int k = 0; k < 3; ++k) {
    a[k].setZero();
    a[k].block<2, 2>(0, 2) = sigma[k];
    a[k].block<2, 2>(2, 0) = sigma[k];
  }
  return a;
}

Matrix4 build_beta() {
  Matrix4 b = Matrix4::Zero();
  b(0, 0) = 1.0;
  b(1, 1) = 1.0;
  b(2, 2) = -1.0;
  b(3, 3) = -1.0;
  return b;
}

}  // namespace

const std::array<Matrix4, 3>& alpha_matrices() {
  static const std::array<Matrix4, 3> a = build_alpha();
  return a;
}

const Matrix4& beta_matrix() {
  static const Matrix4 b = build_beta();
  return b;
}

Matrix4 h0(const Momentum3& q, const MassCharge& mc) {
  const auto& a = alpha_matrices();
  Matrix4 h = mc.m * beta_matrix();
  for (int k = 0; k < 3; ++k) h += q[k] * a[k];
  return h;
}

Matrix4 h0_inverse(const Momentum3& q, const MassCharge& mc) {
  const double s2 = mc.m * mc.m + q.squaredNorm();
  if (s2 <= 0.0)
    throw NumericalError("dirac_algebra",
                         "h0_inverse undefined at m = 0, q = 0");
  return h0(q, mc) / s2;
}

Matrix4 momentum_resolvent(const Momentum3& q, Complex z,
                           const MassCharge& mc) {
  const double lam1_sq = mc.m * mc.m + q.squaredNorm();
  const Complex denom = lam1_sq - z * z;
  if (std::abs(denom) == 0.0)
    throw NumericalError("dirac_algebra",
                         "resolvent pole: z^2 = m^2 + |q|^2");
  const Matrix4 hinv = h0_inverse(q, mc);
  return hinv + hinv * (z * z / denom) + (z / denom) * Matrix4::Identity();
}

SpectralData eigen_h0(const Momentum3& q, const MassCharge& mc,
                      bool normalize) {
  SpectralData out;
  const double s = std::sqrt(mc.m * mc.m + q.squaredNorm());
  out.lambda = {-s, -s, s, s};

  const double qn = q.norm();
  if (qn < 1e-10 * mc.m || (mc.m == 0.0 && qn == 0.0)) {
    // q = 0 limit: eigenvectors of m*beta, ordered to match the limits of
    // the rational forms.
    out.g[0] = Vector4c::Unit(3);
    out.g[1] = Vector4c::Unit(2);
    out.g[2] = Vector4c::Unit(0);
    out.g[3] = Vector4c::Unit(1);
  } else {
    const Complex qp(q[0], q[1]);   // q1 + i q2
    const double dm = mc.m + s;
    const double dp = mc.m - s;     // nonzero for |q| above the threshold
    out.g[0] << -std::conj(qp) / dm, q[2] / dm, 0.0, 1.0;
    out.g[1] << -q[2] / dm, -qp / dm, 1.0, 0.0;
    out.g[2] << -std::conj(qp) / dp, q[2] / dp, 0.0, 1.0;
    out.g[3] << -q[2] / dp, -qp / dp, 1.0, 0.0;
  }

  if (normalize) {
    for (auto& v : out.g) v.normalize();
    out.normalized = true;
  }
  return out;
}

Vector4c channel_vector(const Momentum3& k, int n, const MassCharge& mc) {
  if (n < 1 || n > 4)
    throw ValidationError("dirac_algebra", "channel index n must be in 1..4");
  return eigen_h0(k, mc).g[n - 1];
}

double channel_energy(const Momentum3& k, int n, const MassCharge& mc) {
  if (n < 1 || n > 4)
    throw ValidationError("dirac_algebra", "channel index n must be in 1..4");
  const double s = std::sqrt(mc.m * mc.m + k.squaredNorm());
  return (n <= 2) ? -s : s;
}

}  // namespace rls
