#ifndef RLS_DIRAC_ALGEBRA_HPP
#define RLS_DIRAC_ALGEBRA_HPP

#include <array>

#include "rls/types.hpp"

namespace rls {

// Exact matrix algebra of the free Dirac operator in momentum space.
//
// The 4x4 Hamiltonian symbol is
//     H0(q) = m*beta + q1*alpha1 + q2*alpha2 + q3*alpha3,
// with the alpha_k built from Pauli blocks,
//     alpha_k = [[0, sigma_k], [sigma_k, 0]],   beta = diag(1,1,-1,-1).
// It satisfies H0(q)^2 = (m^2 + |q|^2) I4, so its spectrum is the two
// double eigenvalues +-sqrt(m^2 + |q|^2).

const std::array<Matrix4, 3>& alpha_matrices();
const Matrix4& beta_matrix();

Matrix4 h0(const Momentum3& q, const MassCharge& mc);

// H0^{-1}(q) = H0(q) / (m^2 + |q|^2). Throws for m = 0, q = 0.
Matrix4 h0_inverse(const Momentum3& q, const MassCharge& mc);

// (H0(q) - z)^{-1} = (H0(q) + z) / (m^2 + |q|^2 - z^2), assembled through
// the rational identity in H0^{-1}. Throws when z^2 hits m^2 + |q|^2.
Matrix4 momentum_resolvent(const Momentum3& q, Complex z, const MassCharge& mc);

// Analytic eigensystem of H0(q).
//
// lambda[0] = lambda[1] = -sqrt(m^2+|q|^2), lambda[2] = lambda[3] = +sqrt(...).
// Eigenvectors default to the closed rational forms
//   g1 = ((-q1+i q2)/(m+s), q3/(m+s), 0, 1),   g2 = (-q3/(m+s), (-q1-i q2)/(m+s), 1, 0),
//   g3, g4 = same with (m-s) denominators,     s = sqrt(m^2+|q|^2),
// which are mutually orthogonal but not unit length. The g3/g4 denominators
// vanish as q -> 0; below |q| < 1e-10*m the exact eigenvectors of m*beta are
// substituted (g1 -> e4, g2 -> e3, g3 -> e1, g4 -> e2, the q -> 0 limits).
struct SpectralData {
  std::array<double, 4> lambda;
  std::array<Vector4c, 4> g;
  bool normalized = false;
};

SpectralData eigen_h0(const Momentum3& q, const MassCharge& mc,
                      bool normalize = false);

// Convenience: the single paper-form channel vector g_n(k), n in 1..4.
Vector4c channel_vector(const Momentum3& k, int n, const MassCharge& mc);

// Channel-to-energy binding: n in {1,2} ride the negative branch,
// n in {3,4} the positive one.
double channel_energy(const Momentum3& k, int n, const MassCharge& mc);

}  // namespace rls

#endif  // RLS_DIRAC_ALGEBRA_HPP
