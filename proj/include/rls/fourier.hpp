#ifndef RLS_FOURIER_HPP
#define RLS_FOURIER_HPP

#include <Eigen/Dense>

#include "rls/grid.hpp"
#include "rls/types.hpp"

namespace rls {
namespace fourier {

// Audited discrete-transform chokepoint. Every Fourier transform in the
// library goes through centered_transform; no other code touches FFTW.
//
// Both lattices are centered: input points x_i = (i - n/2)*h_in, output
// points u_j = (j - n/2)*h_out with h_out = 2*pi/(n*h_in). The transform is
//
//   OUT(j) = (2*pi)^{-3/2} * h_in^3 * sum_i exp(sign * i * u_j . x_i) IN(i),
//
// the symmetric-normalization Riemann sum of the continuum integral.
// Composing sign=-1 then sign=+1 (or vice versa) is the exact identity.
//
// Convention ledger:
//  * operator calculus (momentum representation of fields) uses sign=-1
//    forward, sign=+1 inverse, so a plane wave e^{ikr} sits at u = +k and
//    the free Dirac operator m*beta + alpha.p acts as H0(p) multiplication;
//  * the resolvent-kernel transforms B(r) = (2pi)^{-3/2} Int e^{-iqr} R(q) dq
//    reuse the same sign=-1 path on momentum-sampled data.
//
// ncomp interleaved components per lattice site (4 for spinors, 16 for 4x4
// matrix fields) are transformed together.
void centered_transform(Complex* data, int n, int ncomp, int sign,
                        double h_in);

// Momentum representation of a spinor field: utilde(p), p on the centered
// dual lattice of f.grid() (spacing f.grid().dq()). Requires origin = 0.
SpinorField to_momentum(const SpinorField& f);

// Inverse of to_momentum; `grid` is the position-space grid.
SpinorField to_position(const SpinorField& phat, const GridSpec& grid);

// The dual-lattice coordinate of index j (centered convention).
inline double dual_coord(const GridSpec& g, int j) {
  return (j - g.n / 2) * g.dq();
}

// Unnormalized plain DFT (FFTW semantics, kernel e^{-+2*pi*i*jk/n} for
// sign=-+1), for convolution plumbing that does its own bookkeeping.
void raw_dft(Complex* data, int n, int ncomp, int sign);

// Applies the free Dirac operator through the momentum representation:
// out = F^{-1}[ M(p) F f ] for a caller-supplied 4x4 multiplier M(p).
template <typename MultiplierFn>
SpinorField apply_multiplier(const SpinorField& f, MultiplierFn&& mult) {
  SpinorField phat = to_momentum(f);
  const GridSpec& g = f.grid();
  const int n = g.n;
#pragma omp parallel for collapse(2)
  for (int jx = 0; jx < n; ++jx)
    for (int jy = 0; jy < n; ++jy)
      for (int jz = 0; jz < n; ++jz) {
        const Momentum3 p(dual_coord(g, jx), dual_coord(g, jy),
                          dual_coord(g, jz));
        auto s = phat.spinor(g.index(jx, jy, jz));
        s = (mult(p) * s).eval();
      }
  return to_position(phat, g);
}

}  // namespace fourier
}  // namespace rls

#endif  // RLS_FOURIER_HPP
