#ifndef RLS_GREEN_KERNEL_HPP
#define RLS_GREEN_KERNEL_HPP

#include <functional>
#include <string>
#include <vector>

#include "rls/dirac_algebra.hpp"
#include "rls/grid.hpp"
#include "rls/types.hpp"

namespace rls {

// Closed-form free Dirac Green's kernels and the free resolvent as an
// integral operator.
//
// Building blocks (natural units, s = |r|):
//   J1(r)        = sqrt(pi/2) e^{-m s} / s
//   J2 profile   = -sqrt(pi/2) e^{-m s} (m + 1/s) / s      (times r_k/s)
//   J_a(r)       = sqrt(pi/2) e^{i a s} / s                (a = phase wavenumber)
//   Q(r)         = m J1(s) beta + i * J2prof(s) (rhat . alpha)
//   B(r)         = Q(r) + (2pi)^{-3/2} z^2 (Q * J_a)(r) + z J_a(r)
//
// Convention ledger (frozen against the transform oracle):
//  * Q above is the e^{-iqr} transform of H0^{-1}(q); the alpha term carries
//    the factor i that the transform of q_k/(m^2+|q|^2) produces. Flipping
//    alpha_sign to -1 reflects r -> -r and yields the integral kernel of the
//    operator resolvent of m*beta + alpha.p, which is what the scattering
//    solver convolves with.
//  * The convolution term carries (2pi)^{-3/2}, the constant the symmetric
//    transform pair assigns to F^{-1}[FG] = (2pi)^{-3/2} f*g.
//  * Phase wavenumber a: lambda > m gives a = +-m1 for branch +-;
//    lambda < -m swaps the signs; complex mu takes Im a > 0.

enum class Branch { plus, minus };

struct QuadratureSpec {
  double extent = 16.0;  // integration box edge length
  int points = 48;       // points per axis
  enum class Mode { cell_average, subtraction } mode = Mode::cell_average;

  QuadratureSpec() = default;
  QuadratureSpec(double extent_, int points_, Mode mode_ = Mode::cell_average)
      : extent(extent_), points(points_), mode(mode_) {
    if (points < 8)
      throw ValidationError("green_kernel", "quadrature needs >= 8 points per axis");
    if (!(extent > 0.0))
      throw ValidationError("green_kernel", "quadrature extent must be > 0");
  }
};

// 4x4-matrix-valued field sampled on a grid (16 interleaved components,
// column-major within each block).
struct KernelField {
  GridSpec grid;
  Eigen::VectorXcd data;  // 16 * points

  explicit KernelField(const GridSpec& g)
      : grid(g), data(Eigen::VectorXcd::Zero(16 * g.points())) {}
  Eigen::Map<Matrix4> at(std::int64_t idx) {
    return Eigen::Map<Matrix4>(data.data() + 16 * idx);
  }
  Eigen::Map<const Matrix4> at(std::int64_t idx) const {
    return Eigen::Map<const Matrix4>(data.data() + 16 * idx);
  }
};

double j1(const Position3& r, const MassCharge& mc);
// The real profile d J1 / d r_k; the kernel assembly multiplies it by i.
double j2(const Position3& r, int axis, const MassCharge& mc);

// sqrt(lambda^2 - m^2) > 0; throws for |lambda| <= m.
double m1_on_shell(double lambda, const MassCharge& mc);
// Root of mu^2 - m^2 with positive imaginary part; requires Im mu > 0.
Complex m1_complex(Complex mu, const MassCharge& mc);
// Signed wavenumber a in J(r) = sqrt(pi/2) e^{i a |r|}/|r|.
double phase_wavenumber(double lambda, Branch branch, const MassCharge& mc);

Complex j_pm(const Position3& r, double lambda, Branch branch,
             const MassCharge& mc);
Complex j_plus_complex(const Position3& r, Complex mu, const MassCharge& mc);

Matrix4 q_kernel(const Position3& r, const MassCharge& mc, int alpha_sign = +1);

// Radial profiles of the convolution (Q * J_a)(x), reduced to 1D integrals:
//   (Q * J_a)(x) = m beta S(|x|) + alpha_sign * i * D(|x|) (xhat . alpha).
// Values are exact up to the 1D quadrature (~1e-9), valid at any radius.
class ConvQJProfile {
 public:
  ConvQJProfile(const MassCharge& mc, Complex a);

  Complex scalar(double r) const;  // S
  Complex vector(double r) const;  // D
  Matrix4 eval(const Position3& x, int alpha_sign) const;
  // mean of S over the equal-volume ball of a cell with spacing h
  Complex scalar_cell_average(double h) const;
  Complex a() const { return a_; }
  const MassCharge& mc() const { return mc_; }

 private:
  MassCharge mc_;
  Complex a_;
};

// Tabulated wrapper: precomputes S and D on a uniform radial grid and
// interpolates (cubic). Build once per (m, a); eval is cheap.
class ConvQJTable {
 public:
  ConvQJTable(const MassCharge& mc, Complex a, double r_max,
              double dr = 0.02);

  Complex scalar(double r) const;
  Complex vector(double r) const;
  Matrix4 eval(const Position3& x, int alpha_sign) const;
  double r_max() const { return r_max_; }
  const ConvQJProfile& profile() const { return profile_; }

 private:
  Complex interp(const std::vector<Complex>& tab, double r) const;
  ConvQJProfile profile_;
  double r_max_, dr_;
  std::vector<Complex> s_, d_;
};

// Spec-level convolution entry point; the quadrature spec selects the
// direct tensor-product path used as an oracle. The default path is the
// exact radial reduction.
Matrix4 conv_qj(const Position3& r, double lambda, Branch branch,
                const QuadratureSpec& quad, const MassCharge& mc,
                int alpha_sign = +1);
Matrix4 conv_qj_direct(const Position3& r, double lambda, Branch branch,
                       const QuadratureSpec& quad, const MassCharge& mc,
                       int alpha_sign = +1);

// (Q * J_a) sampled on a grid by momentum-space product (zero-padded linear
// convolution of the sampled factors). Cross-check for the radial reduction.
KernelField conv_qj_fft_field(const GridSpec& grid, double lambda,
                              Branch branch, const MassCharge& mc,
                              int alpha_sign = +1);

// Full closed-form kernel at real lambda (boundary value) or complex mu.
// `conv` must have been built with the matching phase wavenumber.
Matrix4 b_kernel(const Position3& r, double lambda, Branch branch,
                 const QuadratureSpec& quad, const MassCharge& mc,
                 int alpha_sign = +1);
Matrix4 b_kernel_at(const Position3& r, Complex z, Complex a,
                    const ConvQJProfile& conv, const MassCharge& mc,
                    int alpha_sign);
Matrix4 b_kernel_at(const Position3& r, Complex z, Complex a,
                    const ConvQJTable& conv, const MassCharge& mc,
                    int alpha_sign);
// Equal-volume-ball average over the diagonal cell (alpha parts vanish).
Matrix4 b_kernel_cell_average(double h, Complex z, const ConvQJProfile& conv,
                              const MassCharge& mc);

// Discrete inverse transform (kernel e^{-iqr}, factor (2pi)^{-3/2}) of
// momentum_resolvent(q, lambda +- i eps) sampled on the dual lattice.
// subtract_static transforms R(q,z) - H0^{-1}(q) and adds Q(r) back
// analytically, removing the Gibbs ringing of the slowly decaying static
// symbol; the raw estimator is kept for diagnostics.
KernelField b_kernel_fft_oracle(const GridSpec& grid, double lambda,
                                double epsilon, Branch branch,
                                const MassCharge& mc,
                                bool subtract_static = true);

// Closed-form B sampled on the same lattice (alpha_sign selectable),
// diagonal cell ball-averaged. z = lambda + i*eps branch-signed when eps>0.
KernelField b_kernel_sampled(const GridSpec& grid, double lambda,
                             double epsilon, Branch branch,
                             const MassCharge& mc, int alpha_sign);

// (L0 - mu)^{-1} f for L0 = m beta + alpha.p, Im mu > 0.
// Path::convolution convolves with (2pi)^{-3/2} B(., mu) on a zero-padded
// grid (the operational statement of the resolvent kernel); Path::spectral
// divides by H0(p) - mu in the momentum representation.
enum class ResolventPath { convolution, spectral };
SpinorField apply_free_resolvent(const SpinorField& f, Complex mu,
                                 const MassCharge& mc,
                                 ResolventPath path = ResolventPath::convolution);

// Linear convolution out(r) = scale * h^3 sum_s K(r-s) src(s) with the
// kernel supplied at lattice differences; exact for all target/source pairs
// on the grid (2x zero padding).
SpinorField convolve_matrix_kernel(
    const SpinorField& src,
    const std::function<Matrix4(const Position3&)>& kernel_at, Complex scale);

// CSV export of a sampled kernel field: r1,r2,r3 then Re/Im of 16 entries.
void write_kernel_field_csv(const KernelField& field, const std::string& path);

}  // namespace rls

#endif  // RLS_GREEN_KERNEL_HPP
