#include "rls/green_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>

#include "rls/fourier.hpp"

namespace rls {

namespace {

constexpr double kSingularRadius = 1e-12;

void require_off_origin(const Position3& r, const char* op) {
  if (r.norm() < kSingularRadius)
    throw NumericalError("green_kernel",
                         std::string(op) + " is singular at r = 0");
}

// 16-point Gauss-Legendre panel rule for the radial reductions.
const double kGlX[8] = {0.0950125098376374, 0.2816035507792589,
                        0.4580167776572274, 0.6178762444026438,
                        0.7554044083550030, 0.8656312023878318,
                        0.9445750230732326, 0.9894009349916499};
const double kGlW[8] = {0.1894506104550685, 0.1826034150449236,
                        0.1691565193950025, 0.1495959888165767,
                        0.1246289712555339, 0.0951585116824928,
                        0.0622535239386479, 0.0271524594117541};

template <typename F>
Complex panel(F&& f, double a, double b) {
  const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
  Complex s = 0;
  for (int i = 0; i < 8; ++i)
    s += kGlW[i] * (f(c + hw * kGlX[i]) + f(c - hw * kGlX[i]));
  return s * hw;
}

template <typename F>
Complex integrate_panels(F&& f, const std::vector<double>& breakpoints,
                         double width) {
  Complex total = 0;
  for (size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    const double a = breakpoints[k], b = breakpoints[k + 1];
    if (b <= a) continue;
    const int np = std::max(1, static_cast<int>(std::ceil((b - a) / width)));
    const double pw = (b - a) / np;
    for (int p = 0; p < np; ++p) total += panel(f, a + p * pw, a + (p + 1) * pw);
  }
  return total;
}

// profile of the alpha part of Q (real): -sqrt(pi/2) e^{-m s}(m + 1/s)/s
double j2_profile(double s, double m) {
  return -SQRT_PI_OVER_2 * std::exp(-m * s) * (m + 1.0 / s) / s;
}

// int e^{iat} dt and int t^2 e^{iat} dt over [x1, x2]
Complex osc0(Complex a, double x1, double x2) {
  const Complex w = I * a;
  return (std::exp(w * x2) - std::exp(w * x1)) / w;
}
Complex osc2(Complex a, double x1, double x2) {
  const Complex w = I * a;
  auto prim = [&](double t) {
    return std::exp(w * t) * (t * t / w - 2.0 * t / (w * w) + 2.0 / (w * w * w));
  };
  return prim(x2) - prim(x1);
}

// <e^{-mr}/r> over a ball of radius R
double ball_avg_yukawa(double m, double R) {
  if (m <= 0.0) return 1.5 / R;
  return 3.0 / (R * R * R) * (1.0 - std::exp(-m * R) * (1.0 + m * R)) / (m * m);
}
// <e^{iar}/r> over a ball of radius R
Complex ball_avg_osc(Complex a, double R) {
  const Complex w = I * a;
  if (std::abs(a) < 1e-14) return Complex(1.5 / R, 0.0);
  return 3.0 / (R * R * R) * ((std::exp(w * R) * (w * R - 1.0) + 1.0) / (w * w));
}

double equal_volume_ball_radius(double h) {
  return h * std::cbrt(3.0 / (4.0 * PI));
}

}  // namespace

double j1(const Position3& r, const MassCharge& mc) {
  require_off_origin(r, "j1");
  const double s = r.norm();
  return SQRT_PI_OVER_2 * std::exp(-mc.m * s) / s;
}

double j2(const Position3& r, int axis, const MassCharge& mc) {
  require_off_origin(r, "j2");
  if (axis < 0 || axis > 2)
    throw ValidationError("green_kernel", "j2 axis must be 0, 1 or 2");
  const double s = r.norm();
  return j2_profile(s, mc.m) * (r[axis] / s);
}

double m1_on_shell(double lambda, const MassCharge& mc) {
  if (std::abs(lambda) <= mc.m)
    throw NumericalError("green_kernel",
                         "|lambda| <= m: energy inside the mass gap");
  return std::sqrt(lambda * lambda - mc.m * mc.m);
}

Complex m1_complex(Complex mu, const MassCharge& mc) {
  if (!(mu.imag() > 0.0))
    throw ValidationError("green_kernel", "m1_complex requires Im mu > 0");
  Complex w = std::sqrt(mu * mu - mc.m * mc.m);
  if (w.imag() < 0.0) w = -w;
  if (!(w.imag() > 0.0))
    throw NumericalError("green_kernel", "no root with Im m1 > 0");
  return w;
}

double phase_wavenumber(double lambda, Branch branch, const MassCharge& mc) {
  const double m1 = m1_on_shell(lambda, mc);
  const double s = (branch == Branch::plus) ? 1.0 : -1.0;
  return lambda > 0 ? s * m1 : -s * m1;
}

Complex j_pm(const Position3& r, double lambda, Branch branch,
             const MassCharge& mc) {
  require_off_origin(r, "j_pm");
  const double a = phase_wavenumber(lambda, branch, mc);
  const double s = r.norm();
  return SQRT_PI_OVER_2 * std::exp(I * a * s) / s;
}

Complex j_plus_complex(const Position3& r, Complex mu, const MassCharge& mc) {
  require_off_origin(r, "j_plus_complex");
  const Complex a = m1_complex(mu, mc);
  const double s = r.norm();
  return SQRT_PI_OVER_2 * std::exp(I * a * s) / s;
}

Matrix4 q_kernel(const Position3& r, const MassCharge& mc, int alpha_sign) {
  require_off_origin(r, "q_kernel");
  const double s = r.norm();
  Matrix4 out = mc.m * j1(r, mc) * beta_matrix();
  const auto& alpha = alpha_matrices();
  const Complex iw = Complex(0.0, static_cast<double>(alpha_sign));
  for (int k = 0; k < 3; ++k) out += iw * j2(r, k, mc) * alpha[k];
  return out;
}

// ---------------------------------------------------------------------------
// Radial reduction of (Q * J_a)(x).
//
// For radial f and g:      (f*g)(x) = (2pi/r) Int s f(s) [Int_{|r-s|}^{r+s} t g(t) dt] ds
// for f(v) = F(|v|) vhat:  (f*g)(x) = xhat (pi/r^2) Int F(s) [Int (r^2+s^2-t^2) t g(t) dt] ds
// with g(t) = sqrt(pi/2) e^{iat}/t; the inner integrals are elementary.
// ---------------------------------------------------------------------------

ConvQJProfile::ConvQJProfile(const MassCharge& mc, Complex a)
    : mc_(mc), a_(a) {
  if (std::abs(a) < 1e-14)
    throw NumericalError("green_kernel",
                         "conv profile undefined at the mass-gap threshold");
}

Complex ConvQJProfile::scalar(double r) const {
  const double m = mc_.m;
  auto f = [&](double s) {
    return std::exp(-m * s) * SQRT_PI_OVER_2 * osc0(a_, std::abs(r - s), r + s);
  };
  const double s_cut = 45.0 / std::max(m, 0.2);
  std::vector<double> bps{0.0};
  if (r < s_cut) bps.push_back(r);
  bps.push_back(s_cut + r);
  const double width = 0.35 / std::max({1.0, std::abs(a_), m});
  return (2.0 * PI / r) * SQRT_PI_OVER_2 * integrate_panels(f, bps, width);
}

Complex ConvQJProfile::vector(double r) const {
  const double m = mc_.m;
  auto f = [&](double s) {
    const double x1 = std::abs(r - s), x2 = r + s;
    const Complex inner =
        SQRT_PI_OVER_2 * ((r * r + s * s) * osc0(a_, x1, x2) - osc2(a_, x1, x2));
    return j2_profile(s, m) * inner;
  };
  const double s_cut = 45.0 / std::max(m, 0.2);
  std::vector<double> bps{0.0};
  if (r < s_cut) bps.push_back(r);
  bps.push_back(s_cut + r);
  const double width = 0.35 / std::max({1.0, std::abs(a_), m});
  return (PI / (r * r)) * integrate_panels(f, bps, width);
}

Matrix4 ConvQJProfile::eval(const Position3& x, int alpha_sign) const {
  require_off_origin(x, "conv_qj");
  const double r = x.norm();
  Matrix4 out = mc_.m * beta_matrix() * scalar(r);
  const Complex d = vector(r);
  const auto& alpha = alpha_matrices();
  const Complex iw = Complex(0.0, static_cast<double>(alpha_sign));
  for (int k = 0; k < 3; ++k) out += iw * d * (x[k] / r) * alpha[k];
  return out;
}

Complex ConvQJProfile::scalar_cell_average(double h) const {
  const double R = equal_volume_ball_radius(h);
  auto f = [&](double r) { return scalar(r) * r * r; };
  return 3.0 / (R * R * R) * integrate_panels(f, {1e-5, R}, R / 6.0);
}

ConvQJTable::ConvQJTable(const MassCharge& mc, Complex a, double r_max,
                         double dr)
    : profile_(mc, a), r_max_(r_max), dr_(dr) {
  const int n = static_cast<int>(std::ceil(r_max / dr)) + 4;
  s_.resize(n + 1);
  d_.resize(n + 1);
  s_[0] = d_[0] = 0.0;  // placeholder; r=0 is never sampled directly
#pragma omp parallel for schedule(dynamic, 16)
  for (int i = 1; i <= n; ++i) {
    const double r = i * dr_;
    s_[i] = profile_.scalar(r);
    d_[i] = profile_.vector(r);
  }
  // linear continuation into the first bin (S has a mild kink at 0; the
  // diagonal cell never reads it -- ball averages go through the profile)
  s_[0] = 2.0 * s_[1] - s_[2];
  d_[0] = 0.0;
}

Complex ConvQJTable::interp(const std::vector<Complex>& tab, double r) const {
  const double u = r / dr_;
  const int i = static_cast<int>(u);
  if (i + 2 >= static_cast<int>(tab.size()) || r > r_max_ + 2 * dr_)
    throw ValidationError("green_kernel", "conv table radius out of range");
  if (i == 0) {  // linear in the first bin
    const double t = u;
    return (1.0 - t) * tab[0] + t * tab[1];
  }
  // Catmull-Rom cubic
  const double t = u - i;
  const Complex p0 = tab[i - 1], p1 = tab[i], p2 = tab[i + 1], p3 = tab[i + 2];
  return 0.5 * ((2.0 * p1) + (-p0 + p2) * t +
                (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * (t * t) +
                (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * (t * t * t));
}

Complex ConvQJTable::scalar(double r) const { return interp(s_, r); }
Complex ConvQJTable::vector(double r) const { return interp(d_, r); }

Matrix4 ConvQJTable::eval(const Position3& x, int alpha_sign) const {
  require_off_origin(x, "conv_qj");
  const double r = x.norm();
  Matrix4 out = profile_.mc().m * beta_matrix() * scalar(r);
  const Complex d = vector(r);
  const auto& alpha = alpha_matrices();
  const Complex iw = Complex(0.0, static_cast<double>(alpha_sign));
  for (int k = 0; k < 3; ++k) out += iw * d * (x[k] / r) * alpha[k];
  return out;
}

Matrix4 conv_qj(const Position3& r, double lambda, Branch branch,
                const QuadratureSpec& quad, const MassCharge& mc,
                int alpha_sign) {
  (void)quad;
  const Complex a(phase_wavenumber(lambda, branch, mc), 0.0);
  return ConvQJProfile(mc, a).eval(r, alpha_sign);
}

Matrix4 conv_qj_direct(const Position3& r, double lambda, Branch branch,
                       const QuadratureSpec& quad, const MassCharge& mc,
                       int alpha_sign) {
  const Complex a(phase_wavenumber(lambda, branch, mc), 0.0);
  const int n = quad.points;
  const double h = quad.extent / n;
  const double Rc = equal_volume_ball_radius(h);
  Matrix4 acc = Matrix4::Zero();
#pragma omp declare reduction(+: Matrix4: omp_out += omp_in) \
    initializer(omp_priv = Matrix4::Zero())
#pragma omp parallel for collapse(2) reduction(+: acc)
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < n; ++iz) {
        const Position3 v((ix - n / 2) * h, (iy - n / 2) * h, (iz - n / 2) * h);
        const Position3 w = r - v;
        const double rv = v.norm(), rw = w.norm();
        Complex jv;
        Matrix4 qw;
        if (rv < kSingularRadius) {
          jv = (quad.mode == QuadratureSpec::Mode::cell_average)
                   ? SQRT_PI_OVER_2 * ball_avg_osc(a, Rc)
                   : Complex(0.0, 0.0);
        } else {
          jv = SQRT_PI_OVER_2 * std::exp(I * a * rv) / rv;
        }
        if (rw < kSingularRadius) {
          // alpha part averages to zero over the cell
          qw = (quad.mode == QuadratureSpec::Mode::cell_average)
                   ? (mc.m * SQRT_PI_OVER_2 * ball_avg_yukawa(mc.m, Rc) *
                      beta_matrix())
                         .eval()
                   : Matrix4::Zero().eval();
        } else {
          qw = q_kernel(w, mc, alpha_sign);
        }
        acc += qw * jv;
      }
  return acc * (h * h * h);
}

KernelField conv_qj_fft_field(const GridSpec& grid, double lambda,
                              Branch branch, const MassCharge& mc,
                              int alpha_sign) {
  const Complex a(phase_wavenumber(lambda, branch, mc), 0.0);
  const int n = grid.n, N = 2 * n;
  const std::int64_t NT = static_cast<std::int64_t>(N) * N * N;
  const double h = grid.h;
  const double Rc = equal_volume_ball_radius(h);
  Eigen::VectorXcd Q(16 * NT), J(NT);
  auto wrap = [N](int o) { return o <= N / 2 ? o : o - N; };
#pragma omp parallel for collapse(2)
  for (int jx = 0; jx < N; ++jx)
    for (int jy = 0; jy < N; ++jy)
      for (int jz = 0; jz < N; ++jz) {
        const Position3 x(wrap(jx) * h, wrap(jy) * h, wrap(jz) * h);
        const std::int64_t idx =
            (static_cast<std::int64_t>(jx) * N + jy) * N + jz;
        const double r = x.norm();
        if (r < kSingularRadius) {
          Eigen::Map<Matrix4>(Q.data() + 16 * idx) =
              mc.m * SQRT_PI_OVER_2 * ball_avg_yukawa(mc.m, Rc) * beta_matrix();
          J[idx] = SQRT_PI_OVER_2 * ball_avg_osc(a, Rc);
        } else {
          Eigen::Map<Matrix4>(Q.data() + 16 * idx) = q_kernel(x, mc, alpha_sign);
          J[idx] = SQRT_PI_OVER_2 * std::exp(I * a * r) / r;
        }
      }
  fourier::raw_dft(Q.data(), N, 16, -1);
  fourier::raw_dft(J.data(), N, 1, -1);
#pragma omp parallel for
  for (std::int64_t i = 0; i < NT; ++i) Q.segment<16>(16 * i) *= J[i];
  fourier::raw_dft(Q.data(), N, 16, +1);

  KernelField out(grid);
  const double scale = grid.cell_volume() / static_cast<double>(NT);
#pragma omp parallel for collapse(2)
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < n; ++iz) {
        // result read off at wrapped offsets, matching the kernel layout
        const int jx = ix - n / 2, jy = iy - n / 2, jz = iz - n / 2;
        auto unwrap = [N](int d) { return d < 0 ? d + N : d; };
        const std::int64_t src =
            (static_cast<std::int64_t>(unwrap(jx)) * N + unwrap(jy)) * N +
            unwrap(jz);
        out.at(grid.index(ix, iy, iz)) =
            Eigen::Map<const Matrix4>(Q.data() + 16 * src) * scale;
      }
  return out;
}

Matrix4 b_kernel_at(const Position3& r, Complex z, Complex a,
                    const ConvQJProfile& conv, const MassCharge& mc,
                    int alpha_sign) {
  require_off_origin(r, "b_kernel");
  const double s = r.norm();
  Matrix4 out = q_kernel(r, mc, alpha_sign);
  out += INV_TWO_PI_POW_3_2 * z * z * conv.eval(r, alpha_sign);
  out += z * SQRT_PI_OVER_2 * std::exp(I * a * s) / s * Matrix4::Identity();
  return out;
}

Matrix4 b_kernel_at(const Position3& r, Complex z, Complex a,
                    const ConvQJTable& conv, const MassCharge& mc,
                    int alpha_sign) {
  require_off_origin(r, "b_kernel");
  const double s = r.norm();
  Matrix4 out = q_kernel(r, mc, alpha_sign);
  Matrix4 cv = mc.m * beta_matrix() * conv.scalar(s);
  const Complex d = conv.vector(s);
  const auto& alpha = alpha_matrices();
  const Complex iw = Complex(0.0, static_cast<double>(alpha_sign));
  for (int k = 0; k < 3; ++k) cv += iw * d * (r[k] / s) * alpha[k];
  out += INV_TWO_PI_POW_3_2 * z * z * cv;
  out += z * SQRT_PI_OVER_2 * std::exp(I * a * s) / s * Matrix4::Identity();
  return out;
}

Matrix4 b_kernel_cell_average(double h, Complex z, const ConvQJProfile& conv,
                              const MassCharge& mc) {
  const double R = equal_volume_ball_radius(h);
  Matrix4 out =
      mc.m * SQRT_PI_OVER_2 * ball_avg_yukawa(mc.m, R) * beta_matrix();
  out += INV_TWO_PI_POW_3_2 * z * z * mc.m * beta_matrix() *
         conv.scalar_cell_average(h);
  out += z * SQRT_PI_OVER_2 * ball_avg_osc(conv.a(), R) * Matrix4::Identity();
  return out;
}

Matrix4 b_kernel(const Position3& r, double lambda, Branch branch,
                 const QuadratureSpec& quad, const MassCharge& mc,
                 int alpha_sign) {
  (void)quad;
  const Complex a(phase_wavenumber(lambda, branch, mc), 0.0);
  ConvQJProfile conv(mc, a);
  return b_kernel_at(r, Complex(lambda, 0.0), a, conv, mc, alpha_sign);
}

KernelField b_kernel_fft_oracle(const GridSpec& grid, double lambda,
                                double epsilon, Branch branch,
                                const MassCharge& mc, bool subtract_static) {
  if (!(epsilon > 0.0))
    throw ValidationError("green_kernel", "oracle needs epsilon > 0");
  const Complex z =
      Complex(lambda, branch == Branch::plus ? epsilon : -epsilon);
  KernelField field(grid);
  const int n = grid.n;
#pragma omp parallel for collapse(2)
  for (int jx = 0; jx < n; ++jx)
    for (int jy = 0; jy < n; ++jy)
      for (int jz = 0; jz < n; ++jz) {
        const Momentum3 q(fourier::dual_coord(grid, jx),
                          fourier::dual_coord(grid, jy),
                          fourier::dual_coord(grid, jz));
        Matrix4 R = momentum_resolvent(q, z, mc);
        if (subtract_static) R -= h0_inverse(q, mc);
        field.at(grid.index(jx, jy, jz)) = R;
      }
  fourier::centered_transform(field.data.data(), n, 16, -1, grid.dq());
  if (subtract_static) {
#pragma omp parallel for collapse(2)
    for (int ix = 0; ix < n; ++ix)
      for (int iy = 0; iy < n; ++iy)
        for (int iz = 0; iz < n; ++iz) {
          const Position3 r = grid.point(ix, iy, iz);
          if (r.norm() < kSingularRadius) continue;
          field.at(grid.index(ix, iy, iz)) += q_kernel(r, mc, +1);
        }
  }
  return field;
}

KernelField b_kernel_sampled(const GridSpec& grid, double lambda,
                             double epsilon, Branch branch,
                             const MassCharge& mc, int alpha_sign) {
  Complex z, a;
  if (epsilon > 0.0) {
    // off the real axis the decaying root Im a > 0 is the kernel's
    // wavenumber for either half-plane; the two branch limits emerge as
    // epsilon -> 0
    z = Complex(lambda, branch == Branch::plus ? epsilon : -epsilon);
    Complex w = std::sqrt(z * z - mc.m * mc.m);
    if (w.imag() < 0.0) w = -w;
    a = w;
  } else {
    z = Complex(lambda, 0.0);
    a = Complex(phase_wavenumber(lambda, branch, mc), 0.0);
  }
  const double r_max = grid.extent() * std::sqrt(3.0) * 0.5 + 4.0 * grid.h;
  ConvQJTable conv(mc, a, r_max, std::min(0.02, grid.h / 8.0));
  ConvQJProfile profile(mc, a);
  KernelField field(grid);
  const int n = grid.n;
#pragma omp parallel for collapse(2)
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < n; ++iz) {
        const Position3 r = grid.point(ix, iy, iz);
        field.at(grid.index(ix, iy, iz)) =
            (r.norm() < kSingularRadius)
                ? b_kernel_cell_average(grid.h, z, profile, mc)
                : b_kernel_at(r, z, a, conv, mc, alpha_sign);
      }
  return field;
}

SpinorField convolve_matrix_kernel(
    const SpinorField& src,
    const std::function<Matrix4(const Position3&)>& kernel_at, Complex scale) {
  const GridSpec& g = src.grid();
  const int n = g.n, N = 2 * n;
  const std::int64_t NT = static_cast<std::int64_t>(N) * N * N;
  Eigen::VectorXcd K(16 * NT), S(Eigen::VectorXcd::Zero(4 * NT));

  // kernel in wrap order: index o per axis holds the offset
  // delta(o) = (o <= N/2 ? o : o - N) cells. All target-source differences
  // on the n^3 grid fall in (-n, n), so the circular convolution below is
  // the exact linear sum h^3 * sum_s K(r-s) src(s).
  auto wrap = [N](int o) { return o <= N / 2 ? o : o - N; };
#pragma omp parallel for collapse(2)
  for (int jx = 0; jx < N; ++jx)
    for (int jy = 0; jy < N; ++jy)
      for (int jz = 0; jz < N; ++jz) {
        const Position3 x(wrap(jx) * g.h, wrap(jy) * g.h, wrap(jz) * g.h);
        const std::int64_t idx =
            (static_cast<std::int64_t>(jx) * N + jy) * N + jz;
        Eigen::Map<Matrix4>(K.data() + 16 * idx) = kernel_at(x);
      }
#pragma omp parallel for collapse(2)
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < n; ++iz) {
        const std::int64_t dst =
            (static_cast<std::int64_t>(ix) * N + iy) * N + iz;
        S.segment<4>(4 * dst) = src.spinor(g.index(ix, iy, iz));
      }

  fourier::raw_dft(K.data(), N, 16, -1);
  fourier::raw_dft(S.data(), N, 4, -1);
  Eigen::VectorXcd O(4 * NT);
#pragma omp parallel for
  for (std::int64_t i = 0; i < NT; ++i) {
    Eigen::Map<const Matrix4> Km(K.data() + 16 * i);
    O.segment<4>(4 * i) = Km * S.segment<4>(4 * i);
  }
  fourier::raw_dft(O.data(), N, 4, +1);

  const Complex full_scale = scale * g.cell_volume() / static_cast<double>(NT);
  SpinorField out(g);
#pragma omp parallel for collapse(2)
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < n; ++iz) {
        const std::int64_t srci =
            (static_cast<std::int64_t>(ix) * N + iy) * N + iz;
        out.spinor(g.index(ix, iy, iz)) = O.segment<4>(4 * srci) * full_scale;
      }
  return out;
}

SpinorField apply_free_resolvent(const SpinorField& f, Complex mu,
                                 const MassCharge& mc, ResolventPath path) {
  if (!(mu.imag() > 0.0))
    throw ValidationError("green_kernel",
                          "apply_free_resolvent requires Im mu > 0");
  if (path == ResolventPath::spectral) {
    return fourier::apply_multiplier(f, [&](const Momentum3& p) {
      return momentum_resolvent(p, mu, mc);
    });
  }
  const Complex a = m1_complex(mu, mc);
  const GridSpec& g = f.grid();
  const double r_max = g.extent() * std::sqrt(3.0) + 4.0 * g.h;
  ConvQJTable conv(mc, a, r_max, std::min(0.02, g.h / 8.0));
  ConvQJProfile profile(mc, a);
  // operator-resolvent orientation: alpha_sign = -1
  auto kernel = [&](const Position3& x) -> Matrix4 {
    if (x.norm() < kSingularRadius)
      return b_kernel_cell_average(g.h, mu, profile, mc);
    return b_kernel_at(x, mu, a, conv, mc, -1);
  };
  return convolve_matrix_kernel(f, kernel, Complex(INV_TWO_PI_POW_3_2, 0.0));
}

void write_kernel_field_csv(const KernelField& field, const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw ValidationError("green_kernel", "cannot open " + path);
  out << "r1,r2,r3";
  for (int rr = 0; rr < 4; ++rr)
    for (int cc = 0; cc < 4; ++cc)
      out << ",re_" << rr << cc << ",im_" << rr << cc;
  out << "\n";
  out.precision(17);
  const int n = field.grid.n;
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < n; ++iz) {
        const Position3 r = field.grid.point(ix, iy, iz);
        out << r[0] << ',' << r[1] << ',' << r[2];
        Eigen::Map<const Matrix4> M(field.data.data() +
                                    16 * field.grid.index(ix, iy, iz));
        for (int rr = 0; rr < 4; ++rr)
          for (int cc = 0; cc < 4; ++cc)
            out << ',' << M(rr, cc).real() << ',' << M(rr, cc).imag();
        out << "\n";
      }
}

}  // namespace rls
