#include "rls/fourier.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace rls {
namespace fourier {

namespace {

// Plan cache. Plans are created FFTW_ESTIMATE | FFTW_UNALIGNED so they can be
// executed on any buffer via fftw_execute_dft; creation is serialized.
class PlanCache {
 public:
  fftw_plan get(int n, int ncomp, int fftw_sign) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_tuple(n, ncomp, fftw_sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;

    const std::int64_t npts = static_cast<std::int64_t>(n) * n * n;
    std::vector<Complex> scratch(npts * ncomp);
    int dims[3] = {n, n, n};
    fftw_plan p = fftw_plan_many_dft(
        3, dims, ncomp, reinterpret_cast<fftw_complex*>(scratch.data()),
        nullptr, ncomp, 1, reinterpret_cast<fftw_complex*>(scratch.data()),
        nullptr, ncomp, 1, fftw_sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, p);
    return p;
  }

 private:
  std::mutex mu_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

// (-1)^{ix+iy+iz} twist over all sites, all components.
void apply_parity_twist(Complex* data, int n, int ncomp) {
#pragma omp parallel for collapse(2)
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy) {
      const std::int64_t base = (static_cast<std::int64_t>(ix) * n + iy) * n;
      for (int iz = 0; iz < n; ++iz) {
        if ((ix + iy + iz) & 1) {
          Complex* p = data + (base + iz) * ncomp;
          for (int c = 0; c < ncomp; ++c) p[c] = -p[c];
        }
      }
    }
}

}  // namespace

void centered_transform(Complex* data, int n, int ncomp, int sign,
                        double h_in) {
  if (n % 2 != 0)
    throw ValidationError("fourier", "centered transform needs even n");
  if (sign != 1 && sign != -1)
    throw ValidationError("fourier", "sign must be +-1");

  // Centered lattices reduce to the plain DFT after (-1)^index twists on
  // both sides, plus a global sign (-1)^{n/2} per axis:
  //   exp(s*2*pi*i*(j-n/2)(i-n/2)/n)
  //     = exp(s*2*pi*i*ij/n) * (-1)^i * (-1)^j * exp(s*pi*i*n/2).
  const double axis_sign = (n / 2) % 2 == 0 ? 1.0 : -1.0;
  const double global_sign = axis_sign;  // cubed = itself for a sign
  const double scale =
      global_sign * INV_TWO_PI_POW_3_2 * h_in * h_in * h_in;

  apply_parity_twist(data, n, ncomp);
  fftw_plan plan =
      plan_cache().get(n, ncomp, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(data),
                   reinterpret_cast<fftw_complex*>(data));
  apply_parity_twist(data, n, ncomp);

  const std::int64_t total = static_cast<std::int64_t>(n) * n * n * ncomp;
#pragma omp parallel for
  for (std::int64_t i = 0; i < total; ++i) data[i] *= scale;
}

void raw_dft(Complex* data, int n, int ncomp, int sign) {
  fftw_plan plan =
      plan_cache().get(n, ncomp, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(data),
                   reinterpret_cast<fftw_complex*>(data));
}

SpinorField to_momentum(const SpinorField& f) {
  if (f.grid().origin != Position3::Zero())
    throw ValidationError("fourier",
                          "momentum representation requires origin = 0");
  SpinorField out = f;
  centered_transform(out.data().data(), f.grid().n, 4, -1, f.grid().h);
  return out;
}

SpinorField to_position(const SpinorField& phat, const GridSpec& grid) {
  SpinorField out = phat;
  centered_transform(out.data().data(), grid.n, 4, +1, grid.dq());
  return out;
}

}  // namespace fourier
}  // namespace rls
