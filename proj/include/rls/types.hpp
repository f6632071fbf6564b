#ifndef RLS_TYPES_HPP
#define RLS_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace rls {

using Complex = std::complex<double>;
using Matrix4 = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;
using Momentum3 = Eigen::Vector3d;
using Position3 = Eigen::Vector3d;

inline constexpr Complex I{0.0, 1.0};
inline constexpr double PI = 3.141592653589793238462643383279502884;
// sqrt(pi/2), the prefactor shared by all closed-form kernels
inline const double SQRT_PI_OVER_2 = std::sqrt(PI / 2.0);
inline const double TWO_PI_POW_3_2 = std::pow(2.0 * PI, 1.5);
inline const double INV_TWO_PI_POW_3_2 = 1.0 / TWO_PI_POW_3_2;

// Validation failures: bad configs, violated preconditions. CLI exit code 2.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(const std::string& module, const std::string& what)
      : std::runtime_error("[" + module + "] " + what) {}
};

// Numerical failures: singular systems, non-convergence, poles. CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& module, const std::string& what)
      : std::runtime_error("[" + module + "] " + what) {}
};

// Rest mass and coupling constant, natural units hbar = c = 1.
// (-e_charge) is the electron charge; m and |q| share units of mass.
struct MassCharge {
  double m = 1.0;
  double e_charge = 1.0;

  MassCharge() = default;
  MassCharge(double mass, double e) : m(mass), e_charge(e) {
    if (!(mass >= 0.0) || !std::isfinite(mass))
      throw ValidationError("dirac_algebra", "mass must be finite and >= 0");
    if (!std::isfinite(e))
      throw ValidationError("dirac_algebra", "charge must be finite");
  }
};

}  // namespace rls

#endif  // RLS_TYPES_HPP
