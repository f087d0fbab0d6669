#ifndef SCATLAB_SPECFUN_HPP
#define SCATLAB_SPECFUN_HPP

#include <complex>

namespace scatlab {

using Complex = std::complex<double>;

/// Euler-Mascheroni constant.
inline constexpr double kEulerGamma = 0.57721566490153286060651209;

/// Bessel function of the first kind J_n(x) for integer order n >= 0.
///
/// Backward (Miller) recurrence normalized by J_0 + 2*sum J_2k = 1 for
/// moderate arguments, Hankel's asymptotic expansion beyond. Accurate to
/// about 1e-14 for n <= 60, |x| <= 200. Negative x uses the parity relation.
double bessel_j(int n, double x);

/// Bessel function of the second kind Y_n(x), x > 0.
/// Throws DomainError for x <= 0 and when the value overflows a double.
double bessel_y(int n, double x);

/// Hankel function of the first kind H^(1)_n(x) = J_n(x) + i Y_n(x), x > 0.
Complex hankel1(int n, double x);

/// J_0, J_1, Y_0, Y_1 at one argument, computed from a single recurrence
/// sweep. The boundary integral assembly needs all four per kernel entry.
struct BesselPair {
  double j0, j1, y0, y1;
};
BesselPair bessel_01(double x);

/// Smallest positive zero of J_0, found by bisection on [2, 3] once and
/// cached.
double gamma0();

}  // namespace scatlab

#endif  // SCATLAB_SPECFUN_HPP
