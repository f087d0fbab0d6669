#include "scatlab/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "scatlab/error.hpp"

namespace scatlab {
namespace {

constexpr double kPi = std::numbers::pi;

// Above this argument J_0, J_1, Y_0, Y_1 come from Hankel's expansion,
// whose smallest term is then below 1e-17.
constexpr double kAsymptoticCrossover = 25.0;
// Above this argument J_n (n < x/2) is built by forward recurrence instead of
// a backward sweep whose length grows with x.
constexpr double kForwardCrossover = 1000.0;

struct JY {
  double j, y;
};

// Hankel's expansion for order nu: J = sqrt(2/(pi x)) (P cos chi - Q sin chi),
// Y = sqrt(2/(pi x)) (P sin chi + Q cos chi), chi = x - (nu/2 + 1/4) pi.
JY asymptotic_jy(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0, q = 0.0;
  double term = 1.0;
  double last = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * (mu - odd * odd) / (k * 8.0 * x);
    if (std::abs(next) > std::abs(last) && k > 2) break;  // divergent tail
    term = next;
    last = next;
    // Term index k contributes to Q for odd k and P for even k with
    // alternating signs within each series.
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      case 0: p += term; break;
    }
    if (std::abs(term) < 1e-17 * std::abs(p)) break;
  }
  const double chi = x - (0.5 * nu + 0.25) * kPi;
  const double amp = std::sqrt(2.0 / (kPi * x));
  const double c = std::cos(chi);
  const double s = std::sin(chi);
  return {amp * (p * c - q * s), amp * (p * s + q * c)};
}

struct MillerResult {
  double jn;  // J_n for the requested order
  double j0, j1;
  double y0, y1;  // from the Neumann series; only meaningful for x > 0
};

// Backward recurrence f_{m-1} = (2m/x) f_m - f_{m+1} from a start index far
// beyond both n and x. Normalization uses J_0 + 2 sum J_2k = 1; the Neumann
// series for Y_0 and Y_1 are accumulated in the same sweep.
MillerResult miller(int n, double x) {
  const double top = std::max(static_cast<double>(n), x);
  int start = static_cast<int>(top + 30.0 + 15.0 * std::cbrt(top));
  if (start % 2 != 0) ++start;

  double f_next = 0.0;
  double f = 1e-30;
  double norm = 0.0;
  double s0 = 0.0;  // sum_{k>=1} (-1)^k f_2k / k
  double s1 = 0.0;  // sum_{k>=1} (-1)^k (f_{2k-1} - f_{2k+1}) / k
  double fn = (start == n) ? f : 0.0;
  double f1 = 0.0;

  auto accumulate = [&](int m, double value) {
    if (m == 0) {
      norm += value;
    } else if (m % 2 == 0) {
      const int k = m / 2;
      norm += 2.0 * value;
      s0 += ((k % 2 == 0) ? 1.0 : -1.0) * value / k;
    } else {
      const int k_lo = (m + 1) / 2;  // appears as f_{2k-1}
      double c = ((k_lo % 2 == 0) ? 1.0 : -1.0) / k_lo;
      if (m >= 3) {
        const int k_hi = (m - 1) / 2;  // appears as -f_{2k+1}
        c -= ((k_hi % 2 == 0) ? 1.0 : -1.0) / k_hi;
      }
      s1 += c * value;
    }
  };

  accumulate(start, f);
  for (int m = start; m > 0; --m) {
    const double f_prev = (2.0 * m / x) * f - f_next;
    f_next = f;
    f = f_prev;
    const int idx = m - 1;
    if (idx == n) fn = f;
    if (idx == 1) f1 = f;
    accumulate(idx, f);
    if (std::abs(f) > 1e250) {
      constexpr double scale = 1e-250;
      f *= scale;
      f_next *= scale;
      norm *= scale;
      s0 *= scale;
      s1 *= scale;
      fn *= scale;
      f1 *= scale;
    }
  }
  const double j0 = f / norm;
  const double j1 = f1 / norm;
  MillerResult r{fn / norm, j0, j1, 0.0, 0.0};
  if (x > 0.0) {
    const double log_term = std::log(0.5 * x) + kEulerGamma;
    r.y0 = (2.0 / kPi) * log_term * j0 - (4.0 / kPi) * (s0 / norm);
    r.y1 = (2.0 / kPi) * log_term * j1 - 2.0 / (kPi * x) * j0 +
           (2.0 / kPi) * (s1 / norm);
  }
  return r;
}

void require_order(int n) {
  if (n < 0) throw DomainError("Bessel order must be nonnegative, got " + std::to_string(n));
}

}  // namespace

BesselPair bessel_01(double x) {
  if (!(x > 0.0)) throw DomainError("bessel_01 requires x > 0");
  if (x >= kAsymptoticCrossover) {
    const JY a = asymptotic_jy(0, x);
    const JY b = asymptotic_jy(1, x);
    return {a.j, b.j, a.y, b.y};
  }
  const MillerResult m = miller(0, x);
  return {m.j0, m.j1, m.y0, m.y1};
}

double bessel_j(int n, double x) {
  require_order(n);
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  if (x < 0.0) {
    const double v = bessel_j(n, -x);
    return (n % 2 == 0) ? v : -v;
  }
  if (x >= kAsymptoticCrossover && n <= 1) return asymptotic_jy(n, x).j;
  if (x > kForwardCrossover && n < x / 2) {
    double jm = asymptotic_jy(0, x).j;
    double j = asymptotic_jy(1, x).j;
    for (int m = 1; m < n; ++m) {
      const double jp = (2.0 * m / x) * j - jm;
      jm = j;
      j = jp;
    }
    return j;
  }
  return miller(n, x).jn;
}

double bessel_y(int n, double x) {
  require_order(n);
  if (!(x > 0.0)) throw DomainError("bessel_y requires x > 0");
  const BesselPair p = bessel_01(x);
  if (n == 0) return p.y0;
  double ym = p.y0;
  double y = p.y1;
  for (int m = 1; m < n; ++m) {
    const double yp = (2.0 * m / x) * y - ym;
    ym = y;
    y = yp;
  }
  if (!std::isfinite(y)) {
    throw DomainError("Y_" + std::to_string(n) + "(" + std::to_string(x) +
                      ") overflows double precision");
  }
  return y;
}

Complex hankel1(int n, double x) {
  require_order(n);
  if (!(x > 0.0)) throw DomainError("hankel1 requires x > 0");
  return {bessel_j(n, x), bessel_y(n, x)};
}

double gamma0() {
  static const double value = [] {
    double lo = 2.0, hi = 3.0;  // J_0(2) > 0 > J_0(3)
    for (;;) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      if (bessel_j(0, mid) > 0.0) lo = mid; else hi = mid;
    }
    return std::abs(bessel_j(0, lo)) < std::abs(bessel_j(0, hi)) ? lo : hi;
  }();
  return value;
}

}  // namespace scatlab
