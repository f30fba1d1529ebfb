#pragma once

// Reference values computed at 40 digits with mpmath, plus quadrature helpers
// built on Boost.Math. Nothing in here calls into the library.

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace oracle {

inline constexpr double kBetaHalf = 0.549306144334054845697622618461;
inline constexpr double kBeta1Half = 4.0 / 3.0;
inline constexpr double kBeta2Half = 16.0 / 9.0;
inline constexpr double kBeta095 = 1.83178082306482321372436633924;
// F at r = 0.5, lambda = 0
inline constexpr double kFHalf = 0.130812035941136959129201806234;
// f at r = 0.5, lambda = 2
inline constexpr double kfHalfLambda2 = -0.450693855665945154302377381539;
// g at r = 0.5, lambda = 1, eta = -1
inline constexpr double kgHalf = -0.765278955334776358061911903589;
// quadratic continuation of beta past the knee 0.95 (n = 10), evaluated at r = 2
inline constexpr double kExtBeta2 = 122.778526385195000728517265748;
// u = 0.5 on the unit interval, lambda = 0, eta = 1
inline constexpr double kEnergyConst = 0.281680656042709706359674196715;
inline constexpr double kWillmoreConst = 0.150868620101572747230472390481;
inline constexpr double kMArg = 0.732408192445406460930163491282;
inline constexpr double kMValue = 0.542927657022931581338358789076;
// int_0^1 |d/dx asin(0.5 sin 2 pi x)|^2 dx
inline constexpr double kJHalfSine = 5.28910505777309624585201829666;

template <class Fn>
double integrate(Fn&& fn, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(fn, a, b, 15, 1e-13);
}

template <class Fn>
double integrate_singular(Fn&& fn, double a, double b) {
  boost::math::quadrature::tanh_sinh<double> q;
  return q.integrate(fn, a, b);
}

inline double j_half_sine() {
  const double pi = std::numbers::pi;
  return integrate(
      [pi](double x) {
        const double s = std::sin(2 * pi * x);
        const double c = std::cos(2 * pi * x);
        return pi * pi * c * c / (1.0 - 0.25 * s * s);
      },
      0.0, 1.0);
}

// Closed-form logarithmic potential, independent of the library's branch handling.
inline double log_potential(double r, double lambda) {
  auto xlx = [](double x) { return x > 0 ? x * std::log(x) : 0.0; };
  return 0.5 * xlx(1 + r) + 0.5 * xlx(1 - r) - 0.5 * lambda * r * r;
}

}  // namespace oracle
