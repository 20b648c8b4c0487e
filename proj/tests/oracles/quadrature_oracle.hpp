// Reference integrals computed without the production quadrature: double-exponential
// quadrature for the cutoff mass, and a brute-force nested composite Gauss-Legendre rule for
// the bilinear phase x1*x2.
#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <complex>

namespace oracle {

inline double bump(double u) { return std::abs(u) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - u * u)) : 0.0; }

/// int over [-r, r] (or [0, r]) of b(x / r).
inline double bump_mass_1d(double radius, bool half) {
  boost::math::quadrature::tanh_sinh<double> ts;
  const double one_side = ts.integrate([](double u) { return bump(u); }, 0.0, 1.0);
  return radius * (half ? one_side : 2.0 * one_side);
}

/// int_0^1 int_0^1 e^{i lambda x y} b(x) b(y) dy dx with panels short enough that the phase
/// moves less than a radian per panel.
inline std::complex<double> bilinear_orthant_reference(double lambda) {
  using Rule = boost::math::quadrature::gauss<double, 30>;
  const int panels = std::max(64, static_cast<int>(std::ceil(std::abs(lambda))));
  const double h = 1.0 / panels;
  auto inner = [&](double x) {
    std::complex<double> s = 0.0;
    for (int k = 0; k < panels; ++k) {
      const double a = k * h;
      s += Rule::integrate([&](double y) { return std::polar(bump(y), lambda * x * y); }, a, a + h);
    }
    return s;
  };
  std::complex<double> total = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double a = k * h;
    std::complex<double> part = 0.0;
    const auto& xs = Rule::abscissa();
    const auto& ws = Rule::weights();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      for (double sgn : {-1.0, 1.0}) {
        if (i == 0 && sgn < 0.0 && xs[0] == 0.0) continue;
        const double x = a + 0.5 * h * (1.0 + sgn * xs[i]);
        part += ws[i] * bump(x) * inner(x);
      }
    }
    total += 0.5 * h * part;
  }
  return total;
}

}  // namespace oracle
