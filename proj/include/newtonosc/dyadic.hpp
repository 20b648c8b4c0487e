#pragma once

#include "newtonosc/rational.hpp"

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace newtonosc {

/// eps_k = 2^{-j_k} with j_k >= 0; the box Q_eps = prod_k [eps_k, 8 eps_k].
class DyadicBox {
 public:
  DyadicBox() = default;
  explicit DyadicBox(std::vector<int> j) : j_(std::move(j)) {
    for (int x : j_) {
      if (x < 0) throw std::invalid_argument("dyadic box exponents must be nonnegative");
    }
  }

  std::size_t dimension() const { return j_.size(); }
  const std::vector<int>& exponents() const { return j_; }
  double epsilon(std::size_t k) const { return std::ldexp(1.0, -j_[k]); }
  double lower(std::size_t k) const { return epsilon(k); }
  double upper(std::size_t k) const { return 8.0 * epsilon(k); }

  /// log2(eps^alpha) = -<alpha, j>, exact.
  Rational log2_power(std::span<const Rational> alpha) const {
    Rational s = 0;
    for (std::size_t k = 0; k < j_.size(); ++k) s -= alpha[k] * j_[k];
    return s;
  }

  auto operator<=>(const DyadicBox&) const = default;

 private:
  std::vector<int> j_;
};

}  // namespace newtonosc
