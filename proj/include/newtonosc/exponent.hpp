// Sharp decay exponent (nu, m) for Lebesgue exponents p in [2, inf]^d.
#pragma once

#include "newtonosc/face.hpp"
#include "newtonosc/polytope.hpp"
#include "newtonosc/rational.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace newtonosc {

/// p in [2, inf]; infinity is explicit so that 1/p' = 1 exactly.
class LebesgueExponent {
 public:
  static LebesgueExponent finite(Rational p);
  static LebesgueExponent infinity() { return LebesgueExponent(); }

  bool is_infinite() const { return infinite_; }
  const Rational& value() const;  // throws when infinite
  /// 1/p' = 1 - 1/p, in [1/2, 1].
  Rational inverse_conjugate() const;
  /// 1/p, in [0, 1/2].
  Rational inverse() const;
  std::string to_string() const;

 private:
  LebesgueExponent() = default;
  bool infinite_ = true;
  Rational p_;
};

struct ExponentQuery {
  std::vector<LebesgueExponent> p;

  static ExponentQuery all_infinite(std::size_t d);
  /// "inf" (every slot), or a comma list of "inf" / rationals >= 2; one entry applies to all slots.
  static ExponentQuery parse(std::string_view text, std::size_t d);
  RationalVector inverse_conjugates() const;
  bool all_infinite() const;
};

struct ExponentReport {
  Rational nu;
  int m = 0;
  Face face;               // lowest face containing the witness
  RationalVector witness;  // nu * (1/p')
  bool witness_in_facet_interior = false;  // lowest face is a facet, so m = 0
  bool nu_at_most_two = false;             // outside the range where the characterization is asserted
  bool m_is_upper_bound = true;            // m is only known to be sharp when every p_j is infinite
};

ExponentReport sharp_exponent(const NewtonPolyhedron& n, const ExponentQuery& q);

/// The all-infinite specialization; nu equals the Newton distance.
ExponentReport varchenko_exponent(const NewtonPolyhedron& n);

}  // namespace newtonosc
