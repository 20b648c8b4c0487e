// Exact rational scalars and small helpers shared by the geometry code.
#pragma once

#include <gmpxx.h>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace newtonosc {

using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

/// Parses `a`, `-a`, `a/b` (base 10). Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Canonical text form: "3", "-3/2".
std::string to_string(const Rational& value);

double to_double(const Rational& value);

/// Closest simple rational to a finite double (exact binary expansion).
Rational from_double(double value);

Rational dot(std::span<const Rational> a, std::span<const Rational> b);

bool is_integer(const Rational& value);

/// Scales a nonzero vector by a positive factor so that its entries are
/// coprime integers. The zero vector is returned unchanged.
RationalVector primitive_integer_vector(RationalVector v);

/// Simplest rational (smallest denominator) in the closed interval [lo, hi].
Rational simplest_rational_between(const Rational& lo, const Rational& hi);

RationalVector to_rational_vector(std::span<const int> v);

}  // namespace newtonosc
