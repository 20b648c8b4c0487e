#include "newtonosc/rational.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace newtonosc {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den)) {
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  }
  mpz_class n(std::string(num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  Rational r(n, d);
  r.canonicalize();
  if (negative) r = -r;
  return r;
}

std::string to_string(const Rational& value) { return value.get_str(10); }

double to_double(const Rational& value) { return value.get_d(); }

Rational from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite value has no rational form");
  Rational r(value);
  r.canonicalize();
  return r;
}

Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
  Rational acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

bool is_integer(const Rational& value) { return value.get_den() == 1; }

RationalVector primitive_integer_vector(RationalVector v) {
  mpz_class lcm = 1;
  for (const auto& x : v) {
    if (x != 0) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
  }
  mpz_class g = 0;
  for (auto& x : v) {
    x *= lcm;
    x.canonicalize();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_num_mpz_t());
  }
  if (g == 0) return v;
  for (auto& x : v) {
    x /= g;
    x.canonicalize();
  }
  return v;
}

Rational simplest_rational_between(const Rational& lo, const Rational& hi) {
  if (lo > hi) throw std::invalid_argument("simplest_rational_between: empty interval");
  if (lo <= 0 && hi >= 0) return Rational(0);
  if (hi < 0) return -simplest_rational_between(-hi, -lo);
  // Stern-Brocot descent via continued fractions of the endpoints.
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
  Rational floor_lo(fl);
  if (floor_lo == lo) return lo;
  if (floor_lo + 1 <= hi) return Rational(fl + 1);
  // Both endpoints share the integer part; recurse on reciprocals of the fractional parts.
  Rational lo_frac = lo - floor_lo;
  Rational hi_frac = hi - floor_lo;
  Rational inner = simplest_rational_between(1 / hi_frac, 1 / lo_frac);
  Rational out = floor_lo + 1 / inner;
  out.canonicalize();
  return out;
}

RationalVector to_rational_vector(std::span<const int> v) {
  RationalVector out;
  out.reserve(v.size());
  for (int x : v) out.emplace_back(x);
  return out;
}

}  // namespace newtonosc
