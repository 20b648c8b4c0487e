// Sparse multivariate polynomials with exact rational coefficients.
#pragma once

#include "newtonosc/face.hpp"
#include "newtonosc/rational.hpp"

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace newtonosc {

/// Exponent vector alpha with nonnegative entries.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);
  static MultiIndex zero(std::size_t d) { return MultiIndex(std::vector<int>(d, 0)); }

  std::size_t size() const { return entries_.size(); }
  int operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<int>& entries() const { return entries_; }
  int total_degree() const;
  int positive_count() const;
  RationalVector to_rational() const;

  auto operator<=>(const MultiIndex&) const = default;

 private:
  std::vector<int> entries_;
};

class PhasePolynomial {
 public:
  using TermMap = std::map<MultiIndex, Rational>;

  /// The zero polynomial in d variables.
  explicit PhasePolynomial(std::size_t d);
  /// Zero coefficients are dropped; every index must have size d. `reduced` asserts that every
  /// term has at least two positive exponents.
  PhasePolynomial(std::size_t d, TermMap terms, bool reduced = false);

  std::size_t dimension() const { return dimension_; }
  const TermMap& terms() const { return terms_; }
  /// Nonzero, and every term has at least two positive exponents.
  bool reduced() const { return reduced_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  std::vector<MultiIndex> support() const;
  Rational coefficient(const MultiIndex& alpha) const;

  bool operator==(const PhasePolynomial& other) const {
    return dimension_ == other.dimension_ && terms_ == other.terms_;
  }

 private:
  std::size_t dimension_;
  TermMap terms_;
  bool reduced_ = false;
};

/// Grammar: terms joined by '+'/'-'; term = [rational][*] factor ('*' factor)* or a bare
/// rational; factor = xK or xK^E with 1 <= K <= d, E >= 1. Whitespace is ignored.
/// Throws ParseError (syntax, variable range) or EmptyPhaseError (all terms cancel).
PhasePolynomial parse_phase(std::string_view text, std::size_t d);

/// Inverse of parse_phase on the term map.
std::string to_string(const PhasePolynomial& p);

/// Drops terms with fewer than two positive exponents. Throws EmptyPhaseError when
/// nothing remains.
PhasePolynomial reduce_phase(const PhasePolynomial& p);

/// Exact derivative d^a p; may be the zero polynomial.
PhasePolynomial partial_derivative(const PhasePolynomial& p, const MultiIndex& a);

/// Mixed second partial d_i d_j p.
PhasePolynomial second_partial(const PhasePolynomial& p, std::size_t i, std::size_t j);

/// Floating evaluation with compensated summation.
double evaluate(const PhasePolynomial& p, std::span<const double> x);

Rational evaluate_exact(const PhasePolynomial& p, std::span<const Rational> x);

/// Terms of p whose exponents lie on F. Throws GeometryError unless F is a compact face
/// of the Newton polyhedron of p (vertices in supp(p), supporting inequality valid on supp(p)).
PhasePolynomial restrict_to_face(const PhasePolynomial& p, const Face& face);

/// Double-precision copy in structure-of-arrays layout for the numeric kernels.
struct NumericPolynomial {
  std::size_t dimension = 0;
  std::vector<double> coefficients;  // one per term
  std::vector<int> exponents;        // term-major: exponents[t * dimension + k]

  std::size_t terms() const { return coefficients.size(); }
  double evaluate(std::span<const double> x) const;
};

NumericPolynomial to_numeric(const PhasePolynomial& p);

}  // namespace newtonosc
