#include "newtonosc/phase.hpp"

#include "newtonosc/errors.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace newtonosc {

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  for (int e : entries_) {
    if (e < 0) throw std::invalid_argument("multi-index entries must be nonnegative");
  }
}

int MultiIndex::total_degree() const {
  int s = 0;
  for (int e : entries_) s += e;
  return s;
}

int MultiIndex::positive_count() const {
  int c = 0;
  for (int e : entries_) c += e > 0 ? 1 : 0;
  return c;
}

RationalVector MultiIndex::to_rational() const { return to_rational_vector(entries_); }

PhasePolynomial::PhasePolynomial(std::size_t d) : dimension_(d) {
  if (d < 2) throw std::invalid_argument("phase dimension must be at least 2");
}

PhasePolynomial::PhasePolynomial(std::size_t d, TermMap terms, bool reduced)
    : PhasePolynomial(d) {
  for (auto& [alpha, c] : terms) {
    if (alpha.size() != d) throw std::invalid_argument("multi-index length differs from dimension");
    if (c != 0) terms_.emplace(alpha, c);
  }
  bool all_mixed = !terms_.empty();
  for (const auto& [alpha, c] : terms_) all_mixed = all_mixed && alpha.positive_count() >= 2;
  if (reduced && !all_mixed) throw std::invalid_argument("reduced phase holds a single-variable term");
  reduced_ = all_mixed;
}

std::vector<MultiIndex> PhasePolynomial::support() const {
  std::vector<MultiIndex> s;
  s.reserve(terms_.size());
  for (const auto& [alpha, c] : terms_) s.push_back(alpha);
  return s;
}

Rational PhasePolynomial::coefficient(const MultiIndex& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? Rational(0) : it->second;
}

namespace {

class PhaseParser {
 public:
  PhaseParser(std::string_view text, std::size_t d) : text_(text), d_(d) {}

  PhasePolynomial parse() {
    skip_space();
    if (at_end()) throw ParseError("empty phase expression", pos_);
    PhasePolynomial::TermMap terms;
    bool first = true;
    while (!at_end()) {
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
        skip_space();
      } else if (!first) {
        throw ParseError("expected '+' or '-'", pos_);
      }
      auto [alpha, coefficient] = term();
      terms[alpha] += sign * coefficient;
      first = false;
      skip_space();
    }
    PhasePolynomial p(d_, std::move(terms));
    if (p.is_zero()) throw EmptyPhaseError("phase polynomial is identically zero");
    return p;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  bool peek_digit() const { return !at_end() && std::isdigit(static_cast<unsigned char>(peek())); }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  std::string_view digits() {
    const std::size_t start = pos_;
    while (peek_digit()) ++pos_;
    if (start == pos_) throw ParseError("expected digits", pos_);
    return text_.substr(start, pos_ - start);
  }

  Rational rational() {
    mpz_class num(std::string(digits()), 10);
    mpz_class den = 1;
    skip_space();
    if (!at_end() && peek() == '/') {
      ++pos_;
      skip_space();
      const std::size_t den_pos = pos_;
      den = mpz_class(std::string(digits()), 10);
      if (den == 0) throw ParseError("zero denominator", den_pos);
    }
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  void factor(std::vector<int>& exponents) {
    if (at_end() || peek() != 'x') throw ParseError("expected variable 'xK'", pos_);
    ++pos_;
    const std::size_t index_pos = pos_;
    const std::string_view k_text = digits();
    const unsigned long k = std::stoul(std::string(k_text));
    if (k < 1 || k > d_) {
      throw ParseError("variable index x" + std::string(k_text) + " out of range 1.." + std::to_string(d_),
                       index_pos);
    }
    int e = 1;
    skip_space();
    if (!at_end() && peek() == '^') {
      ++pos_;
      skip_space();
      const std::size_t e_pos = pos_;
      const std::string_view e_text = digits();
      if (e_text.size() > 6) throw ParseError("exponent too large", e_pos);
      e = std::stoi(std::string(e_text));
      if (e < 1) throw ParseError("exponent must be at least 1", e_pos);
    }
    exponents[k - 1] += e;
  }

  std::pair<MultiIndex, Rational> term() {
    std::vector<int> exponents(d_, 0);
    Rational coefficient = 1;
    if (peek_digit()) {
      coefficient = rational();
      skip_space();
      if (!at_end() && peek() == '*') {
        ++pos_;
        skip_space();
        factor(exponents);
        skip_space();
      } else if (!at_end() && peek() == 'x') {
        factor(exponents);
        skip_space();
      } else {
        return {MultiIndex(std::move(exponents)), coefficient};
      }
    } else {
      if (at_end() || peek() != 'x') throw ParseError("expected coefficient or variable", pos_);
      factor(exponents);
      skip_space();
    }
    while (!at_end() && peek() == '*') {
      ++pos_;
      skip_space();
      factor(exponents);
      skip_space();
    }
    return {MultiIndex(std::move(exponents)), coefficient};
  }

  std::string_view text_;
  std::size_t d_;
  std::size_t pos_ = 0;
};

std::string monomial_text(const MultiIndex& alpha) {
  std::string s;
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    if (alpha[k] == 0) continue;
    if (!s.empty()) s += '*';
    s += 'x' + std::to_string(k + 1);
    if (alpha[k] > 1) s += '^' + std::to_string(alpha[k]);
  }
  return s;
}

// Integer power with repeated squaring; exact for the small exponents used here.
double ipow(double x, int e) {
  double r = 1.0;
  while (e > 0) {
    if (e & 1) r *= x;
    x *= x;
    e >>= 1;
  }
  return r;
}

Rational ipow(const Rational& x, int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace

PhasePolynomial parse_phase(std::string_view text, std::size_t d) { return PhaseParser(text, d).parse(); }

std::string to_string(const PhasePolynomial& p) {
  if (p.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [alpha, c] : p.terms()) {
    const bool negative = c < 0;
    const Rational magnitude = negative ? Rational(-c) : c;
    if (first) {
      if (negative) s += '-';
    } else {
      s += negative ? " - " : " + ";
    }
    const std::string mono = monomial_text(alpha);
    if (mono.empty()) {
      s += to_string(magnitude);
    } else if (magnitude == 1) {
      s += mono;
    } else {
      s += to_string(magnitude) + '*' + mono;
    }
    first = false;
  }
  return s;
}

PhasePolynomial reduce_phase(const PhasePolynomial& p) {
  PhasePolynomial::TermMap kept;
  for (const auto& [alpha, c] : p.terms()) {
    if (alpha.positive_count() >= 2) kept.emplace(alpha, c);
  }
  if (kept.empty()) {
    throw EmptyPhaseError("reduced phase is empty: every term depends on a single variable");
  }
  return PhasePolynomial(p.dimension(), std::move(kept), true);
}

PhasePolynomial partial_derivative(const PhasePolynomial& p, const MultiIndex& a) {
  const std::size_t d = p.dimension();
  if (a.size() != d) throw std::invalid_argument("derivative order length differs from dimension");
  PhasePolynomial::TermMap out;
  for (const auto& [alpha, c] : p.terms()) {
    Rational coeff = c;
    std::vector<int> beta(d);
    bool vanishes = false;
    for (std::size_t k = 0; k < d && !vanishes; ++k) {
      if (alpha[k] < a[k]) {
        vanishes = true;
        break;
      }
      for (int t = 0; t < a[k]; ++t) coeff *= alpha[k] - t;
      beta[k] = alpha[k] - a[k];
    }
    if (!vanishes) out[MultiIndex(std::move(beta))] += coeff;
  }
  return PhasePolynomial(d, std::move(out));
}

PhasePolynomial second_partial(const PhasePolynomial& p, std::size_t i, std::size_t j) {
  std::vector<int> a(p.dimension(), 0);
  a.at(i) += 1;
  a.at(j) += 1;
  return partial_derivative(p, MultiIndex(std::move(a)));
}

double evaluate(const PhasePolynomial& p, std::span<const double> x) {
  if (x.size() != p.dimension()) throw std::invalid_argument("evaluate: point dimension mismatch");
  double sum = 0.0;
  double compensation = 0.0;
  for (const auto& [alpha, c] : p.terms()) {
    double term = to_double(c);
    for (std::size_t k = 0; k < x.size(); ++k) term *= ipow(x[k], alpha[k]);
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      compensation += (sum - t) + term;
    } else {
      compensation += (term - t) + sum;
    }
    sum = t;
  }
  return sum + compensation;
}

Rational evaluate_exact(const PhasePolynomial& p, std::span<const Rational> x) {
  if (x.size() != p.dimension()) throw std::invalid_argument("evaluate_exact: point dimension mismatch");
  Rational sum = 0;
  for (const auto& [alpha, c] : p.terms()) {
    Rational term = c;
    for (std::size_t k = 0; k < x.size(); ++k) term *= ipow(x[k], alpha[k]);
    sum += term;
  }
  return sum;
}

PhasePolynomial restrict_to_face(const PhasePolynomial& p, const Face& face) {
  const std::size_t d = p.dimension();
  if (face.normal.size() != d || face.vertices.empty()) {
    throw GeometryError("face does not live in the phase's dimension");
  }
  for (const auto& w : face.normal) {
    if (w <= 0) throw GeometryError("restriction requires a compact face (strictly positive normal)");
  }
  for (const auto& v : face.vertices) {
    std::vector<int> e(d);
    for (std::size_t k = 0; k < d; ++k) {
      if (!is_integer(v[k]) || v[k] < 0) throw GeometryError("face vertex is not a lattice point of the support");
      e[k] = static_cast<int>(v[k].get_num().get_si());
    }
    if (p.coefficient(MultiIndex(std::move(e))) == 0) {
      throw GeometryError("face vertex not in the support of the phase");
    }
    if (dot(face.normal, v) != face.offset) throw GeometryError("face vertex off its supporting hyperplane");
  }
  PhasePolynomial::TermMap kept;
  for (const auto& [alpha, c] : p.terms()) {
    const Rational level = dot(face.normal, alpha.to_rational());
    if (level < face.offset) throw GeometryError("face is not a face of this phase's Newton polyhedron");
    if (level == face.offset) kept.emplace(alpha, c);
  }
  return PhasePolynomial(d, std::move(kept), p.reduced());
}

double NumericPolynomial::evaluate(std::span<const double> x) const {
  double sum = 0.0;
  for (std::size_t t = 0; t < terms(); ++t) {
    double v = coefficients[t];
    for (std::size_t k = 0; k < dimension; ++k) v *= ipow(x[k], exponents[t * dimension + k]);
    sum += v;
  }
  return sum;
}

NumericPolynomial to_numeric(const PhasePolynomial& p) {
  NumericPolynomial n;
  n.dimension = p.dimension();
  for (const auto& [alpha, c] : p.terms()) {
    n.coefficients.push_back(to_double(c));
    for (std::size_t k = 0; k < n.dimension; ++k) n.exponents.push_back(alpha[k]);
  }
  return n;
}

}  // namespace newtonosc
