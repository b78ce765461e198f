#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace klcalc {

// Sparse Laurent polynomial in one variable with arbitrary-precision integer
// coefficients. Terms are kept sorted by exponent and no stored coefficient
// is zero, so the zero polynomial is the empty term list.
class LaurentPoly {
 public:
  using Term = std::pair<int, mpz_class>;

  LaurentPoly() = default;
  LaurentPoly(long constant);  // NOLINT(google-explicit-constructor)
  explicit LaurentPoly(const mpz_class& constant);
  explicit LaurentPoly(std::vector<Term> terms);

  static LaurentPoly monomial(int exponent, const mpz_class& coefficient = 1);

  bool is_zero() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  // Undefined on the zero polynomial.
  int max_exponent() const { return terms_.back().first; }
  int min_exponent() const { return terms_.front().first; }

  mpz_class coefficient(int exponent) const;
  mpz_class at_one() const;
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first == 0); }

  LaurentPoly& operator+=(const LaurentPoly& other);
  LaurentPoly& operator-=(const LaurentPoly& other);
  LaurentPoly& operator*=(const LaurentPoly& other);
  LaurentPoly& operator*=(const mpz_class& scalar);

  // this += scalar * v^shift * other, without temporaries.
  void add_scaled(const LaurentPoly& other, const mpz_class& scalar, int shift = 0);

  LaurentPoly shifted(int by) const;
  LaurentPoly operator-() const;

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator*(LaurentPoly a, const mpz_class& s) { return a *= s; }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.terms_ == b.terms_; }

  // Canonical text: ascending exponents, e.g. "v^-2 + 2 + v^2". Zero is "0".
  std::string to_string(char var = 'v') const;
  static LaurentPoly parse(std::string_view text, char var = 'v');

 private:
  std::vector<Term> terms_;
};

enum class ArithOp { add, sub, mul };

std::ostream& operator<<(std::ostream& os, const LaurentPoly& p);

LaurentPoly poly_arith(const LaurentPoly& a, const LaurentPoly& b, ArithOp op);

// Exponent negation v -> v^-1.
LaurentPoly bar_dual(const LaurentPoly& p);

// Re-indexes an h-polynomial in v into the KL polynomial in q:
// coefficient of q^j is the coefficient of v^(ldiff - 2j). Throws ParityError
// when an exponent exceeds ldiff or has the wrong parity.
LaurentPoly h_to_P(const LaurentPoly& h, int ldiff);
LaurentPoly P_to_h(const LaurentPoly& P, int ldiff);

}  // namespace klcalc
