#include "klcalc/laurent.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <ostream>

#include "klcalc/errors.hpp"

namespace klcalc {

LaurentPoly::LaurentPoly(long constant) {
  if (constant != 0) terms_.emplace_back(0, mpz_class(constant));
}

LaurentPoly::LaurentPoly(const mpz_class& constant) {
  if (constant != 0) terms_.emplace_back(0, constant);
}

LaurentPoly::LaurentPoly(std::vector<Term> terms) {
  std::map<int, mpz_class> acc;
  for (auto& [e, c] : terms) acc[e] += c;
  for (auto& [e, c] : acc)
    if (c != 0) terms_.emplace_back(e, std::move(c));
}

LaurentPoly LaurentPoly::monomial(int exponent, const mpz_class& coefficient) {
  LaurentPoly p;
  if (coefficient != 0) p.terms_.emplace_back(exponent, coefficient);
  return p;
}

mpz_class LaurentPoly::coefficient(int exponent) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), exponent,
                             [](const Term& t, int e) { return t.first < e; });
  if (it != terms_.end() && it->first == exponent) return it->second;
  return 0;
}

mpz_class LaurentPoly::at_one() const {
  mpz_class sum = 0;
  for (const auto& t : terms_) sum += t.second;
  return sum;
}

void LaurentPoly::add_scaled(const LaurentPoly& other, const mpz_class& scalar, int shift) {
  if (other.is_zero() || scalar == 0) return;
  std::vector<Term> out;
  out.reserve(terms_.size() + other.terms_.size());
  auto a = terms_.begin();
  auto b = other.terms_.begin();
  while (a != terms_.end() || b != other.terms_.end()) {
    if (b == other.terms_.end() || (a != terms_.end() && a->first < b->first + shift)) {
      out.push_back(std::move(*a));
      ++a;
    } else if (a == terms_.end() || b->first + shift < a->first) {
      out.emplace_back(b->first + shift, b->second * scalar);
      ++b;
    } else {
      mpz_class c = a->second;
      mpz_addmul(c.get_mpz_t(), b->second.get_mpz_t(), scalar.get_mpz_t());
      if (c != 0) out.emplace_back(a->first, std::move(c));
      ++a;
      ++b;
    }
  }
  terms_ = std::move(out);
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& other) {
  add_scaled(other, 1);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& other) {
  add_scaled(other, -1);
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly out;
  if (a.is_zero() || b.is_zero()) return out;
  std::map<int, mpz_class> acc;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) mpz_addmul(acc[ea + eb].get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
  for (auto& [e, c] : acc)
    if (c != 0) out.terms_.emplace_back(e, std::move(c));
  return out;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& other) {
  *this = *this * other;
  return *this;
}

LaurentPoly& LaurentPoly::operator*=(const mpz_class& scalar) {
  if (scalar == 0) {
    terms_.clear();
  } else {
    for (auto& t : terms_) t.second *= scalar;
  }
  return *this;
}

LaurentPoly LaurentPoly::shifted(int by) const {
  LaurentPoly out = *this;
  for (auto& t : out.terms_) t.first += by;
  return out;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly out = *this;
  for (auto& t : out.terms_) t.second = -t.second;
  return out;
}

std::string LaurentPoly::to_string(char var) const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    mpz_class mag = abs(c);
    if (first) {
      if (c < 0) s += "-";
    } else {
      s += c < 0 ? " - " : " + ";
    }
    first = false;
    if (e == 0) {
      s += mag.get_str();
      continue;
    }
    if (mag != 1) s += mag.get_str();
    s += var;
    if (e != 1) s += "^" + std::to_string(e);
  }
  return s;
}

namespace {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;

  void skip_space() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool done() {
    skip_space();
    return pos >= text.size();
  }
  bool accept(char c) {
    skip_space();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::string digits() {
    skip_space();
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    return std::string(text.substr(start, pos - start));
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("cannot parse polynomial '" + std::string(text) + "': " + what);
  }
};

}  // namespace

LaurentPoly LaurentPoly::parse(std::string_view text, char var) {
  Cursor cur{text};
  std::vector<Term> terms;
  if (cur.done()) cur.fail("empty input");
  bool first = true;
  while (!cur.done()) {
    int sign = 1;
    if (cur.accept('-')) {
      sign = -1;
    } else if (!cur.accept('+') && !first) {
      cur.fail("expected '+' or '-'");
    }
    first = false;
    std::string num = cur.digits();
    mpz_class coeff = num.empty() ? mpz_class(1) : mpz_class(num);
    int exponent = 0;
    bool has_var = false;
    cur.accept('*');
    if (cur.accept(var)) {
      has_var = true;
      exponent = 1;
      if (cur.accept('^')) {
        int esign = 1;
        if (cur.accept('-')) esign = -1;
        cur.accept('(');
        if (cur.accept('-')) esign = -esign;
        std::string e = cur.digits();
        if (e.empty()) cur.fail("missing exponent");
        cur.accept(')');
        exponent = esign * std::stoi(e);
      }
    }
    if (num.empty() && !has_var) cur.fail("expected a term");
    terms.emplace_back(exponent, sign * coeff);
  }
  return LaurentPoly(std::move(terms));
}

LaurentPoly poly_arith(const LaurentPoly& a, const LaurentPoly& b, ArithOp op) {
  switch (op) {
    case ArithOp::add:
      return a + b;
    case ArithOp::sub:
      return a - b;
    case ArithOp::mul:
      return a * b;
  }
  return {};
}

LaurentPoly bar_dual(const LaurentPoly& p) {
  std::vector<LaurentPoly::Term> terms;
  terms.reserve(p.term_count());
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) terms.emplace_back(-it->first, it->second);
  return LaurentPoly(std::move(terms));
}

LaurentPoly h_to_P(const LaurentPoly& h, int ldiff) {
  std::vector<LaurentPoly::Term> terms;
  for (const auto& [i, c] : h.terms()) {
    if (i > ldiff || (ldiff - i) % 2 != 0)
      throw ParityError("exponent " + std::to_string(i) + " incompatible with length difference " +
                        std::to_string(ldiff));
    terms.emplace_back((ldiff - i) / 2, c);
  }
  return LaurentPoly(std::move(terms));
}

LaurentPoly P_to_h(const LaurentPoly& P, int ldiff) {
  std::vector<LaurentPoly::Term> terms;
  for (const auto& [j, c] : P.terms()) terms.emplace_back(ldiff - 2 * j, c);
  return LaurentPoly(std::move(terms));
}

std::ostream& operator<<(std::ostream& os, const LaurentPoly& p) { return os << p.to_string(); }

}  // namespace klcalc
