#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <iosfwd>
#include <string>
#include <vector>

#include "klcalc/coxeter.hpp"
#include "klcalc/laurent.hpp"

namespace klcalc {

// Element of the Hecke algebra of an enumerated group, in the standard basis
// H_y. Normalization: H_s^2 = H_e + (v^-1 - v) H_s.
class HeckeElement {
 public:
  explicit HeckeElement(EnumerationPtr group);
  static HeckeElement standard(EnumerationPtr group, ElementId y, const LaurentPoly& coefficient = 1);
  // H_s + v H_e
  static HeckeElement kl_generator(EnumerationPtr group, int s);

  const Enumeration& group() const { return *group_; }
  const EnumerationPtr& group_ptr() const { return group_; }
  const std::map<ElementId, LaurentPoly>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  LaurentPoly coefficient(ElementId y) const;
  LaurentPoly coefficient(const Element& y) const;
  void add_term(ElementId y, const LaurentPoly& coefficient);

  HeckeElement& operator+=(const HeckeElement& other);
  HeckeElement& operator-=(const HeckeElement& other);
  HeckeElement& operator*=(const LaurentPoly& scalar);

  friend HeckeElement operator+(HeckeElement a, const HeckeElement& b) { return a += b; }
  friend HeckeElement operator-(HeckeElement a, const HeckeElement& b) { return a -= b; }
  friend HeckeElement operator*(const LaurentPoly& p, HeckeElement h) { return h *= p; }
  friend HeckeElement operator*(const HeckeElement& a, const HeckeElement& b);
  friend bool operator==(const HeckeElement& a, const HeckeElement& b) {
    return a.group_ == b.group_ && a.terms_ == b.terms_;
  }

  // "(v) H[e] + (1) H[1]", ascending by element id.
  std::string to_string() const;

 private:
  void check_group(const HeckeElement& other) const;

  EnumerationPtr group_;
  std::map<ElementId, LaurentPoly> terms_;
};

std::ostream& operator<<(std::ostream& os, const HeckeElement& h);

enum class Side { left, right };

HeckeElement std_mult_gen(const HeckeElement& h, int s, Side side);
HeckeElement bar_involution(const HeckeElement& h);

// Kazhdan-Lusztig basis by induction on length: for sx < x (smallest such s),
// H_x = H_s H_{sx} - sum_{z < sx, sz < z} mu(z, sx) H_z. Rows are computed on
// demand and memoized; row x stores h_{y,x} for every y.
class KLTable {
 public:
  explicit KLTable(EnumerationPtr group);

  const Enumeration& group() const { return *group_; }
  const EnumerationPtr& group_ptr() const { return group_; }

  const LaurentPoly& h(ElementId y, ElementId x) const;
  LaurentPoly h(const Element& y, const Element& x) const;
  mpz_class mu(ElementId y, ElementId x) const;
  mpz_class mu(const Element& y, const Element& x) const;
  // Ids y with h_{y,x} != 0, ascending.
  const std::vector<ElementId>& support(ElementId x) const;
  HeckeElement kl_basis(ElementId x) const;
  HeckeElement kl_basis(const Element& x) const;

  bool has_row(ElementId x) const;
  std::size_t rows_computed() const;
  // Computes every row, level by level in length; rows of one level are
  // independent and may be split across worker threads.
  void compute_all(unsigned threads = 1);

  // Installs a row from an external source (cache). The row must contain
  // h_{x,x} = 1; an already present row is left untouched.
  void insert_row(ElementId x, const std::vector<std::pair<ElementId, LaurentPoly>>& entries);

 private:
  struct Row {
    std::vector<ElementId> support;
    std::vector<LaurentPoly> h;  // dense, indexed by y
  };

  const Row& ensure(ElementId x) const;
  std::unique_ptr<Row> compute_row(ElementId x) const;

  EnumerationPtr group_;
  mutable std::recursive_mutex mutex_;
  mutable std::vector<std::unique_ptr<Row>> rows_;
};

HeckeElement kl_basis(const Element& x, const KLTable& table);
mpz_class mu(const Element& y, const Element& x, const KLTable& table);
LaurentPoly h_polynomial(const Element& y, const Element& x, const KLTable& table);

// Classical route: R-polynomials by the descent recursion and P_{y,x} from
// q^{l(x)-l(y)} bar(P_{y,x}) = sum_{y<=z<=x} R_{y,z} P_{z,x}. Polynomials here
// are in q. Uses only the multiplication tables and lengths of the group.
class RPolynomialTable {
 public:
  explicit RPolynomialTable(EnumerationPtr group);

  const Enumeration& group() const { return *group_; }
  const LaurentPoly& R(ElementId y, ElementId x) const { return r_[static_cast<std::size_t>(x) * n_ + y]; }
  const LaurentPoly& kl_polynomial(ElementId y, ElementId x) const;

 private:
  const std::vector<LaurentPoly>& column(ElementId x) const;

  EnumerationPtr group_;
  std::size_t n_;
  std::vector<LaurentPoly> r_;
  mutable std::mutex mutex_;
  mutable std::map<ElementId, std::vector<LaurentPoly>> p_columns_;
};

std::unique_ptr<RPolynomialTable> r_polynomials(EnumerationPtr group);
LaurentPoly kl_polynomial_recursive(const Element& y, const Element& x, const RPolynomialTable& table);

}  // namespace klcalc
