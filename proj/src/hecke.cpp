#include "klcalc/hecke.hpp"

#include <algorithm>
#include <iterator>
#include <ostream>
#include <thread>

#include "klcalc/errors.hpp"

namespace klcalc {

namespace {

const LaurentPoly& zero_poly() {
  static const LaurentPoly zero;
  return zero;
}

// v^-1 - v
const LaurentPoly& quadratic_coefficient() {
  static const LaurentPoly c = LaurentPoly::monomial(-1) - LaurentPoly::monomial(1);
  return c;
}

}  // namespace

// ---- HeckeElement -----------------------------------------------------------

HeckeElement::HeckeElement(EnumerationPtr group) : group_(std::move(group)) {}

HeckeElement HeckeElement::standard(EnumerationPtr group, ElementId y, const LaurentPoly& coefficient) {
  HeckeElement h(std::move(group));
  h.add_term(y, coefficient);
  return h;
}

HeckeElement HeckeElement::kl_generator(EnumerationPtr group, int s) {
  HeckeElement h(group);
  h.add_term(group->right(group->identity(), s), 1);
  h.add_term(group->identity(), LaurentPoly::monomial(1));
  return h;
}

LaurentPoly HeckeElement::coefficient(ElementId y) const {
  auto it = terms_.find(y);
  return it == terms_.end() ? LaurentPoly() : it->second;
}

LaurentPoly HeckeElement::coefficient(const Element& y) const { return coefficient(group_->id_of(y)); }

void HeckeElement::add_term(ElementId y, const LaurentPoly& coefficient) {
  if (coefficient.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(y, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void HeckeElement::check_group(const HeckeElement& other) const {
  if (group_ != other.group_) throw OwnerMismatch("Hecke elements over different groups");
}

HeckeElement& HeckeElement::operator+=(const HeckeElement& other) {
  check_group(other);
  for (const auto& [y, p] : other.terms_) add_term(y, p);
  return *this;
}

HeckeElement& HeckeElement::operator-=(const HeckeElement& other) {
  check_group(other);
  for (const auto& [y, p] : other.terms_) add_term(y, -p);
  return *this;
}

HeckeElement& HeckeElement::operator*=(const LaurentPoly& scalar) {
  if (scalar.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [y, p] : terms_) p *= scalar;
  return *this;
}

HeckeElement operator*(const HeckeElement& a, const HeckeElement& b) {
  a.check_group(b);
  HeckeElement out(a.group_);
  for (const auto& [z, p] : b.terms_) {
    HeckeElement part = a;
    for (int s : a.group_->system().reduced_word(a.group_->element(z))) part = std_mult_gen(part, s, Side::right);
    part *= p;
    out += part;
  }
  return out;
}

std::string HeckeElement::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [y, p] : terms_) {
    if (!out.empty()) out += " + ";
    std::string word = group_->system().word_string(group_->element(y));
    out += "(" + p.to_string() + ") H[" + (word.empty() ? "e" : word) + "]";
  }
  return out;
}

HeckeElement std_mult_gen(const HeckeElement& h, int s, Side side) {
  const Enumeration& g = h.group();
  HeckeElement out(h.group_ptr());
  for (const auto& [y, p] : h.terms()) {
    bool descent = side == Side::right ? mask_has(g.right_descents(y), s) : mask_has(g.left_descents(y), s);
    ElementId ys = side == Side::right ? g.right(y, s) : g.left(s, y);
    out.add_term(ys, p);
    if (descent) out.add_term(y, p * quadratic_coefficient());
  }
  return out;
}

HeckeElement bar_involution(const HeckeElement& h) {
  const EnumerationPtr& group = h.group_ptr();
  // bar(H_s) = H_s^-1 = H_s + (v - v^-1) H_e; bar is multiplicative.
  const LaurentPoly shift = LaurentPoly::monomial(1) - LaurentPoly::monomial(-1);
  HeckeElement out(group);
  for (const auto& [y, p] : h.terms()) {
    HeckeElement image = HeckeElement::standard(group, group->identity());
    for (int s : group->system().reduced_word(group->element(y))) {
      HeckeElement next = std_mult_gen(image, s, Side::right);
      HeckeElement extra = image;
      extra *= shift;
      image = next + extra;
    }
    image *= bar_dual(p);
    out += image;
  }
  return out;
}

// ---- KLTable ----------------------------------------------------------------

KLTable::KLTable(EnumerationPtr group) : group_(std::move(group)), rows_(group_->size()) {}

std::unique_ptr<KLTable::Row> KLTable::compute_row(ElementId x) const {
  const Enumeration& g = *group_;
  const std::size_t n = g.size();
  auto row = std::make_unique<Row>();
  row->h.resize(n);
  if (x == g.identity()) {
    row->h[x] = 1;
    row->support = {x};
    return row;
  }
  const int s = g.first_left_descent(x);
  const ElementId xp = g.left(s, x);
  const Row& prev = *rows_[xp];
  auto& acc = row->h;
  // H_s H_y = H_{sy} + v H_y if sy > y, H_{sy} + v^-1 H_y if sy < y.
  for (ElementId y : prev.support) {
    const LaurentPoly& p = prev.h[y];
    acc[g.left(s, y)] += p;
    acc[y].add_scaled(p, 1, mask_has(g.left_descents(y), s) ? -1 : 1);
  }
  for (ElementId z : prev.support) {
    if (z == xp || !mask_has(g.left_descents(z), s)) continue;
    mpz_class m = prev.h[z].coefficient(1);
    if (m == 0) continue;
    const Row& zr = *rows_[z];
    for (ElementId y : zr.support) acc[y].add_scaled(zr.h[y], -m);
  }
  for (ElementId y = 0; y < n; ++y)
    if (!acc[y].is_zero()) row->support.push_back(y);
  return row;
}

const KLTable::Row& KLTable::ensure(ElementId x) const {
  std::lock_guard lock(mutex_);
  if (rows_[x]) return *rows_[x];
  const Enumeration& g = *group_;
  if (x != g.identity()) {
    const int s = g.first_left_descent(x);
    const ElementId xp = g.left(s, x);
    const Row& prev = ensure(xp);
    for (ElementId z : prev.support)
      if (z != xp && mask_has(g.left_descents(z), s) && prev.h[z].coefficient(1) != 0) ensure(z);
  }
  rows_[x] = compute_row(x);
  return *rows_[x];
}

const LaurentPoly& KLTable::h(ElementId y, ElementId x) const { return ensure(x).h[y]; }

LaurentPoly KLTable::h(const Element& y, const Element& x) const { return h(group_->id_of(y), group_->id_of(x)); }

mpz_class KLTable::mu(ElementId y, ElementId x) const { return h(y, x).coefficient(1); }

mpz_class KLTable::mu(const Element& y, const Element& x) const { return mu(group_->id_of(y), group_->id_of(x)); }

const std::vector<ElementId>& KLTable::support(ElementId x) const { return ensure(x).support; }

HeckeElement KLTable::kl_basis(ElementId x) const {
  const Row& row = ensure(x);
  HeckeElement out(group_);
  for (ElementId y : row.support) out.add_term(y, row.h[y]);
  return out;
}

HeckeElement KLTable::kl_basis(const Element& x) const { return kl_basis(group_->id_of(x)); }

bool KLTable::has_row(ElementId x) const {
  std::lock_guard lock(mutex_);
  return rows_[x] != nullptr;
}

std::size_t KLTable::rows_computed() const {
  std::lock_guard lock(mutex_);
  return static_cast<std::size_t>(std::count_if(rows_.begin(), rows_.end(), [](const auto& r) { return r != nullptr; }));
}

void KLTable::compute_all(unsigned threads) {
  std::lock_guard lock(mutex_);
  const Enumeration& g = *group_;
  const std::size_t n = g.size();
  threads = std::max(1U, threads);
  std::size_t begin = 0;
  while (begin < n) {
    std::size_t end = begin;
    while (end < n && g.length(static_cast<ElementId>(end)) == g.length(static_cast<ElementId>(begin))) ++end;
    std::vector<ElementId> todo;
    for (std::size_t x = begin; x < end; ++x)
      if (!rows_[x]) todo.push_back(static_cast<ElementId>(x));
    // Rows of one length depend only on shorter rows, which are complete.
    if (threads == 1 || todo.size() < 2) {
      for (ElementId x : todo) rows_[x] = compute_row(x);
    } else {
      std::vector<std::unique_ptr<Row>> results(todo.size());
      std::vector<std::thread> workers;
      for (unsigned t = 0; t < threads; ++t)
        workers.emplace_back([&, t] {
          for (std::size_t k = t; k < todo.size(); k += threads) results[k] = compute_row(todo[k]);
        });
      for (auto& w : workers) w.join();
      for (std::size_t k = 0; k < todo.size(); ++k) rows_[todo[k]] = std::move(results[k]);
    }
    begin = end;
  }
}

void KLTable::insert_row(ElementId x, const std::vector<std::pair<ElementId, LaurentPoly>>& entries) {
  std::lock_guard lock(mutex_);
  if (rows_[x]) return;
  auto row = std::make_unique<Row>();
  row->h.resize(group_->size());
  for (const auto& [y, p] : entries) {
    if (y >= group_->size()) throw CacheError("row entry out of range");
    row->h[y] += p;
  }
  if (row->h[x] != LaurentPoly(1)) throw CacheError("row is missing h_{x,x} = 1");
  for (ElementId y = 0; y < group_->size(); ++y)
    if (!row->h[y].is_zero()) row->support.push_back(y);
  rows_[x] = std::move(row);
}

HeckeElement kl_basis(const Element& x, const KLTable& table) { return table.kl_basis(x); }

mpz_class mu(const Element& y, const Element& x, const KLTable& table) { return table.mu(y, x); }

LaurentPoly h_polynomial(const Element& y, const Element& x, const KLTable& table) { return table.h(y, x); }

// ---- R-polynomials ----------------------------------------------------------

RPolynomialTable::RPolynomialTable(EnumerationPtr group) : group_(std::move(group)), n_(group_->size()) {
  const Enumeration& g = *group_;
  r_.resize(n_ * n_);
  const LaurentPoly q = LaurentPoly::monomial(1);
  const LaurentPoly q_minus_one = q - LaurentPoly(1);
  r_[0] = 1;
  for (ElementId x = 1; x < n_; ++x) {
    const int s = g.first_left_descent(x);
    const ElementId sx = g.left(s, x);
    for (ElementId y = 0; y < n_; ++y) {
      const ElementId sy = g.left(s, y);
      LaurentPoly value;
      if (mask_has(g.left_descents(y), s)) {
        value = R(sy, sx);
      } else {
        value = q * R(sy, sx) + q_minus_one * R(y, sx);
      }
      r_[static_cast<std::size_t>(x) * n_ + y] = std::move(value);
    }
  }
}

const std::vector<LaurentPoly>& RPolynomialTable::column(ElementId x) const {
  std::lock_guard lock(mutex_);
  if (auto it = p_columns_.find(x); it != p_columns_.end()) return it->second;
  const Enumeration& g = *group_;
  std::vector<LaurentPoly> p(n_);
  p[x] = 1;
  // Ids are sorted by length, so descending ids give descending lengths.
  for (ElementId y = x; y-- > 0;) {
    if (R(y, x).is_zero()) continue;
    const int d = g.length(x) - g.length(y);
    LaurentPoly sum;
    for (ElementId z = y + 1; z <= x; ++z) {
      if (p[z].is_zero() || R(y, z).is_zero()) continue;
      sum += R(y, z) * p[z];
    }
    // q^d bar(P) has only degrees > d/2 while P has only degrees < d/2.
    std::vector<LaurentPoly::Term> low;
    for (const auto& [e, c] : sum.terms())
      if (2 * e < d) low.emplace_back(e, -c);
    p[y] = LaurentPoly(std::move(low));
  }
  return p_columns_.emplace(x, std::move(p)).first->second;
}

const LaurentPoly& RPolynomialTable::kl_polynomial(ElementId y, ElementId x) const {
  if (y > x) return zero_poly();
  return column(x)[y];
}

std::unique_ptr<RPolynomialTable> r_polynomials(EnumerationPtr group) {
  return std::make_unique<RPolynomialTable>(std::move(group));
}

LaurentPoly kl_polynomial_recursive(const Element& y, const Element& x, const RPolynomialTable& table) {
  return table.kl_polynomial(table.group().id_of(y), table.group().id_of(x));
}

std::ostream& operator<<(std::ostream& os, const HeckeElement& h) { return os << h.to_string(); }

}  // namespace klcalc
