#include "oracles.hpp"

#include <algorithm>

namespace oracles {

using klcalc::ElementId;
using klcalc::LaurentPoly;

std::set<ElementId> subword_interval(const klcalc::Enumeration& g, ElementId x) {
  const auto& sys = g.system();
  const std::vector<int> word = sys.reduced_word(g.element(x));
  std::set<ElementId> out;
  const std::size_t n = word.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<int> sub;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1U) sub.push_back(word[i]);
    out.insert(g.id_of(sys.from_word(sub)));
  }
  return out;
}

Permutation permutation_of_word(int n, const std::vector<int>& word) {
  Permutation p(n);
  for (int i = 0; i < n; ++i) p[i] = i + 1;
  for (int s : word) std::swap(p[s - 1], p[s]);
  return p;
}

int inversions(const Permutation& p) {
  int c = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++c;
  return c;
}

bool tableau_leq(const Permutation& y, const Permutation& x) {
  for (std::size_t k = 1; k <= y.size(); ++k) {
    std::vector<int> a(y.begin(), y.begin() + k);
    std::vector<int> b(x.begin(), x.begin() + k);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (std::size_t i = 0; i < k; ++i)
      if (a[i] > b[i]) return false;
  }
  return true;
}

std::size_t rank_q(std::vector<std::vector<mpq_class>> m) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size();
  const std::size_t cols = m[0].size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (m[r][c] == 0) continue;
      mpq_class f = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

std::size_t toeplitz_rank(const std::vector<std::vector<LaurentPoly>>& m, int i) {
  if (i <= 0 || m.empty()) return 0;
  const std::size_t r = m.size();
  const std::size_t c = m[0].size();
  // Row (a, s) is v^s e_a; column (b, t) reads the coefficient of v^t in slot b.
  std::vector<std::vector<mpq_class>> t(r * i, std::vector<mpq_class>(c * i, 0));
  for (std::size_t a = 0; a < r; ++a)
    for (int s = 0; s < i; ++s)
      for (std::size_t b = 0; b < c; ++b)
        for (int e = 0; s + e < i; ++e) t[a * i + s][b * i + s + e] = m[a][b].coefficient(e);
  return rank_q(std::move(t));
}

int count_valuations_at_least(const std::vector<std::vector<LaurentPoly>>& m, int i) {
  const auto rows = static_cast<int>(m.size());
  const auto step = static_cast<int>(toeplitz_rank(m, i) - toeplitz_rank(m, i - 1));
  return rows - step;
}

std::vector<std::vector<LaurentPoly>> random_poly_matrix(std::mt19937& rng) {
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto random_poly = [&](int min_deg) {
    std::vector<LaurentPoly::Term> terms;
    for (int e = min_deg; e <= 4; ++e)
      if (uniform(0, 2) != 0) terms.emplace_back(e, uniform(-3, 3));
    return LaurentPoly(std::move(terms));
  };
  auto clip = [](const LaurentPoly& p) {
    std::vector<LaurentPoly::Term> terms;
    for (const auto& t : p.terms())
      if (t.first <= 4) terms.push_back(t);
    return LaurentPoly(std::move(terms));
  };
  const int rows = uniform(1, 6);
  const int cols = uniform(rows, 6);
  std::vector<std::vector<LaurentPoly>> m(rows, std::vector<LaurentPoly>(cols));
  for (int a = 0; a < rows; ++a) {
    const int style = uniform(0, 3);
    if (style == 0 || a == 0) {
      // independent row, possibly divisible by a power of v
      const int shift = uniform(0, 2);
      for (int b = 0; b < cols; ++b) m[a][b] = random_poly(shift);
    } else {
      // combination of earlier rows plus a small v-adic perturbation
      const int src = uniform(0, a - 1);
      const int k = uniform(-2, 2);
      const int noise = uniform(1, 3);
      for (int b = 0; b < cols; ++b) {
        LaurentPoly p = m[src][b] * mpz_class(k);
        p += random_poly(noise);
        m[a][b] = clip(p);
      }
    }
  }
  return m;
}

}  // namespace oracles
