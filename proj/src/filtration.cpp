#include "klcalc/filtration.hpp"

#include <algorithm>

#include "klcalc/errors.hpp"

namespace klcalc {

PSeries::PSeries(int truncation) : coeffs_(std::max(truncation, 0)) {}

PSeries PSeries::from_poly(const LaurentPoly& p, int truncation) {
  PSeries s(truncation);
  for (const auto& [e, c] : p.terms()) {
    if (e < 0) throw UsageError("power series entries need non-negative exponents, got " + p.to_string());
    if (e < truncation) s.coeffs_[e] = c;
  }
  return s;
}

std::optional<int> PSeries::valuation() const {
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) return static_cast<int>(i);
  return std::nullopt;
}

PSeriesMatrix::PSeriesMatrix(int rows, int cols, int truncation)
    : rows_(rows), cols_(cols), truncation_(truncation), entries_(static_cast<std::size_t>(rows) * cols, PSeries(truncation)) {
  if (rows < 0 || cols < 0 || truncation < 1) throw UsageError("invalid matrix shape or truncation");
}

int default_truncation(const std::vector<std::vector<LaurentPoly>>& entries) {
  int sum = 0;
  for (const auto& row : entries)
    for (const auto& p : row)
      if (!p.is_zero()) sum += std::max(p.max_exponent(), 0);
  return sum + 2;
}

PSeriesMatrix PSeriesMatrix::from_polys(const std::vector<std::vector<LaurentPoly>>& entries, std::optional<int> truncation) {
  const int rows = static_cast<int>(entries.size());
  const int cols = rows == 0 ? 0 : static_cast<int>(entries[0].size());
  for (const auto& row : entries)
    if (static_cast<int>(row.size()) != cols) throw UsageError("matrix rows have different lengths");
  const int n = truncation.value_or(default_truncation(entries));
  PSeriesMatrix m(rows, cols, n);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m.at(i, j) = PSeries::from_poly(entries[i][j], n);
  return m;
}

PSeriesMatrix PSeriesMatrix::diagonal(std::span<const int> valuations, int truncation) {
  const int n = static_cast<int>(valuations.size());
  PSeriesMatrix m(n, n, truncation);
  for (int k = 0; k < n; ++k)
    if (valuations[k] < truncation) m.at(k, k)[valuations[k]] = 1;
  return m;
}

namespace {

int rank_over_q(std::vector<std::vector<mpq_class>> a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (a[r][c] == 0) continue;
      mpq_class f = a[r][c] / a[rank][c];
      for (std::size_t k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
    }
    ++rank;
  }
  return static_cast<int>(rank);
}

// a(v) * b(v) mod v^n, where only the first a_len coefficients of a are used.
void sub_product(PSeries& target, const std::vector<mpq_class>& a, const PSeries& b, int n) {
  const int a_len = static_cast<int>(a.size());
  for (int i = 0; i < a_len; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; i + j < n; ++j) {
      if (b[j] == 0) continue;
      target[i + j] -= a[i] * b[j];
    }
  }
}

}  // namespace

bool has_full_row_rank(const std::vector<std::vector<LaurentPoly>>& entries) {
  const std::size_t rows = entries.size();
  if (rows == 0) return true;
  const std::size_t cols = entries[0].size();
  if (rows > cols) return false;
  int max_deg = 0;
  for (const auto& row : entries)
    for (const auto& p : row) {
      if (p.is_zero()) continue;
      if (p.min_exponent() < 0) throw UsageError("rank test needs polynomial entries");
      max_deg = std::max(max_deg, p.max_exponent());
    }
  // A nonzero maximal minor has degree <= rows * max_deg, so it cannot
  // vanish at that many + 1 distinct points.
  const int points = static_cast<int>(rows) * max_deg + 1;
  for (int t = 1; t <= points; ++t) {
    std::vector<std::vector<mpq_class>> a(rows, std::vector<mpq_class>(cols));
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        mpz_class value = 0;
        mpz_class power = 1;
        int e = 0;
        for (const auto& [exp, c] : entries[i][j].terms()) {
          while (e < exp) {
            power *= t;
            ++e;
          }
          value += c * power;
        }
        a[i][j] = value;
      }
    if (rank_over_q(std::move(a)) == static_cast<int>(rows)) return true;
  }
  return false;
}

std::vector<int> smith_valuations(const PSeriesMatrix& input) {
  PSeriesMatrix m = input;
  const int n = m.truncation();
  std::vector<int> rows(m.rows());
  std::vector<int> cols(m.cols());
  for (int i = 0; i < m.rows(); ++i) rows[i] = i;
  for (int j = 0; j < m.cols(); ++j) cols[j] = j;
  std::vector<int> out;
  while (!rows.empty()) {
    if (cols.empty()) throw RankDeficient("more rows than columns remain; the pairing is not injective");
    int best = n;
    std::size_t bi = 0;
    std::size_t bj = 0;
    for (std::size_t a = 0; a < rows.size(); ++a)
      for (std::size_t b = 0; b < cols.size(); ++b) {
        auto val = m.at(rows[a], cols[b]).valuation();
        if (val && *val < best) {
          best = *val;
          bi = a;
          bj = b;
        }
      }
    if (best == n)
      throw InsufficientTruncation("remaining block vanishes modulo v^" + std::to_string(n) +
                                   "; raise the truncation or check the rank");
    const int pi = rows[bi];
    const int pj = cols[bj];
    const int d = best;
    const int len = n - d;
    // Inverse of the unit part u = pivot / v^d, modulo v^(n-d).
    const PSeries& pivot = m.at(pi, pj);
    std::vector<mpq_class> inv(len);
    inv[0] = 1 / pivot[d];
    for (int k = 1; k < len; ++k) {
      mpq_class acc = 0;
      for (int j = 1; j <= k; ++j) acc += pivot[d + j] * inv[k - j];
      inv[k] = -acc * inv[0];
    }
    for (std::size_t a = 0; a < rows.size(); ++a) {
      if (a == bi) continue;
      const int i = rows[a];
      const PSeries& lead = m.at(i, pj);
      if (!lead.valuation()) continue;
      std::vector<mpq_class> factor(len);
      for (int k = 0; k < len; ++k) {
        mpq_class acc = 0;
        for (int j = 0; j <= k; ++j)
          if (lead[d + j] != 0) acc += lead[d + j] * inv[k - j];
        factor[k] = acc;
      }
      for (int j : cols) {
        if (j == pj) continue;
        sub_product(m.at(i, j), factor, m.at(pi, j), n);
      }
      m.at(i, pj) = PSeries(n);
    }
    out.push_back(d);
    rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(bi));
    cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::map<int, int> layer_dims_from_valuations(std::span<const int> valuations) {
  std::map<int, int> out;
  for (int d : valuations) ++out[d];
  return out;
}

std::map<int, int> pairing_layer_dims(const PSeriesMatrix& m) {
  std::vector<int> d = smith_valuations(m);
  return layer_dims_from_valuations(d);
}

std::vector<int> piece_degrees(int i) {
  std::vector<int> out;
  for (int k = i - 1; k >= 0; --k) out.push_back(i - 1 - 2 * k);
  return out;
}

std::vector<int> GradedSequenceModel::cokernel_degrees() const {
  std::vector<int> out;
  for (int i : cokernel_pieces) {
    auto d = piece_degrees(i);
    out.insert(out.end(), d.begin(), d.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool GradedSequenceModel::is_selfdual() const {
  for (int i : cokernel_pieces) {
    auto d = piece_degrees(i);
    std::vector<int> neg;
    for (int x : d) neg.push_back(-x);
    std::sort(neg.begin(), neg.end());
    if (neg != d) return false;
  }
  auto all = cokernel_degrees();
  std::vector<int> neg;
  for (int x : all) neg.push_back(-x);
  std::sort(neg.begin(), neg.end());
  return neg == all;
}

PSeriesMatrix GradedSequenceModel::pairing_matrix() const {
  std::vector<int> d(free_rank, 0);
  d.insert(d.end(), cokernel_pieces.begin(), cokernel_pieces.end());
  int top = 0;
  for (int x : d) top = std::max(top, x);
  return PSeriesMatrix::diagonal(d, top + 2);
}

GradedSequenceModel gysin_model(const LaurentPoly& h, int ldiff) {
  GradedSequenceModel model;
  for (const auto& [i, c] : h.terms()) {
    if (c < 0) throw NegativeCoefficient("h-polynomial has a negative coefficient: " + h.to_string());
    if (i < 0 || i > ldiff || (ldiff - i) % 2 != 0)
      throw ParityError("exponent " + std::to_string(i) + " incompatible with length difference " + std::to_string(ldiff));
    if (!c.fits_sint_p()) throw Unsupported("multiplicity too large for the graded model");
    const int count = static_cast<int>(c.get_si());
    for (int k = 0; k < count; ++k) {
      if (i == 0) {
        ++model.free_rank;
        model.costalk_degrees.push_back(0);
        model.stalk_degrees.push_back(0);
      } else {
        model.cokernel_pieces.push_back(i);
        model.costalk_degrees.push_back(i);
        model.stalk_degrees.push_back(-i);
      }
    }
  }
  std::sort(model.costalk_degrees.begin(), model.costalk_degrees.end());
  std::sort(model.stalk_degrees.begin(), model.stalk_degrees.end());
  if (!model.is_selfdual()) throw Error("internal: cokernel of the graded model is not selfdual");
  return model;
}

}  // namespace klcalc
