#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "klcalc/laurent.hpp"

namespace klcalc {

// Power series over Q known modulo v^N.
class PSeries {
 public:
  explicit PSeries(int truncation);
  static PSeries from_poly(const LaurentPoly& p, int truncation);

  int truncation() const { return static_cast<int>(coeffs_.size()); }
  const mpq_class& operator[](int i) const { return coeffs_[i]; }
  mpq_class& operator[](int i) { return coeffs_[i]; }

  // First nonzero index, or nullopt when every known coefficient vanishes.
  std::optional<int> valuation() const;

 private:
  std::vector<mpq_class> coeffs_;
};

class PSeriesMatrix {
 public:
  PSeriesMatrix(int rows, int cols, int truncation);
  // Truncation defaults to (sum of entry degrees) + 2. Entries must have
  // non-negative exponents.
  static PSeriesMatrix from_polys(const std::vector<std::vector<LaurentPoly>>& entries,
                                  std::optional<int> truncation = std::nullopt);
  static PSeriesMatrix diagonal(std::span<const int> valuations, int truncation);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int truncation() const { return truncation_; }
  const PSeries& at(int i, int j) const { return entries_[static_cast<std::size_t>(i) * cols_ + j]; }
  PSeries& at(int i, int j) { return entries_[static_cast<std::size_t>(i) * cols_ + j]; }

 private:
  int rows_;
  int cols_;
  int truncation_;
  std::vector<PSeries> entries_;
};

int default_truncation(const std::vector<std::vector<LaurentPoly>>& entries);

// Exact test of full row rank over Q(v) for a polynomial matrix.
bool has_full_row_rank(const std::vector<std::vector<LaurentPoly>>& entries);

// Valuations d_k of the diagonal form diag(v^{d_k}) over the valuation ring,
// ascending. Elimination always pivots on an entry of minimal valuation.
// Throws InsufficientTruncation when the remaining block vanishes modulo v^N
// and RankDeficient when rows outnumber the available columns.
std::vector<int> smith_valuations(const PSeriesMatrix& m);

// i -> #{k : d_k = i}
std::map<int, int> layer_dims_from_valuations(std::span<const int> valuations);
std::map<int, int> pairing_layer_dims(const PSeriesMatrix& m);

// Decomposition of costalk -> stalk -> IC into pieces
// C[v][-i] -> C[v][i] -> (C[v]/v^i)[i], one piece per unit of n^i, i > 0,
// plus free rank n^0 matched identically on both sides.
struct GradedSequenceModel {
  std::vector<int> costalk_degrees;
  std::vector<int> stalk_degrees;
  std::vector<int> cokernel_pieces;
  int free_rank = 0;

  // Degrees {i-1-2k : 0 <= k < i} of every piece, merged and sorted.
  std::vector<int> cokernel_degrees() const;
  bool is_selfdual() const;
  // diag(v^0 x free_rank, v^i per piece)
  PSeriesMatrix pairing_matrix() const;
};

std::vector<int> piece_degrees(int i);

GradedSequenceModel gysin_model(const LaurentPoly& h, int ldiff);

}  // namespace klcalc
