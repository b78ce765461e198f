#include <doctest.h>

#include <algorithm>
#include <random>

#include "klcalc/errors.hpp"
#include "klcalc/filtration.hpp"
#include "oracles.hpp"

using namespace klcalc;

namespace {

using PolyMatrix = std::vector<std::vector<LaurentPoly>>;

LaurentPoly P(const char* text) { return LaurentPoly::parse(text); }

std::vector<int> valuations(const PolyMatrix& m, int n = 16) { return smith_valuations(PSeriesMatrix::from_polys(m, n)); }

}  // namespace

TEST_CASE("power series") {
  PSeries s = PSeries::from_poly(P("v^2 + 3v^5"), 4);
  CHECK(s.valuation() == 2);
  CHECK(s[2] == 1);
  CHECK_FALSE(PSeries::from_poly(P("v^4"), 4).valuation().has_value());
  CHECK_THROWS_AS(PSeries::from_poly(P("v^-1"), 4), UsageError);
}

TEST_CASE("Smith valuations") {
  std::vector<int> d{0, 1, 2};
  CHECK(smith_valuations(PSeriesMatrix::diagonal(d, 8)) == d);
  CHECK(valuations({{P("v"), P("v")}, {P("v"), P("v + v^2")}}) == std::vector<int>{1, 2});
  PolyMatrix id(3, std::vector<LaurentPoly>(3));
  for (int i = 0; i < 3; ++i) id[i][i] = 1;
  CHECK(valuations(id) == std::vector<int>{0, 0, 0});
  CHECK(valuations({{P("v^2 + v^3"), 1}}) == std::vector<int>{0});
  CHECK(valuations({{P("v^3")}}) == std::vector<int>{3});
  CHECK_THROWS_AS(valuations({{1}, {1}}), RankDeficient);
  CHECK_THROWS_AS(valuations({{P("v^5")}}, 4), InsufficientTruncation);
  CHECK(default_truncation({{P("v^2"), P("1 + v")}}) == 5);
}

TEST_CASE("layer dimensions") {
  std::vector<int> d{1, 2};
  CHECK(layer_dims_from_valuations(d) == std::map<int, int>{{1, 1}, {2, 1}});
  std::vector<int> three{3};
  CHECK(pairing_layer_dims(PSeriesMatrix::diagonal(three, 8)) == std::map<int, int>{{3, 1}});
  std::vector<int> zeros{0, 0, 0, 0};
  CHECK(pairing_layer_dims(PSeriesMatrix::diagonal(zeros, 2)) == std::map<int, int>{{0, 4}});
}

TEST_CASE("full row rank test") {
  CHECK(has_full_row_rank({{P("v"), P("v")}, {P("v"), P("v + v^2")}}));
  CHECK_FALSE(has_full_row_rank({{P("v"), P("v^2")}, {P("1"), P("v")}}));
  CHECK_FALSE(has_full_row_rank({{1}, {2}}));
}

TEST_CASE("Smith valuations match the Toeplitz rank oracle") {
  std::mt19937 rng(20240611);
  int compared = 0;
  for (int k = 0; k < 300; ++k) {
    PolyMatrix m = oracles::random_poly_matrix(rng);
    if (!has_full_row_rank(m)) {
      CHECK_THROWS(valuations(m));
      continue;
    }
    std::vector<int> d;
    try {
      d = valuations(m);
    } catch (const InsufficientTruncation&) {
      continue;
    }
    const int top = d.back();
    for (int i = 1; i <= top + 1; ++i) {
      int count = 0;
      for (int dk : d) count += dk >= i ? 1 : 0;
      CHECK(count == oracles::count_valuations_at_least(m, i));
    }
    ++compared;
  }
  CHECK(compared > 200);
}

TEST_CASE("graded sequence model") {
  CHECK(piece_degrees(3) == std::vector<int>{-2, 0, 2});
  GradedSequenceModel m = gysin_model(P("v^4 + v^2"), 4);
  CHECK(m.cokernel_pieces == std::vector<int>{2, 4});
  CHECK(m.cokernel_degrees() == std::vector<int>{-3, -1, -1, 1, 1, 3});
  CHECK(m.is_selfdual());
  CHECK(m.free_rank == 0);
  CHECK(pairing_layer_dims(m.pairing_matrix()) == std::map<int, int>{{2, 1}, {4, 1}});
  GradedSequenceModel trivial = gysin_model(1, 0);
  CHECK(trivial.cokernel_pieces.empty());
  CHECK(trivial.free_rank == 1);
  CHECK(trivial.cokernel_degrees().empty());
  GradedSequenceModel three = gysin_model(P("v^3"), 3);
  CHECK(three.cokernel_pieces == std::vector<int>{3});
  CHECK(pairing_layer_dims(three.pairing_matrix()) == std::map<int, int>{{3, 1}});
  CHECK_THROWS_AS(gysin_model(P("-v^2"), 2), NegativeCoefficient);
  CHECK_THROWS_AS(gysin_model(P("v"), 2), ParityError);
}

namespace {

LaurentPoly leibniz_det(const PolyMatrix& m) {
  const int n = static_cast<int>(m.size());
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  LaurentPoly det;
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) inversions += perm[i] > perm[j] ? 1 : 0;
    LaurentPoly term = inversions % 2 ? LaurentPoly(-1) : LaurentPoly(1);
    for (int i = 0; i < n; ++i) term *= m[i][perm[i]];
    det += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

PolyMatrix multiply(const PolyMatrix& a, const PolyMatrix& b) {
  PolyMatrix out(a.size(), std::vector<LaurentPoly>(b[0].size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b[0].size(); ++j)
      for (std::size_t k = 0; k < b.size(); ++k) out[i][j] += a[i][k] * b[k][j];
  return out;
}

// Invertible over the valuation ring: unit diagonal 1 + c v, elementary
// operations with polynomial multipliers, a transposition.
PolyMatrix random_unimodular(int n, std::mt19937& rng) {
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  PolyMatrix u(n, std::vector<LaurentPoly>(n));
  for (int i = 0; i < n; ++i) u[i][i] = LaurentPoly(1) + LaurentPoly::monomial(1, uniform(-2, 2));
  for (int k = 0; k < 3 && n > 1; ++k) {
    const int i = uniform(0, n - 1);
    int j = uniform(0, n - 2);
    if (j >= i) ++j;
    PolyMatrix e(n, std::vector<LaurentPoly>(n));
    for (int d = 0; d < n; ++d) e[d][d] = 1;
    e[i][j] = LaurentPoly::monomial(uniform(0, 1), uniform(-2, 2));
    u = multiply(u, e);
  }
  if (n > 1) std::swap(u[0], u[n - 1]);
  return u;
}

}  // namespace

TEST_CASE("valuations are invariant under unimodular changes of basis") {
  std::mt19937 rng(99);
  int checked = 0;
  for (int k = 0; k < 150; ++k) {
    PolyMatrix m = oracles::random_poly_matrix(rng);
    if (!has_full_row_rank(m)) continue;
    std::vector<int> d;
    try {
      d = valuations(m, 24);
    } catch (const InsufficientTruncation&) {
      continue;
    }
    PolyMatrix changed = multiply(multiply(random_unimodular(static_cast<int>(m.size()), rng), m),
                                  random_unimodular(static_cast<int>(m[0].size()), rng));
    CHECK(valuations(changed, 24) == d);
    ++checked;
  }
  CHECK(checked > 50);
}

TEST_CASE("valuation sum equals the valuation of the determinant") {
  std::mt19937 rng(5);
  int checked = 0;
  for (int k = 0; k < 400 && checked < 60; ++k) {
    PolyMatrix m = oracles::random_poly_matrix(rng);
    if (m.size() != m[0].size() || m.size() > 5 || !has_full_row_rank(m)) continue;
    std::vector<int> d = valuations(m, 40);
    int sum = 0;
    for (int x : d) sum += x;
    CHECK(sum == leibniz_det(m).min_exponent());
    ++checked;
  }
  CHECK(checked >= 30);
}
