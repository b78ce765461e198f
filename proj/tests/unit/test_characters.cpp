#include <doctest.h>

#include "klcalc/characters.hpp"
#include "klcalc/errors.hpp"

using namespace klcalc;

namespace {

LaurentPoly P(const char* text) { return LaurentPoly::parse(text); }

struct Fixture {
  EnumerationPtr g;
  KLTable table;
  explicit Fixture(const char* type) : g(Enumeration::build(CoxeterSystem::build(type))), table(g) {}
  ElementId id(const char* word) const { return g->id_of(g->system().parse_word(word)); }
};

}  // namespace

TEST_CASE("standard characters") {
  Fixture f("A2");
  auto d = standard_character(*f.g, f.id("12"), Flavor::delta);
  CHECK(d.shift == -2);
  CHECK(standard_character(*f.g, f.id("12"), Flavor::nabla).shift == 2);
}

TEST_CASE("Bott-Samelson characters") {
  Fixture f("A2");
  CHECK(bs_character(f.g, {}) == HeckeElement::standard(f.g, f.g->identity()));
  std::vector<int> one{1};
  CHECK(bs_character(f.g, one) == HeckeElement::kl_generator(f.g, 1));
  std::vector<int> twice{1, 1};
  CHECK(decompose_kl(bs_character(f.g, twice), f.table) == KLMultiplicities{{f.id("1"), P("v + v^-1")}});
  std::vector<int> w0{1, 2, 1};
  KLMultiplicities m = decompose_kl(bs_character(f.g, w0), f.table);
  CHECK(m == KLMultiplicities{{f.id("1"), LaurentPoly(1)}, {f.id("121"), LaurentPoly(1)}});
  CHECK(bs_character(f.g, w0) == f.table.kl_basis(f.g->longest()) + f.table.kl_basis(f.id("1")));
  std::vector<int> bad{3};
  CHECK_THROWS_AS(bs_character(f.g, bad), UsageError);
}

TEST_CASE("decomposition roundtrip") {
  Fixture f("B3");
  CHECK(decompose_kl(f.table.kl_basis(f.id("2132")), f.table) == KLMultiplicities{{f.id("2132"), LaurentPoly(1)}});
  for (ElementId x = 0; x < f.g->size(); x += 5) {
    std::vector<int> word = f.g->system().reduced_word(f.g->element(x));
    word.push_back(1);
    HeckeElement h = bs_character(f.g, word);
    KLMultiplicities m = decompose_kl(h, f.table);
    CHECK(recompose_kl(m, f.table) == h);
    for (const auto& [y, c] : m) {
      CHECK(c == bar_dual(c));
      for (const auto& term : c.terms()) CHECK(term.second > 0);
    }
  }
}

TEST_CASE("branching") {
  Fixture f("A2");
  CHECK(branch_multiplicities(f.g->identity(), 1, f.table).empty());
  CHECK(branch_multiplicities(f.id("1"), 2, f.table).empty());
  CHECK(branch_multiplicities(f.id("12"), 1, f.table) == std::map<ElementId, mpz_class>{{f.id("1"), 1}});
  CHECK_THROWS_AS(branch_multiplicities(f.id("12"), 2, f.table), DescentError);
}

TEST_CASE("branching multiplicities are mu values") {
  Fixture f("A3");
  for (ElementId x = 0; x < f.g->size(); ++x)
    for (int s = 1; s <= 3; ++s) {
      if (mask_has(f.g->right_descents(x), s)) continue;
      std::map<ElementId, mpz_class> expected;
      for (ElementId y = 0; y < f.g->size(); ++y)
        if (y != x && mask_has(f.g->right_descents(y), s) && f.table.mu(y, x) != 0) expected[y] = f.table.mu(y, x);
      CHECK(branch_multiplicities(x, s, f.table) == expected);
    }
}

TEST_CASE("hom ranks") {
  Fixture f("A2");
  CHECK(nabla_hom_rank(f.id("12"), f.id("12"), f.table) == LaurentPoly(1));
  CHECK(nabla_hom_rank(f.g->longest(), f.g->identity(), f.table) == P("v^3"));
  CHECK(nabla_hom_rank(f.id("1"), f.id("2"), f.table).is_zero());
}

TEST_CASE("tilting characters") {
  Fixture f("A2");
  auto regular = coset_decomposition(f.g, 0);
  auto top = tilting_character(regular.coset_of(f.g->longest()), regular, f.table);
  CHECK(top.character == f.table.kl_basis(f.g->longest()));
  auto singular = coset_decomposition(f.g, gen_bit(1));
  CHECK(tilting_character(singular.coset_of(f.g->identity()), singular, f.table).character == f.table.kl_basis(f.id("1")));
  auto full = coset_decomposition(f.g, gen_bit(1) | gen_bit(2));
  CHECK(tilting_character(0, full, f.table).longest_rep == f.g->longest());
  CHECK_THROWS_AS(tilting_character(5, full, f.table), UsageError);
}
