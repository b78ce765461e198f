#include <doctest.h>

#include <random>

#include "klcalc/errors.hpp"
#include "klcalc/laurent.hpp"

using klcalc::LaurentPoly;

namespace {

LaurentPoly P(const char* text) { return LaurentPoly::parse(text); }

LaurentPoly random_poly(std::mt19937& rng) {
  std::uniform_int_distribution<int> coef(-4, 4);
  std::uniform_int_distribution<int> count(0, 5);
  std::uniform_int_distribution<int> expo(-6, 6);
  std::vector<LaurentPoly::Term> terms;
  for (int k = count(rng); k > 0; --k) terms.emplace_back(expo(rng), coef(rng));
  return LaurentPoly(std::move(terms));
}

}  // namespace

TEST_CASE("canonical text form") {
  CHECK(P("v^2 + 2 + v^-2").to_string() == "v^-2 + 2 + v^2");
  CHECK(LaurentPoly().to_string() == "0");
  CHECK(P("-v").to_string() == "-v");
  CHECK(P("2*v^3 - v").to_string() == "-v + 2v^3");
  CHECK(P("v^(-2) - 3").to_string() == "v^-2 - 3");
  CHECK(LaurentPoly::parse("1 + q", 'q').to_string('q') == "1 + q");
  CHECK_THROWS_AS(P("v^"), klcalc::ParseError);
  CHECK_THROWS_AS(P("2x"), klcalc::ParseError);
}

TEST_CASE("parse and print are inverse on random polynomials") {
  std::mt19937 rng(7);
  for (int k = 0; k < 500; ++k) {
    LaurentPoly p = random_poly(rng);
    CHECK(LaurentPoly::parse(p.to_string()) == p);
  }
}

TEST_CASE("arithmetic") {
  LaurentPoly a = P("v + v^-1");
  CHECK(klcalc::poly_arith(a, a, klcalc::ArithOp::mul) == P("v^2 + 2 + v^-2"));
  CHECK(klcalc::poly_arith(a, LaurentPoly(), klcalc::ArithOp::add) == a);
  LaurentPoly d = klcalc::poly_arith(P("v^4 + v^2"), P("v^2"), klcalc::ArithOp::sub);
  CHECK(d == P("v^4"));
  CHECK(d.term_count() == 1);
  CHECK((a - a).is_zero());
  CHECK(P("1 + v").at_one() == 2);
}

TEST_CASE("ring axioms on random inputs") {
  std::mt19937 rng(11);
  for (int k = 0; k < 300; ++k) {
    LaurentPoly a = random_poly(rng);
    LaurentPoly b = random_poly(rng);
    LaurentPoly c = random_poly(rng);
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    LaurentPoly s = a;
    s.add_scaled(b, 3, 2);
    CHECK(s == a + b.shifted(2) * mpz_class(3));
  }
}

TEST_CASE("bar duality") {
  CHECK(klcalc::bar_dual(P("v + v^3")) == P("v^-1 + v^-3"));
  CHECK(klcalc::bar_dual(LaurentPoly(5)) == LaurentPoly(5));
  std::mt19937 rng(3);
  for (int k = 0; k < 100; ++k) {
    LaurentPoly p = random_poly(rng);
    CHECK(klcalc::bar_dual(klcalc::bar_dual(p)) == p);
  }
}

TEST_CASE("h to P re-indexing") {
  CHECK(klcalc::h_to_P(P("v^4 + v^2"), 4) == LaurentPoly::parse("1 + q", 'q'));
  CHECK(klcalc::h_to_P(P("v^5"), 5) == LaurentPoly(1));
  CHECK(klcalc::h_to_P(LaurentPoly(1), 0) == LaurentPoly(1));
  CHECK_THROWS_AS(klcalc::h_to_P(P("v^3"), 4), klcalc::ParityError);
  CHECK_THROWS_AS(klcalc::h_to_P(P("v^6"), 4), klcalc::ParityError);
  CHECK(klcalc::P_to_h(LaurentPoly::parse("1 + q", 'q'), 4) == P("v^2 + v^4"));
}
