#pragma once

#include <map>
#include <span>

#include "klcalc/hecke.hpp"
#include "klcalc/parabolic.hpp"

namespace klcalc {

enum class Flavor { delta, nabla };

// Standard objects with their grading shift: delta_y = R_y[-l(y)],
// nabla_y = R_y[l(y)].
struct StandardCharacter {
  ElementId element;
  int shift;
  Flavor flavor;
};

StandardCharacter standard_character(const Enumeration& group, ElementId y, Flavor flavor);

// Graded multiplicities of H_y (KL basis) in a Hecke element.
using KLMultiplicities = std::map<ElementId, LaurentPoly>;

// Product of KL generators along the word, left to right; the empty word
// gives H_e.
HeckeElement bs_character(EnumerationPtr group, std::span<const int> word);

// h = sum_y c_y H_y, peeling off a longest element of the support each step.
KLMultiplicities decompose_kl(const HeckeElement& h, const KLTable& table);
HeckeElement recompose_kl(const KLMultiplicities& m, const KLTable& table);

// Multiplicities m(y) in H_x H_s = H_{xs} + sum_y m(y) H_y for xs > x.
// Throws DescentError if xs < x.
std::map<ElementId, mpz_class> branch_multiplicities(ElementId x, int s, const KLTable& table);

// Graded rank of Hom(B_x, nabla_y), i.e. h_{y,x}.
LaurentPoly nabla_hom_rank(ElementId x, ElementId y, const KLTable& table);

struct TiltingCharacter {
  HeckeElement character;
  ElementId longest_rep;
  // Longest element of the ambient group, kept for reporting only.
  ElementId twist;
};

TiltingCharacter tilting_character(CosetId coset, const CosetTable& cosets, const KLTable& table);

}  // namespace klcalc
