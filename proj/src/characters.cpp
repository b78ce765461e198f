#include "klcalc/characters.hpp"

#include "klcalc/errors.hpp"

namespace klcalc {

StandardCharacter standard_character(const Enumeration& group, ElementId y, Flavor flavor) {
  const int l = group.length(y);
  return StandardCharacter{y, flavor == Flavor::delta ? -l : l, flavor};
}

HeckeElement bs_character(EnumerationPtr group, std::span<const int> word) {
  const int rank = group->system().rank();
  HeckeElement out = HeckeElement::standard(group, group->identity());
  for (int s : word) {
    if (s < 1 || s > rank) throw UsageError("generator " + std::to_string(s) + " out of range");
    HeckeElement times_v = out;
    times_v *= LaurentPoly::monomial(1);
    out = std_mult_gen(out, s, Side::right) + times_v;
  }
  return out;
}

KLMultiplicities decompose_kl(const HeckeElement& h, const KLTable& table) {
  if (h.group_ptr() != table.group_ptr()) throw OwnerMismatch("Hecke element and KL table over different groups");
  KLMultiplicities out;
  HeckeElement rest = h;
  while (!rest.is_zero()) {
    // Largest id has maximal length, hence is Bruhat-maximal in the support.
    auto top = std::prev(rest.terms().end());
    const ElementId y = top->first;
    const LaurentPoly c = top->second;
    out.emplace(y, c);
    HeckeElement basis = table.kl_basis(y);
    basis *= c;
    rest -= basis;
  }
  return out;
}

HeckeElement recompose_kl(const KLMultiplicities& m, const KLTable& table) {
  HeckeElement out(table.group_ptr());
  for (const auto& [y, c] : m) {
    HeckeElement basis = table.kl_basis(y);
    basis *= c;
    out += basis;
  }
  return out;
}

std::map<ElementId, mpz_class> branch_multiplicities(ElementId x, int s, const KLTable& table) {
  const Enumeration& g = table.group();
  if (mask_has(g.right_descents(x), s))
    throw DescentError("x s < x: generator " + std::to_string(s) + " is a right descent");
  HeckeElement product = table.kl_basis(x) * HeckeElement::kl_generator(table.group_ptr(), s);
  KLMultiplicities parts = decompose_kl(product, table);
  const ElementId xs = g.right(x, s);
  std::map<ElementId, mpz_class> out;
  for (const auto& [y, c] : parts) {
    if (y == xs) {
      if (c != LaurentPoly(1)) throw Error("internal: leading multiplicity is not 1");
      continue;
    }
    if (!c.is_constant()) throw Error("internal: non-constant branching multiplicity");
    out.emplace(y, c.coefficient(0));
  }
  return out;
}

LaurentPoly nabla_hom_rank(ElementId x, ElementId y, const KLTable& table) { return table.h(y, x); }

TiltingCharacter tilting_character(CosetId coset, const CosetTable& cosets, const KLTable& table) {
  if (coset >= cosets.cosets().size()) throw UsageError("coset index out of range");
  if (cosets.group_ptr() != table.group_ptr()) throw OwnerMismatch("coset table and KL table over different groups");
  const ElementId x = cosets.coset(coset).longest;
  return TiltingCharacter{table.kl_basis(x), x, cosets.group().longest()};
}

}  // namespace klcalc
