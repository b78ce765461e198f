#include "klcalc/parabolic.hpp"

#include <bit>
#include <map>

#include "klcalc/errors.hpp"

namespace klcalc {

namespace {

void check_subset(const Enumeration& g, GenMask subset) {
  const int r = g.system().rank();
  if (r < 64 && (subset >> r) != 0) throw UsageError("subset contains generators outside 1.." + std::to_string(r));
}

ElementId strip_right(const Enumeration& g, ElementId w, GenMask subset) {
  while (true) {
    GenMask d = g.right_descents(w) & subset;
    if (d == 0) return w;
    w = g.right(w, std::countr_zero(d) + 1);
  }
}

ElementId subgroup_longest(const Enumeration& g, GenMask subset) {
  ElementId w = g.identity();
  while (true) {
    GenMask up = subset & ~g.right_descents(w);
    if (up == 0) return w;
    w = g.right(w, std::countr_zero(up) + 1);
  }
}

}  // namespace

CosetTable CosetTable::build(EnumerationPtr group, GenMask subset) {
  const Enumeration& g = *group;
  check_subset(g, subset);
  CosetTable t;
  t.group_ = group;
  t.subset_ = subset;
  t.w_I_ = subgroup_longest(g, subset);
  const auto w_I_word = g.system().reduced_word(g.element(t.w_I_));
  std::map<ElementId, CosetId> by_shortest;
  std::vector<ElementId> shortest(g.size());
  for (ElementId w = 0; w < g.size(); ++w) {
    shortest[w] = strip_right(g, w, subset);
    by_shortest.emplace(shortest[w], 0);
  }
  // Ids already follow (length, key), so map order is the coset order.
  for (auto& [rep, id] : by_shortest) {
    id = t.cosets_.size();
    ElementId longest = rep;
    for (int s : w_I_word) longest = g.right(longest, s);
    t.cosets_.push_back(Coset{g.element(rep).key(), rep, longest});
  }
  t.coset_index_.resize(g.size());
  for (ElementId w = 0; w < g.size(); ++w) t.coset_index_[w] = by_shortest.at(shortest[w]);
  t.subgroup_order_ = g.size() / t.cosets_.size();
  return t;
}

CosetId CosetTable::coset_of(const Element& w) const { return coset_index_[group_->id_of(w)]; }

CosetTable coset_decomposition(EnumerationPtr group, GenMask subset) { return CosetTable::build(std::move(group), subset); }

LaurentPoly poincare_poly(const Enumeration& g, GenMask subset) {
  check_subset(g, subset);
  const int top = g.length(subgroup_longest(g, subset));
  std::vector<LaurentPoly::Term> terms;
  for (ElementId z = 0; z < g.size(); ++z)
    if (strip_right(g, z, subset) == g.identity()) terms.emplace_back(top - 2 * g.length(z), 1);
  return LaurentPoly(std::move(terms));
}

}  // namespace klcalc
