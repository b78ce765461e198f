#pragma once

#include <vector>

#include "klcalc/coxeter.hpp"
#include "klcalc/laurent.hpp"

namespace klcalc {

// Left cosets x W_I of a standard parabolic subgroup.
struct Coset {
  std::vector<int> key;  // canonical key of the shortest representative
  ElementId shortest;
  ElementId longest;
};

using CosetId = std::size_t;

class CosetTable {
 public:
  static CosetTable build(EnumerationPtr group, GenMask subset);

  const Enumeration& group() const { return *group_; }
  const EnumerationPtr& group_ptr() const { return group_; }
  GenMask subset() const { return subset_; }
  ElementId longest_of_subgroup() const { return w_I_; }
  std::size_t subgroup_order() const { return subgroup_order_; }

  // Ordered by (length, key) of the shortest representative.
  const std::vector<Coset>& cosets() const { return cosets_; }
  const Coset& coset(CosetId c) const { return cosets_[c]; }
  CosetId coset_of(ElementId w) const { return coset_index_[w]; }
  CosetId coset_of(const Element& w) const;

 private:
  EnumerationPtr group_;
  GenMask subset_ = 0;
  ElementId w_I_ = 0;
  std::size_t subgroup_order_ = 1;
  std::vector<Coset> cosets_;
  std::vector<CosetId> coset_index_;
};

CosetTable coset_decomposition(EnumerationPtr group, GenMask subset);

// sum over z in W_I of v^(l(w_I) - 2 l(z))
LaurentPoly poincare_poly(const Enumeration& group, GenMask subset);

}  // namespace klcalc
