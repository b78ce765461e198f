#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "klcalc/coxeter.hpp"
#include "klcalc/hecke.hpp"
#include "klcalc/parabolic.hpp"

namespace klcalc {

// The pair W_lambda-bar (ambient) and W_lambda (standard parabolic, given by
// a subset of the ambient simple reflections).
struct BlockDescriptor {
  SystemPtr ambient;
  GenMask singular_subset = 0;
  std::optional<Weight> provenance;
};

// Requires lambda rho-dominant: <lambda + rho, beta^v> is never a negative
// integer. The integral subsystem is re-presented as its own Coxeter system
// via its canonical simple roots.
BlockDescriptor block_from_weight(const Weight& lambda);

struct AndersenReport {
  std::string ybar;  // reduced word of the shortest representative
  std::string xbar;
  std::string y;  // reduced word of the longest representative
  std::string x;
  ElementId y_id = 0;
  ElementId x_id = 0;
  int ldiff = 0;
  LaurentPoly P;  // in q
  LaurentPoly h;  // in v
  std::map<int, mpz_class> layers;  // i -> dim of the i-th subquotient, zeros omitted
  mpz_class total;

  nlohmann::ordered_json to_json() const;
};

// Enumeration, cosets and KL table of one block, shared by its queries.
class Block {
 public:
  explicit Block(BlockDescriptor descriptor, std::shared_ptr<KLTable> kl = nullptr);

  const BlockDescriptor& descriptor() const { return descriptor_; }
  const EnumerationPtr& group() const { return group_; }
  const CosetTable& cosets() const { return cosets_; }
  const KLTable& kl() const { return *kl_; }
  const std::shared_ptr<KLTable>& kl_ptr() const { return kl_; }

 private:
  BlockDescriptor descriptor_;
  EnumerationPtr group_;
  CosetTable cosets_;
  std::shared_ptr<KLTable> kl_;
};

AndersenReport andersen_layers(const Block& block, CosetId ybar, CosetId xbar);
// Cosets named by any of their elements.
AndersenReport andersen_layers(const Block& block, const Element& ybar, const Element& xbar);

// One report per ordered coset pair with y <= x, ordered by x then y, each by
// (length, key) of the longest representative.
std::vector<AndersenReport> full_block_table(const Block& block);

// Rebuilds the graded sequence model from report.h and compares the induced
// pairing-filtration layers with report.layers; also checks the report's own
// parity, sum and total invariants.
bool cross_check(const AndersenReport& report);

// Exact integer as JSON: a number when it fits in 64 bits, else a string.
nlohmann::ordered_json integer_json(const mpz_class& value);

}  // namespace klcalc
