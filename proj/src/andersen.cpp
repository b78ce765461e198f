#include "klcalc/andersen.hpp"

#include <algorithm>
#include <bit>

#include "klcalc/errors.hpp"
#include "klcalc/filtration.hpp"

namespace klcalc {

nlohmann::ordered_json integer_json(const mpz_class& value) {
  if (value.fits_slong_p()) return static_cast<std::int64_t>(value.get_si());
  return value.get_str();
}

nlohmann::ordered_json AndersenReport::to_json() const {
  nlohmann::ordered_json j;
  j["ybar"] = ybar;
  j["xbar"] = xbar;
  j["y"] = y;
  j["x"] = x;
  j["ldiff"] = ldiff;
  j["P"] = P.to_string('q');
  j["h"] = h.to_string('v');
  nlohmann::ordered_json layer_obj = nlohmann::ordered_json::object();
  for (const auto& [i, dim] : layers) layer_obj[std::to_string(i)] = integer_json(dim);
  j["layers"] = layer_obj;
  j["total"] = integer_json(total);
  return j;
}

BlockDescriptor block_from_weight(const Weight& lambda) {
  const CoxeterSystem& sys = *lambda.owner;
  if (!sys.is_crystallographic()) throw Unsupported("weights need a crystallographic system");
  const Weight shifted = lambda + Weight::rho(lambda.owner);
  const auto& coroots = sys.positive_coroots();
  for (std::size_t k = 0; k < coroots.size(); ++k) {
    mpq_class p = pair_with_coroot(shifted, coroots[k]);
    if (p.get_den() == 1 && p < 0)
      throw NotDominant("weight " + lambda.to_string() + " is not rho-dominant: <lambda+rho, coroot " +
                        std::to_string(k + 1) + "> = " + p.get_str());
  }
  IsotropyGroups iso = isotropy_groups(lambda);
  const auto& cartan = sys.cartan_matrix();
  const std::size_t n = iso.integral_generators.size();
  IntMatrix sub(n, std::vector<int>(n, 0));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) {
      int sum = 0;
      const auto& beta = iso.integral_generators[l];
      const auto& cobeta = iso.integral_generator_coroots[k];
      for (std::size_t i = 0; i < beta.size(); ++i)
        for (std::size_t j = 0; j < cobeta.size(); ++j) sum += beta[i] * cobeta[j] * cartan[j][i];
      sub[k][l] = sum;
    }
  BlockDescriptor block;
  block.ambient = CoxeterSystem::from_cartan_matrix(sub);
  for (std::size_t k = 0; k < n; ++k)
    if (pair_with_coroot(shifted, iso.integral_generator_coroots[k]) == 0) block.singular_subset |= gen_bit(static_cast<int>(k) + 1);
  if (static_cast<std::size_t>(std::popcount(block.singular_subset)) != iso.singular_generators.size())
    throw Error("internal: singular subsystem is not standard parabolic in the integral subsystem");
  block.provenance = lambda;
  return block;
}

namespace {

EnumerationPtr block_group(const BlockDescriptor& d, const std::shared_ptr<KLTable>& kl) {
  if (!kl) return Enumeration::build(d.ambient);
  if (kl->group().system().descriptor() != d.ambient->descriptor())
    throw OwnerMismatch("KL table belongs to a different group");
  return kl->group_ptr();
}

}  // namespace

Block::Block(BlockDescriptor descriptor, std::shared_ptr<KLTable> kl)
    : descriptor_(std::move(descriptor)),
      group_(block_group(descriptor_, kl)),
      cosets_(CosetTable::build(group_, descriptor_.singular_subset)),
      kl_(kl ? std::move(kl) : std::make_shared<KLTable>(group_)) {}

AndersenReport andersen_layers(const Block& block, CosetId ybar, CosetId xbar) {
  const CosetTable& cosets = block.cosets();
  if (ybar >= cosets.cosets().size() || xbar >= cosets.cosets().size()) throw UsageError("coset index out of range");
  const Enumeration& g = *block.group();
  const CoxeterSystem& sys = g.system();
  const Coset& yc = cosets.coset(ybar);
  const Coset& xc = cosets.coset(xbar);
  AndersenReport r;
  r.ybar = sys.word_string(g.element(yc.shortest));
  r.xbar = sys.word_string(g.element(xc.shortest));
  r.y = sys.word_string(g.element(yc.longest));
  r.x = sys.word_string(g.element(xc.longest));
  r.y_id = yc.longest;
  r.x_id = xc.longest;
  r.ldiff = g.length(xc.longest) - g.length(yc.longest);
  if (g.bruhat_leq(yc.longest, xc.longest)) {
    r.h = block.kl().h(yc.longest, xc.longest);
    r.P = h_to_P(r.h, r.ldiff);
    for (const auto& [i, c] : r.h.terms()) r.layers[i] = c;
    r.total = r.P.at_one();
  } else {
    r.total = 0;
  }
  return r;
}

AndersenReport andersen_layers(const Block& block, const Element& ybar, const Element& xbar) {
  return andersen_layers(block, block.cosets().coset_of(ybar), block.cosets().coset_of(xbar));
}

std::vector<AndersenReport> full_block_table(const Block& block) {
  const CosetTable& cosets = block.cosets();
  const Enumeration& g = *block.group();
  std::vector<CosetId> order(cosets.cosets().size());
  for (CosetId c = 0; c < order.size(); ++c) order[c] = c;
  std::sort(order.begin(), order.end(),
            [&](CosetId a, CosetId b) { return cosets.coset(a).longest < cosets.coset(b).longest; });
  std::vector<AndersenReport> out;
  for (CosetId xc : order)
    for (CosetId yc : order)
      if (g.bruhat_leq(cosets.coset(yc).longest, cosets.coset(xc).longest)) out.push_back(andersen_layers(block, yc, xc));
  return out;
}

bool cross_check(const AndersenReport& report) {
  LaurentPoly restated;
  mpz_class sum = 0;
  for (const auto& [i, dim] : report.layers) {
    if (dim == 0) continue;
    if (dim < 0 || i < 0 || i > report.ldiff || (report.ldiff - i) % 2 != 0) return false;
    restated += LaurentPoly::monomial((report.ldiff - i) / 2, dim);
    sum += dim;
  }
  if (!(restated == report.P) || sum != report.total) return false;
  try {
    GradedSequenceModel model = gysin_model(report.h, report.ldiff);
    if (!model.is_selfdual()) return false;
    std::map<int, int> dims = pairing_layer_dims(model.pairing_matrix());
    std::map<int, mpz_class> expected;
    for (const auto& [i, dim] : report.layers)
      if (dim != 0) expected[i] = dim;
    std::map<int, mpz_class> got;
    for (const auto& [i, dim] : dims) got[i] = dim;
    return got == expected;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace klcalc
