#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "klcalc/andersen.hpp"
#include "klcalc/errors.hpp"
#include "klcalc/filtration.hpp"

namespace py = pybind11;
using namespace klcalc;

namespace {

py::object to_int(const mpz_class& z) { return py::module_::import("builtins").attr("int")(z.get_str()); }

// A finite Coxeter group together with its lazily filled KL table.
class Group {
 public:
  explicit Group(const std::string& type)
      : group_(Enumeration::build(CoxeterSystem::build(type))), table_(std::make_shared<KLTable>(group_)) {}

  const CoxeterSystem& system() const { return group_->system(); }
  std::size_t size() const { return group_->size(); }
  ElementId id(const std::string& word) const { return group_->id_of(system().parse_word(word)); }
  std::string canonical(const std::string& word) const { return system().word_string(system().parse_word(word)); }
  int length(const std::string& word) const { return system().parse_word(word).length(); }
  bool bruhat_leq(const std::string& y, const std::string& x) const { return group_->bruhat_leq(id(y), id(x)); }

  std::string h(const std::string& y, const std::string& x) const { return table_->h(id(y), id(x)).to_string('v'); }
  std::string P(const std::string& y, const std::string& x) const {
    const LaurentPoly& hv = table_->h(id(y), id(x));
    if (hv.is_zero()) return "0";
    return h_to_P(hv, group_->length(id(x)) - group_->length(id(y))).to_string('q');
  }
  py::object mu(const std::string& y, const std::string& x) const { return to_int(table_->mu(id(y), id(x))); }

  std::vector<std::pair<std::string, std::string>> kl_basis(const std::string& x) const {
    std::vector<std::pair<std::string, std::string>> out;
    const ElementId xi = id(x);
    for (ElementId y : table_->support(xi))
      out.emplace_back(system().word_string(group_->element(y)), table_->h(y, xi).to_string('v'));
    return out;
  }

  std::vector<std::string> elements() const {
    std::vector<std::string> out;
    for (const auto& w : group_->elements()) out.push_back(system().word_string(w));
    return out;
  }

  std::string andersen(const std::string& singular, const std::string& ybar, const std::string& xbar) const {
    Block block(descriptor(singular), table_);
    return andersen_layers(block, system().parse_word(ybar), system().parse_word(xbar)).to_json().dump();
  }

  std::string table(const std::string& singular) const {
    Block block(descriptor(singular), table_);
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const auto& r : full_block_table(block)) list.push_back(r.to_json());
    return list.dump();
  }

 private:
  BlockDescriptor descriptor(const std::string& singular) const {
    return BlockDescriptor{group_->system_ptr(), parse_subset(singular, system().rank()), std::nullopt};
  }

  EnumerationPtr group_;
  std::shared_ptr<KLTable> table_;
};

std::vector<std::vector<LaurentPoly>> parse_matrix(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::vector<LaurentPoly>> out;
  for (const auto& row : rows) {
    std::vector<LaurentPoly> r;
    for (const auto& e : row) r.push_back(LaurentPoly::parse(e));
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_klcalc, m) {
  m.doc() = "Exact Kazhdan-Lusztig polynomials and Andersen filtration layers";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<UsageError>(m, "UsageError", base.ptr());
  py::register_exception<ParityError>(m, "ParityError", base.ptr());
  py::register_exception<InfiniteType>(m, "InfiniteType", base.ptr());
  py::register_exception<NotDominant>(m, "NotDominant", base.ptr());
  py::register_exception<InsufficientTruncation>(m, "InsufficientTruncation", base.ptr());
  py::register_exception<RankDeficient>(m, "RankDeficient", base.ptr());

  m.def("poly_mul", [](const std::string& a, const std::string& b) {
    return (LaurentPoly::parse(a) * LaurentPoly::parse(b)).to_string();
  });
  m.def("h_to_P", [](const std::string& h, int ldiff) { return h_to_P(LaurentPoly::parse(h), ldiff).to_string('q'); });

  py::class_<Group>(m, "Group")
      .def(py::init<const std::string&>(), py::arg("type"))
      .def_property_readonly("type", [](const Group& g) { return g.system().type_label(); })
      .def_property_readonly("rank", [](const Group& g) { return g.system().rank(); })
      .def_property_readonly("order", [](const Group& g) { return to_int(g.system().order()); })
      .def_property_readonly("reflections", [](const Group& g) { return g.system().num_reflections(); })
      .def("__len__", &Group::size)
      .def("elements", &Group::elements)
      .def("canonical", &Group::canonical, py::arg("word"))
      .def("length", &Group::length, py::arg("word"))
      .def("bruhat_leq", &Group::bruhat_leq, py::arg("y"), py::arg("x"))
      .def("h", &Group::h, py::arg("y"), py::arg("x"))
      .def("P", &Group::P, py::arg("y"), py::arg("x"))
      .def("mu", &Group::mu, py::arg("y"), py::arg("x"))
      .def("kl_basis", &Group::kl_basis, py::arg("x"))
      .def("_andersen", &Group::andersen)
      .def("_table", &Group::table);

  m.def(
      "group_info",
      [](const std::string& type) {
        auto sys = CoxeterSystem::build(type);
        py::dict d;
        d["type"] = sys->type_label();
        d["descriptor"] = sys->descriptor();
        d["rank"] = sys->rank();
        d["order"] = to_int(sys->order());
        d["longest_length"] = sys->num_reflections();
        return d;
      },
      py::arg("type"));

  m.def(
      "smith_valuations",
      [](const std::vector<std::vector<std::string>>& rows, std::optional<int> truncation) {
        return smith_valuations(PSeriesMatrix::from_polys(parse_matrix(rows), truncation));
      },
      py::arg("matrix"), py::arg("truncation") = py::none());

  m.def(
      "gysin_pieces",
      [](const std::string& h, int ldiff) {
        GradedSequenceModel model = gysin_model(LaurentPoly::parse(h), ldiff);
        return py::make_tuple(model.cokernel_pieces, model.free_rank, model.cokernel_degrees());
      },
      py::arg("h"), py::arg("ldiff"));
}
