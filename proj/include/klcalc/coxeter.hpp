#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace klcalc {

// Bit s-1 is set when generator s (1-based) belongs to the set.
using GenMask = std::uint64_t;
using IntMatrix = std::vector<std::vector<int>>;

inline GenMask gen_bit(int s) { return GenMask{1} << (s - 1); }
inline bool mask_has(GenMask m, int s) { return (m >> (s - 1)) & 1U; }

GenMask parse_subset(std::string_view text, int rank);
std::string subset_string(GenMask mask, int rank);

class CoxeterSystem;
using SystemPtr = std::shared_ptr<const CoxeterSystem>;

// A group element with its canonical key and cached length and descents.
// For crystallographic systems the key is the column-major matrix of the
// images of the simple roots in simple-root coordinates; for dihedral
// systems it is {first letter, length} of the alternating normal form.
class Element {
 public:
  const CoxeterSystem& owner() const { return *owner_; }
  const SystemPtr& owner_ptr() const { return owner_; }
  const std::vector<int>& key() const { return key_; }
  int length() const { return length_; }
  GenMask left_descents() const { return left_; }
  GenMask right_descents() const { return right_; }
  bool has_left_descent(int s) const { return mask_has(left_, s); }
  bool has_right_descent(int s) const { return mask_has(right_, s); }
  bool is_identity() const { return length_ == 0; }

  friend bool operator==(const Element& a, const Element& b) {
    return a.owner_ == b.owner_ && a.key_ == b.key_;
  }
  // Orders by length, then key. Both elements must share an owner.
  friend bool operator<(const Element& a, const Element& b) {
    if (a.length_ != b.length_) return a.length_ < b.length_;
    return a.key_ < b.key_;
  }

 private:
  friend class CoxeterSystem;
  SystemPtr owner_;
  std::vector<int> key_;
  int length_ = 0;
  GenMask left_ = 0;
  GenMask right_ = 0;
};

struct ElementHash {
  std::size_t operator()(const Element& w) const;
};

class CoxeterSystem : public std::enable_shared_from_this<CoxeterSystem> {
 public:
  // Accepts a type label ("A3", "B2", "C3", "D4", "E6", "F4", "G2", "I2(5)")
  // or a Coxeter matrix as JSON ("[[1,3],[3,1]]") or rows separated by ';'.
  static SystemPtr build(std::string_view descriptor);
  static SystemPtr from_coxeter_matrix(const IntMatrix& m);
  // Crystallographic system from a Cartan matrix A with A[i][j] = <a_i^v, a_j>.
  static SystemPtr from_cartan_matrix(const IntMatrix& a);

  int rank() const { return rank_; }
  const IntMatrix& coxeter_matrix() const { return coxeter_; }
  const std::string& type_label() const { return label_; }
  const std::string& descriptor() const { return descriptor_; }
  bool is_crystallographic() const { return crystallographic_; }
  int dihedral_order() const { return dihedral_m_; }

  const IntMatrix& cartan_matrix() const;
  // Positive roots and coroots in simple (co)root coordinates, simple ones
  // first in generator order. Crystallographic systems only.
  const IntMatrix& positive_roots() const;
  const IntMatrix& positive_coroots() const;

  int num_reflections() const { return num_reflections_; }
  const mpz_class& order() const { return order_; }

  Element identity() const;
  Element generator(int s) const;
  Element from_word(std::span<const int> word) const;
  // "2132"; generators of index >= 10 need the comma form "10,2,3".
  Element parse_word(std::string_view text) const;
  // The letters of a word, not necessarily reduced.
  std::vector<int> parse_letters(std::string_view text) const;
  std::vector<int> reduced_word(const Element& w) const;
  std::string word_string(const Element& w) const;

  Element right_mul(const Element& w, int s) const;
  Element left_mul(int s, const Element& w) const;
  Element multiply(const Element& w, const Element& u) const;
  Element inverse(const Element& w) const;

  // Image of a root (simple-root coordinates) under w.
  std::vector<int> act_on_root(const Element& w, std::span<const int> root) const;

  bool bruhat_leq(const Element& y, const Element& x) const;

  // Breadth-first closure under right multiplication by generators.
  std::vector<Element> enumerate(std::size_t limit = 5'000'000) const;
  Element longest_element() const;

  void check_owner(const Element& w) const;

 private:
  CoxeterSystem() = default;
  void init_crystallographic(IntMatrix cartan);
  void init_dihedral(int m);
  Element make_crystallographic(std::vector<int> key) const;
  Element make_dihedral(int first, int len) const;
  void check_generator(int s) const;

  int rank_ = 0;
  IntMatrix coxeter_;
  std::string label_;
  std::string descriptor_;
  bool crystallographic_ = false;
  int dihedral_m_ = 0;
  IntMatrix cartan_;
  IntMatrix roots_;
  IntMatrix coroots_;
  int num_reflections_ = 0;
  mpz_class order_;

  mutable std::mutex bruhat_mutex_;
  mutable std::map<std::pair<std::vector<int>, std::vector<int>>, bool> bruhat_memo_;
};

// Component labels of a Coxeter matrix ("A2", "B3", "I2(5)", ...); throws
// InfiniteType when some component is not of finite type.
std::vector<std::string> classify_coxeter_matrix(const IntMatrix& m);

Element multiply(const Element& w, const Element& u);
Element inverse(const Element& w);
bool bruhat_leq(const Element& y, const Element& x);

using ElementId = std::uint32_t;

// Dense indexing of all elements of a finite group. Ids follow the order
// (length, key); id 0 is the identity.
class Enumeration {
 public:
  static std::shared_ptr<const Enumeration> build(SystemPtr system, std::size_t limit = 5'000'000);

  const CoxeterSystem& system() const { return *system_; }
  const SystemPtr& system_ptr() const { return system_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<Element>& elements() const { return elements_; }
  const Element& element(ElementId id) const { return elements_[id]; }
  ElementId id_of(const Element& w) const;
  ElementId identity() const { return 0; }
  ElementId longest() const { return static_cast<ElementId>(elements_.size() - 1); }

  ElementId right(ElementId w, int s) const { return right_[w * rank_ + (s - 1)]; }
  ElementId left(int s, ElementId w) const { return left_[w * rank_ + (s - 1)]; }
  int length(ElementId w) const { return elements_[w].length(); }
  GenMask left_descents(ElementId w) const { return elements_[w].left_descents(); }
  GenMask right_descents(ElementId w) const { return elements_[w].right_descents(); }
  int first_left_descent(ElementId w) const;
  ElementId multiply(ElementId w, ElementId u) const;

  bool bruhat_leq(ElementId y, ElementId x) const;
  // Ids of [e, x] in increasing id order.
  std::vector<ElementId> lower_interval(ElementId x) const;

 private:
  Enumeration() = default;
  void build_intervals() const;

  SystemPtr system_;
  int rank_ = 0;
  std::vector<Element> elements_;
  std::map<std::vector<int>, ElementId> index_;
  std::vector<ElementId> right_;
  std::vector<ElementId> left_;
  mutable std::once_flag intervals_once_;
  mutable std::vector<std::vector<std::uint64_t>> intervals_;
};

using EnumerationPtr = std::shared_ptr<const Enumeration>;

// Weight in the basis of fundamental weights, exact rational coordinates.
struct Weight {
  SystemPtr owner;
  std::vector<mpq_class> coords;

  static Weight parse(SystemPtr owner, std::string_view text);
  static Weight zero(SystemPtr owner);
  static Weight rho(SystemPtr owner);
  static Weight fundamental(SystemPtr owner, int i);

  std::string to_string() const;
  Weight operator+(const Weight& other) const;
  Weight operator-(const Weight& other) const;
  friend bool operator==(const Weight& a, const Weight& b) { return a.owner == b.owner && a.coords == b.coords; }
};

// <weight, coroot> with the coroot in simple-coroot coordinates.
mpq_class pair_with_coroot(const Weight& w, std::span<const int> coroot);

Weight act(const Element& w, const Weight& lambda);
// w . lambda = w(lambda + rho) - rho
Weight dot_action(const Element& w, const Weight& lambda);

struct IsotropyGroups {
  // Generating reflections given by positive roots (simple-root coordinates):
  // the canonical simple systems of the integral and the singular subsystems.
  IntMatrix integral_generators;
  IntMatrix singular_generators;
  IntMatrix integral_generator_coroots;
  bool integral = false;
};

IsotropyGroups isotropy_groups(const Weight& lambda);

}  // namespace klcalc
