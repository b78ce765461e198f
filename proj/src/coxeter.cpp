#include "klcalc/coxeter.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <bit>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "klcalc/errors.hpp"

namespace klcalc {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

int parse_int(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string("invalid ") + what + ": '" + s + "'");
  }
}

std::string matrix_json(const IntMatrix& m) {
  return nlohmann::json(m).dump();
}

mpz_class factorial(int n) {
  mpz_class f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// ---- classification of finite Coxeter graphs --------------------------------

struct ComponentInfo {
  std::string label;
  mpz_class order;
  int reflections = 0;
};

ComponentInfo component_info(char family, int n, int m = 0) {
  ComponentInfo c;
  switch (family) {
    case 'A':
      c = {"A" + std::to_string(n), factorial(n + 1), n * (n + 1) / 2};
      break;
    case 'B': {
      mpz_class o = factorial(n);
      o <<= n;
      c = {"B" + std::to_string(n), o, n * n};
      break;
    }
    case 'D': {
      mpz_class o = factorial(n);
      o <<= (n - 1);
      c = {"D" + std::to_string(n), o, n * (n - 1)};
      break;
    }
    case 'E':
      if (n == 6) c = {"E6", 51840, 36};
      if (n == 7) c = {"E7", 2903040, 63};
      if (n == 8) c = {"E8", 696729600, 120};
      break;
    case 'F':
      c = {"F4", 1152, 24};
      break;
    case 'G':
      c = {"G2", 12, 6};
      break;
    case 'H':
      if (n == 3) c = {"H3", 120, 15};
      if (n == 4) c = {"H4", 14400, 60};
      break;
    case 'I':
      c = {"I2(" + std::to_string(m) + ")", 2 * m, m};
      break;
    default:
      break;
  }
  return c;
}

[[noreturn]] void infinite(const std::string& why) { throw InfiniteType("Coxeter matrix is not of finite type: " + why); }

ComponentInfo classify_component(const IntMatrix& m, const std::vector<int>& nodes) {
  const int n = static_cast<int>(nodes.size());
  if (n == 1) return component_info('A', 1);
  std::vector<std::vector<std::pair<int, int>>> adj(n);
  int edges = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      int label = m[nodes[a]][nodes[b]];
      if (label != 2) {
        adj[a].emplace_back(b, label);
        adj[b].emplace_back(a, label);
        ++edges;
      }
    }
  if (edges != n - 1) infinite("Coxeter graph has a cycle");
  if (n == 2) {
    int label = adj[0][0].second;
    if (label == 3) return component_info('A', 2);
    if (label == 4) return component_info('B', 2);
    if (label == 6) return component_info('G', 2);
    return component_info('I', 2, label);
  }
  std::vector<int> branch;
  for (int a = 0; a < n; ++a) {
    if (adj[a].size() > 3) infinite("vertex of degree > 3");
    if (adj[a].size() == 3) branch.push_back(a);
    for (auto [b, label] : adj[a])
      if (label >= 6) infinite("edge label >= 6 in rank > 2");
  }
  if (branch.size() > 1) infinite("more than one branch vertex");
  if (branch.size() == 1) {
    std::vector<int> arms;
    for (auto [start, label] : adj[branch[0]]) {
      int len = 1;
      int prev = branch[0];
      int cur = start;
      while (true) {
        int next = -1;
        for (auto [b, l2] : adj[cur]) {
          if (l2 != 3) infinite("branched graph with label != 3");
          if (b != prev) next = b;
        }
        if (label != 3) infinite("branched graph with label != 3");
        if (next < 0) break;
        prev = cur;
        cur = next;
        ++len;
      }
      arms.push_back(len);
    }
    std::sort(arms.begin(), arms.end());
    if (arms[0] == 1 && arms[1] == 1) return component_info('D', n);
    if (arms[0] == 1 && arms[1] == 2 && arms[2] <= 4) return component_info('E', n);
    infinite("branched graph not of type D or E");
  }
  // path
  int end = 0;
  while (adj[end].size() != 1) ++end;
  std::vector<int> labels;
  int prev = -1;
  int cur = end;
  while (true) {
    int next = -1;
    int label = 0;
    for (auto [b, l] : adj[cur])
      if (b != prev) {
        next = b;
        label = l;
      }
    if (next < 0) break;
    labels.push_back(label);
    prev = cur;
    cur = next;
  }
  int special = 0;
  std::size_t where = 0;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] != 3) {
      ++special;
      where = i;
    }
  if (special == 0) return component_info('A', n);
  if (special > 1) infinite("path with several labels > 3");
  bool at_end = where == 0 || where + 1 == labels.size();
  if (labels[where] == 4) {
    if (at_end) return component_info('B', n);
    if (n == 4) return component_info('F', 4);
  }
  if (labels[where] == 5 && at_end && (n == 3 || n == 4)) return component_info('H', n);
  infinite("path graph not of finite type");
}

std::vector<std::vector<int>> components_of(const IntMatrix& m) {
  const int n = static_cast<int>(m.size());
  std::vector<int> comp(n, -1);
  std::vector<std::vector<int>> out;
  for (int i = 0; i < n; ++i) {
    if (comp[i] >= 0) continue;
    std::vector<int> nodes;
    std::deque<int> queue{i};
    comp[i] = static_cast<int>(out.size());
    while (!queue.empty()) {
      int a = queue.front();
      queue.pop_front();
      nodes.push_back(a);
      for (int b = 0; b < n; ++b)
        if (b != a && m[a][b] != 2 && comp[b] < 0) {
          comp[b] = comp[i];
          queue.push_back(b);
        }
    }
    std::sort(nodes.begin(), nodes.end());
    out.push_back(std::move(nodes));
  }
  return out;
}

void validate_coxeter_matrix(const IntMatrix& m) {
  const std::size_t n = m.size();
  if (n > 64) throw Unsupported("rank above 64 is not supported");
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) throw ParseError("Coxeter matrix must be square");
    if (m[i][i] != 1) throw ParseError("Coxeter matrix must have 1 on the diagonal");
    for (std::size_t j = 0; j < n; ++j) {
      if (m[i][j] != m[j][i]) throw ParseError("Coxeter matrix must be symmetric");
      if (i != j && m[i][j] <= 0) infinite("infinite bond");
      if (i != j && m[i][j] == 1) throw ParseError("off-diagonal Coxeter entries must be >= 2");
    }
  }
}

// ---- presets ----------------------------------------------------------------

IntMatrix chain_cartan(int n) {
  IntMatrix a(n, std::vector<int>(n, 0));
  for (int i = 0; i < n; ++i) a[i][i] = 2;
  for (int i = 0; i + 1 < n; ++i) a[i][i + 1] = a[i + 1][i] = -1;
  return a;
}

IntMatrix preset_cartan(char family, int n) {
  switch (family) {
    case 'A':
      return chain_cartan(n);
    case 'B': {
      IntMatrix a = chain_cartan(n);
      a[n - 1][n - 2] = -2;
      return a;
    }
    case 'C': {
      IntMatrix a = chain_cartan(n);
      a[n - 2][n - 1] = -2;
      return a;
    }
    case 'D': {
      IntMatrix a = chain_cartan(n);
      a[n - 2][n - 1] = a[n - 1][n - 2] = 0;
      a[n - 3][n - 1] = a[n - 1][n - 3] = -1;
      return a;
    }
    case 'E': {
      IntMatrix a(n, std::vector<int>(n, 0));
      for (int i = 0; i < n; ++i) a[i][i] = 2;
      auto bond = [&](int i, int j) { a[i - 1][j - 1] = a[j - 1][i - 1] = -1; };
      bond(1, 3);
      bond(2, 4);
      for (int i = 3; i < n; ++i) bond(i, i + 1);
      return a;
    }
    case 'F': {
      IntMatrix a = chain_cartan(4);
      a[2][1] = -2;
      return a;
    }
    case 'G': {
      IntMatrix a = chain_cartan(2);
      a[0][1] = -3;
      return a;
    }
    default:
      throw ParseError("unknown family");
  }
}

IntMatrix coxeter_from_cartan(const IntMatrix& a) {
  const std::size_t n = a.size();
  IntMatrix m(n, std::vector<int>(n, 1));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      int prod = a[i][j] * a[j][i];
      switch (prod) {
        case 0:
          m[i][j] = 2;
          break;
        case 1:
          m[i][j] = 3;
          break;
        case 2:
          m[i][j] = 4;
          break;
        case 3:
          m[i][j] = 6;
          break;
        default:
          infinite("Cartan product " + std::to_string(prod));
      }
    }
  return m;
}

struct Preset {
  std::string label;
  char family;
  int n;
  int m;  // dihedral order for I2(m)
};

std::optional<Preset> parse_preset(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) return std::nullopt;
  char family = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  if (family == 'I') {
    if (s.size() < 5 || s[1] != '2' || s[2] != '(' || s.back() != ')') return std::nullopt;
    int m = parse_int(s.substr(3, s.size() - 4), "dihedral order");
    if (m < 2) throw ParseError("I2(m) needs m >= 2");
    return Preset{"I2(" + std::to_string(m) + ")", 'I', 2, m};
  }
  if (std::string("ABCDEFG").find(family) == std::string::npos) return std::nullopt;
  std::string digits = s.substr(1);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    return std::nullopt;
  int n = parse_int(digits, "rank");
  bool ok = (family == 'A' && n >= 1) || ((family == 'B' || family == 'C') && n >= 2) || (family == 'D' && n >= 4) ||
            (family == 'E' && n >= 6 && n <= 8) || (family == 'F' && n == 4) || (family == 'G' && n == 2);
  if (!ok) throw ParseError("no finite Coxeter type " + s);
  if (n > 64) throw Unsupported("rank above 64 is not supported");
  return Preset{std::string(1, family) + std::to_string(n), family, n, 0};
}

IntMatrix parse_matrix_text(std::string_view text) {
  std::string s = trim(text);
  IntMatrix m;
  if (!s.empty() && s[0] == '[') {
    try {
      m = nlohmann::json::parse(s).get<IntMatrix>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("invalid matrix JSON: " + std::string(e.what()));
    }
  } else {
    for (const auto& row : split(s, ';')) {
      std::vector<int> r;
      for (const auto& cell : split(row, ',')) r.push_back(parse_int(cell, "matrix entry"));
      m.push_back(std::move(r));
    }
  }
  return m;
}

bool is_negative_root(const std::vector<int>& r) {
  for (int c : r)
    if (c != 0) return c < 0;
  return false;
}

int sign_of(std::span<const int> r) {
  for (int c : r)
    if (c != 0) return c < 0 ? -1 : 1;
  return 0;
}

}  // namespace

// ---- subsets ----------------------------------------------------------------

GenMask parse_subset(std::string_view text, int rank) {
  GenMask mask = 0;
  std::string s = trim(text);
  if (s.empty()) return 0;
  for (const auto& part : split(s, ',')) {
    int g = parse_int(part, "generator index");
    if (g < 1 || g > rank) throw ParseError("generator " + part + " out of range 1.." + std::to_string(rank));
    mask |= gen_bit(g);
  }
  return mask;
}

std::string subset_string(GenMask mask, int rank) {
  std::string out;
  for (int s = 1; s <= rank; ++s)
    if (mask_has(mask, s)) {
      if (!out.empty()) out += ",";
      out += std::to_string(s);
    }
  return out;
}

std::vector<std::string> classify_coxeter_matrix(const IntMatrix& m) {
  validate_coxeter_matrix(m);
  std::vector<std::string> labels;
  for (const auto& nodes : components_of(m)) labels.push_back(classify_component(m, nodes).label);
  return labels;
}

std::size_t ElementHash::operator()(const Element& w) const {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (int c : w.key()) h = (h ^ static_cast<std::size_t>(c + 0x9e3779b9)) * 0x100000001b3ULL;
  return h;
}

// ---- system construction ----------------------------------------------------

SystemPtr CoxeterSystem::build(std::string_view descriptor) {
  if (auto preset = parse_preset(descriptor)) {
    auto sys = std::shared_ptr<CoxeterSystem>(new CoxeterSystem());
    if (preset->family == 'I') {
      sys->init_dihedral(preset->m);
    } else {
      sys->init_crystallographic(preset_cartan(preset->family, preset->n));
    }
    sys->label_ = preset->label;
    sys->descriptor_ = preset->label;
    return sys;
  }
  std::string s = trim(descriptor);
  if (s.rfind("cartan:", 0) == 0) return from_cartan_matrix(parse_matrix_text(s.substr(7)));
  if (s.rfind("coxeter:", 0) == 0) s = s.substr(8);
  if (s.empty() || !(s[0] == '[' || std::isdigit(static_cast<unsigned char>(s[0]))))
    throw ParseError("unrecognized group descriptor '" + std::string(descriptor) + "'");
  return from_coxeter_matrix(parse_matrix_text(s));
}

SystemPtr CoxeterSystem::from_coxeter_matrix(const IntMatrix& m) {
  auto labels = classify_coxeter_matrix(m);
  const int n = static_cast<int>(m.size());
  // A single component equal to a preset's matrix is that preset.
  if (labels.size() == 1) {
    if (auto preset = parse_preset(labels[0]); preset && preset->family != 'H' && preset->family != 'I') {
      IntMatrix cartan = preset_cartan(preset->family, preset->n);
      if (coxeter_from_cartan(cartan) == m) return build(preset->label);
    }
  }
  if (n == 2 && labels.size() == 1 && labels[0][0] == 'I') {
    auto sys = std::shared_ptr<CoxeterSystem>(new CoxeterSystem());
    sys->init_dihedral(m[0][1]);
    sys->label_ = labels[0];
    sys->descriptor_ = labels[0];
    return sys;
  }
  IntMatrix cartan(n, std::vector<int>(n, 0));
  for (int i = 0; i < n; ++i) {
    cartan[i][i] = 2;
    for (int j = i + 1; j < n; ++j) {
      switch (m[i][j]) {
        case 2:
          break;
        case 3:
          cartan[i][j] = cartan[j][i] = -1;
          break;
        case 4:
          cartan[i][j] = -1;
          cartan[j][i] = -2;
          break;
        case 6:
          cartan[i][j] = -1;
          cartan[j][i] = -3;
          break;
        default:
          throw Unsupported("non-crystallographic component in a reducible or higher-rank system (" +
                            std::to_string(m[i][j]) + ")");
      }
    }
  }
  auto sys = std::shared_ptr<CoxeterSystem>(new CoxeterSystem());
  sys->init_crystallographic(std::move(cartan));
  sys->descriptor_ = "coxeter:" + matrix_json(m);
  return sys;
}

SystemPtr CoxeterSystem::from_cartan_matrix(const IntMatrix& a) {
  const std::size_t n = a.size();
  for (const auto& row : a)
    if (row.size() != n) throw ParseError("Cartan matrix must be square");
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i][i] != 2) throw ParseError("Cartan matrix must have 2 on the diagonal");
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && (a[i][j] > 0 || (a[i][j] == 0) != (a[j][i] == 0)))
        throw ParseError("invalid Cartan matrix entries");
  }
  IntMatrix cox = coxeter_from_cartan(a);
  classify_coxeter_matrix(cox);
  for (const char* label : {"A", "B", "C", "D", "E", "F", "G"}) {
    std::string candidate = std::string(label) + std::to_string(n);
    std::optional<Preset> preset;
    try {
      preset = parse_preset(candidate);
    } catch (const Error&) {
      continue;
    }
    if (preset && preset_cartan(preset->family, preset->n) == a) return build(preset->label);
  }
  auto sys = std::shared_ptr<CoxeterSystem>(new CoxeterSystem());
  sys->init_crystallographic(a);
  sys->descriptor_ = "cartan:" + matrix_json(a);
  return sys;
}

void CoxeterSystem::init_crystallographic(IntMatrix cartan) {
  rank_ = static_cast<int>(cartan.size());
  crystallographic_ = true;
  cartan_ = std::move(cartan);
  coxeter_ = coxeter_from_cartan(cartan_);
  auto labels = classify_coxeter_matrix(coxeter_);
  order_ = 1;
  num_reflections_ = 0;
  label_.clear();
  for (const auto& nodes : components_of(coxeter_)) {
    ComponentInfo info = classify_component(coxeter_, nodes);
    if (info.label[0] == 'H' || info.label[0] == 'I') throw Unsupported("non-crystallographic component " + info.label);
    order_ *= info.order;
    num_reflections_ += info.reflections;
    if (!label_.empty()) label_ += "x";
    label_ += info.label;
  }
  if (rank_ == 0) label_ = "A0";

  // Positive roots by closure under simple reflections, coroots alongside.
  std::map<std::vector<int>, std::size_t> seen;
  for (int i = 0; i < rank_; ++i) {
    std::vector<int> r(rank_, 0);
    r[i] = 1;
    seen.emplace(r, roots_.size());
    roots_.push_back(r);
    coroots_.push_back(r);
  }
  for (std::size_t k = 0; k < roots_.size(); ++k) {
    for (int j = 0; j < rank_; ++j) {
      const std::vector<int> beta = roots_[k];
      const std::vector<int> cobeta = coroots_[k];
      int pair = 0;
      int copair = 0;
      for (int i = 0; i < rank_; ++i) {
        pair += beta[i] * cartan_[j][i];
        copair += cobeta[i] * cartan_[i][j];
      }
      std::vector<int> image = beta;
      image[j] -= pair;
      if (is_negative_root(image) || seen.count(image)) continue;
      std::vector<int> coimage = cobeta;
      coimage[j] -= copair;
      seen.emplace(image, roots_.size());
      roots_.push_back(std::move(image));
      coroots_.push_back(std::move(coimage));
    }
  }
  if (static_cast<int>(roots_.size()) != num_reflections_)
    throw Error("internal: positive root count disagrees with classification");
}

void CoxeterSystem::init_dihedral(int m) {
  rank_ = 2;
  crystallographic_ = false;
  dihedral_m_ = m;
  coxeter_ = {{1, m}, {m, 1}};
  num_reflections_ = m;
  order_ = 2 * m;
}

const IntMatrix& CoxeterSystem::cartan_matrix() const {
  if (!crystallographic_) throw Unsupported("dihedral system " + label_ + " has no crystallographic root datum");
  return cartan_;
}

const IntMatrix& CoxeterSystem::positive_roots() const {
  if (!crystallographic_) throw Unsupported("dihedral system " + label_ + " has no crystallographic root datum");
  return roots_;
}

const IntMatrix& CoxeterSystem::positive_coroots() const {
  if (!crystallographic_) throw Unsupported("dihedral system " + label_ + " has no crystallographic root datum");
  return coroots_;
}

// ---- elements ---------------------------------------------------------------

Element CoxeterSystem::make_crystallographic(std::vector<int> key) const {
  Element w;
  w.owner_ = shared_from_this();
  const int r = rank_;
  std::vector<int> image(r);
  for (const auto& beta : roots_) {
    std::fill(image.begin(), image.end(), 0);
    for (int j = 0; j < r; ++j) {
      if (beta[j] == 0) continue;
      const int* col = key.data() + static_cast<std::ptrdiff_t>(j) * r;
      for (int i = 0; i < r; ++i) image[i] += beta[j] * col[i];
    }
    if (sign_of(image) < 0) {
      ++w.length_;
      // w(beta) = -alpha_s for a positive beta means s is a left descent.
      int nonzero = -1;
      int count = 0;
      for (int i = 0; i < r; ++i)
        if (image[i] != 0) {
          nonzero = i;
          ++count;
        }
      if (count == 1 && image[nonzero] == -1) w.left_ |= gen_bit(nonzero + 1);
    }
  }
  for (int s = 0; s < r; ++s)
    if (sign_of(std::span<const int>(key.data() + static_cast<std::ptrdiff_t>(s) * r, r)) < 0) w.right_ |= gen_bit(s + 1);
  w.key_ = std::move(key);
  return w;
}

Element CoxeterSystem::make_dihedral(int first, int len) const {
  Element w;
  w.owner_ = shared_from_this();
  const int m = dihedral_m_;
  if (len == 0) first = 0;
  if (len == m) first = 1;
  w.key_ = {first, len};
  w.length_ = len;
  if (len == m) {
    w.left_ = w.right_ = gen_bit(1) | gen_bit(2);
  } else if (len > 0) {
    int other = 3 - first;
    int last = (len % 2 == 1) ? first : other;
    w.left_ = gen_bit(first);
    w.right_ = gen_bit(last);
  }
  return w;
}

void CoxeterSystem::check_generator(int s) const {
  if (s < 1 || s > rank_) throw UsageError("generator " + std::to_string(s) + " out of range 1.." + std::to_string(rank_));
}

void CoxeterSystem::check_owner(const Element& w) const {
  if (w.owner_.get() != this) throw OwnerMismatch("element belongs to a different Coxeter system");
}

Element CoxeterSystem::identity() const {
  if (!crystallographic_) return make_dihedral(0, 0);
  std::vector<int> key(static_cast<std::size_t>(rank_) * rank_, 0);
  for (int i = 0; i < rank_; ++i) key[static_cast<std::size_t>(i) * rank_ + i] = 1;
  return make_crystallographic(std::move(key));
}

Element CoxeterSystem::generator(int s) const {
  check_generator(s);
  return right_mul(identity(), s);
}

Element CoxeterSystem::right_mul(const Element& w, int s) const {
  check_owner(w);
  check_generator(s);
  if (!crystallographic_) {
    const int m = dihedral_m_;
    const int k = w.length();
    const int a = w.key_[0];
    if (k == 0) return make_dihedral(s, 1);
    if (k == m) {
      int start = (m % 2 == 1) ? s : 3 - s;
      return make_dihedral(start, m - 1);
    }
    int last = (k % 2 == 1) ? a : 3 - a;
    return make_dihedral(a, last == s ? k - 1 : k + 1);
  }
  const int r = rank_;
  std::vector<int> key = w.key_;
  const int* col_s = w.key_.data() + static_cast<std::ptrdiff_t>(s - 1) * r;
  for (int j = 0; j < r; ++j) {
    int c = cartan_[s - 1][j];
    if (c == 0) continue;
    int* col = key.data() + static_cast<std::ptrdiff_t>(j) * r;
    for (int i = 0; i < r; ++i) col[i] -= c * col_s[i];
  }
  return make_crystallographic(std::move(key));
}

Element CoxeterSystem::left_mul(int s, const Element& w) const {
  check_owner(w);
  check_generator(s);
  if (!crystallographic_) {
    const int m = dihedral_m_;
    const int k = w.length();
    const int a = w.key_[0];
    if (k == 0) return make_dihedral(s, 1);
    if (k == m) return make_dihedral(3 - s, m - 1);
    if (a == s) return make_dihedral(3 - a, k - 1);
    return make_dihedral(s, k + 1);
  }
  const int r = rank_;
  std::vector<int> key = w.key_;
  for (int j = 0; j < r; ++j) {
    int* col = key.data() + static_cast<std::ptrdiff_t>(j) * r;
    int pair = 0;
    for (int i = 0; i < r; ++i) pair += col[i] * cartan_[s - 1][i];
    col[s - 1] -= pair;
  }
  return make_crystallographic(std::move(key));
}

Element CoxeterSystem::from_word(std::span<const int> word) const {
  Element w = identity();
  for (int s : word) w = right_mul(w, s);
  return w;
}

std::vector<int> CoxeterSystem::parse_letters(std::string_view text) const {
  std::string s = trim(text);
  std::vector<int> word;
  if (s.find(',') != std::string::npos) {
    for (const auto& part : split(s, ',')) word.push_back(parse_int(part, "generator index"));
  } else {
    for (char c : s) {
      if (std::isspace(static_cast<unsigned char>(c))) continue;
      if (!std::isdigit(static_cast<unsigned char>(c))) throw ParseError("invalid word '" + s + "'");
      word.push_back(c - '0');
    }
  }
  for (int g : word)
    if (g < 1 || g > rank_) throw ParseError("generator " + std::to_string(g) + " out of range in word '" + s + "'");
  return word;
}

Element CoxeterSystem::parse_word(std::string_view text) const { return from_word(parse_letters(text)); }

std::vector<int> CoxeterSystem::reduced_word(const Element& w) const {
  check_owner(w);
  std::vector<int> word;
  Element cur = w;
  while (!cur.is_identity()) {
    int s = std::countr_zero(cur.left_descents()) + 1;
    word.push_back(s);
    cur = left_mul(s, cur);
  }
  return word;
}

std::string CoxeterSystem::word_string(const Element& w) const {
  std::vector<int> word = reduced_word(w);
  std::string out;
  const bool commas = rank_ >= 10;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (commas && i > 0) out += ",";
    out += std::to_string(word[i]);
  }
  return out;
}

Element CoxeterSystem::multiply(const Element& w, const Element& u) const {
  check_owner(w);
  check_owner(u);
  Element out = w;
  for (int s : reduced_word(u)) out = right_mul(out, s);
  return out;
}

Element CoxeterSystem::inverse(const Element& w) const {
  std::vector<int> word = reduced_word(w);
  std::reverse(word.begin(), word.end());
  return from_word(word);
}

std::vector<int> CoxeterSystem::act_on_root(const Element& w, std::span<const int> root) const {
  check_owner(w);
  if (!crystallographic_) throw Unsupported("root action needs a crystallographic system");
  const int r = rank_;
  std::vector<int> image(r, 0);
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < r; ++i) image[i] += root[j] * w.key_[static_cast<std::size_t>(j) * r + i];
  return image;
}

bool CoxeterSystem::bruhat_leq(const Element& y, const Element& x) const {
  check_owner(y);
  check_owner(x);
  if (y.length() > x.length()) return false;
  if (y == x) return true;
  if (x.is_identity()) return false;
  if (y.is_identity()) return true;
  auto memo_key = std::make_pair(y.key(), x.key());
  {
    std::lock_guard lock(bruhat_mutex_);
    if (auto it = bruhat_memo_.find(memo_key); it != bruhat_memo_.end()) return it->second;
  }
  int s = std::countr_zero(x.left_descents()) + 1;
  Element sx = left_mul(s, x);
  bool result = y.has_left_descent(s) ? bruhat_leq(left_mul(s, y), sx) : bruhat_leq(y, sx);
  std::lock_guard lock(bruhat_mutex_);
  bruhat_memo_.emplace(std::move(memo_key), result);
  return result;
}

std::vector<Element> CoxeterSystem::enumerate(std::size_t limit) const {
  if (order_ > limit) throw Unsupported("group " + label_ + " of order " + order_.get_str() + " is too large to enumerate");
  std::vector<Element> out;
  std::unordered_set<Element, ElementHash> seen;
  out.push_back(identity());
  seen.insert(out.back());
  for (std::size_t k = 0; k < out.size(); ++k) {
    for (int s = 1; s <= rank_; ++s) {
      if (out[k].has_right_descent(s)) continue;
      Element ws = right_mul(out[k], s);
      if (seen.insert(ws).second) out.push_back(std::move(ws));
    }
  }
  return out;
}

Element CoxeterSystem::longest_element() const {
  Element w = identity();
  while (true) {
    int s = 1;
    while (s <= rank_ && w.has_right_descent(s)) ++s;
    if (s > rank_) return w;
    w = right_mul(w, s);
  }
}

Element multiply(const Element& w, const Element& u) {
  if (w.owner_ptr() != u.owner_ptr()) throw OwnerMismatch("elements belong to different Coxeter systems");
  return w.owner().multiply(w, u);
}

Element inverse(const Element& w) { return w.owner().inverse(w); }

bool bruhat_leq(const Element& y, const Element& x) {
  if (y.owner_ptr() != x.owner_ptr()) throw OwnerMismatch("elements belong to different Coxeter systems");
  return x.owner().bruhat_leq(y, x);
}

// ---- enumeration ------------------------------------------------------------

std::shared_ptr<const Enumeration> Enumeration::build(SystemPtr system, std::size_t limit) {
  auto e = std::shared_ptr<Enumeration>(new Enumeration());
  e->elements_ = system->enumerate(limit);
  std::sort(e->elements_.begin(), e->elements_.end());
  e->rank_ = system->rank();
  e->system_ = std::move(system);
  for (std::size_t i = 0; i < e->elements_.size(); ++i) e->index_.emplace(e->elements_[i].key(), static_cast<ElementId>(i));
  const std::size_t n = e->elements_.size();
  const int r = e->rank_;
  e->right_.resize(n * r);
  e->left_.resize(n * r);
  for (std::size_t i = 0; i < n; ++i)
    for (int s = 1; s <= r; ++s) {
      e->right_[i * r + (s - 1)] = e->index_.at(e->system_->right_mul(e->elements_[i], s).key());
      e->left_[i * r + (s - 1)] = e->index_.at(e->system_->left_mul(s, e->elements_[i]).key());
    }
  return e;
}

ElementId Enumeration::id_of(const Element& w) const {
  system_->check_owner(w);
  return index_.at(w.key());
}

int Enumeration::first_left_descent(ElementId w) const {
  return std::countr_zero(elements_[w].left_descents()) + 1;
}

ElementId Enumeration::multiply(ElementId w, ElementId u) const {
  ElementId out = w;
  for (int s : system_->reduced_word(elements_[u])) out = right(out, s);
  return out;
}

namespace {
constexpr std::size_t kIntervalLimit = 30000;
}

void Enumeration::build_intervals() const {
  const std::size_t n = size();
  const std::size_t words = (n + 63) / 64;
  intervals_.assign(n, std::vector<std::uint64_t>(words, 0));
  intervals_[0][0] = 1;
  for (ElementId x = 1; x < n; ++x) {
    int s = first_left_descent(x);
    ElementId sx = left(s, x);
    auto& cur = intervals_[x];
    cur = intervals_[sx];
    const auto& below = intervals_[sx];
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t bits = below[w];
      while (bits) {
        int b = std::countr_zero(bits);
        bits &= bits - 1;
        ElementId y = static_cast<ElementId>(w * 64 + b);
        ElementId sy = left(s, y);
        cur[sy / 64] |= std::uint64_t{1} << (sy % 64);
      }
    }
  }
}

bool Enumeration::bruhat_leq(ElementId y, ElementId x) const {
  if (size() > kIntervalLimit) return system_->bruhat_leq(elements_[y], elements_[x]);
  std::call_once(intervals_once_, [this] { build_intervals(); });
  return (intervals_[x][y / 64] >> (y % 64)) & 1U;
}

std::vector<ElementId> Enumeration::lower_interval(ElementId x) const {
  std::vector<ElementId> out;
  if (size() > kIntervalLimit) {
    for (ElementId y = 0; y <= x; ++y)
      if (bruhat_leq(y, x)) out.push_back(y);
    return out;
  }
  std::call_once(intervals_once_, [this] { build_intervals(); });
  const auto& bits = intervals_[x];
  for (std::size_t w = 0; w < bits.size(); ++w) {
    std::uint64_t b = bits[w];
    while (b) {
      out.push_back(static_cast<ElementId>(w * 64 + std::countr_zero(b)));
      b &= b - 1;
    }
  }
  return out;
}

// ---- weights ----------------------------------------------------------------

namespace {

void require_crystallographic(const SystemPtr& owner) {
  if (!owner->is_crystallographic()) throw Unsupported("weights need a crystallographic system, got " + owner->type_label());
}

Weight simple_reflect(const Weight& lambda, int s) {
  const auto& a = lambda.owner->cartan_matrix();
  Weight out = lambda;
  mpq_class c = lambda.coords[s - 1];
  if (c == 0) return out;
  for (std::size_t j = 0; j < out.coords.size(); ++j) out.coords[j] -= c * a[j][s - 1];
  return out;
}

}  // namespace

Weight Weight::parse(SystemPtr owner, std::string_view text) {
  require_crystallographic(owner);
  Weight w{owner, {}};
  std::string s = trim(text);
  if (!s.empty()) {
    for (const auto& part : split(s, ',')) {
      try {
        mpq_class q(part);
        if (q.get_den() == 0) throw std::invalid_argument(part);
        q.canonicalize();
        w.coords.push_back(q);
      } catch (const std::invalid_argument&) {
        throw ParseError("invalid rational '" + part + "'");
      }
    }
  }
  if (static_cast<int>(w.coords.size()) != owner->rank())
    throw ParseError("weight needs " + std::to_string(owner->rank()) + " coordinates");
  return w;
}

Weight Weight::zero(SystemPtr owner) {
  require_crystallographic(owner);
  const int r = owner->rank();
  return Weight{std::move(owner), std::vector<mpq_class>(r, 0)};
}

Weight Weight::rho(SystemPtr owner) {
  require_crystallographic(owner);
  const int r = owner->rank();
  return Weight{std::move(owner), std::vector<mpq_class>(r, 1)};
}

Weight Weight::fundamental(SystemPtr owner, int i) {
  Weight w = zero(std::move(owner));
  if (i < 1 || i > static_cast<int>(w.coords.size())) throw UsageError("fundamental weight index out of range");
  w.coords[i - 1] = 1;
  return w;
}

std::string Weight::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i > 0) out += ",";
    out += coords[i].get_str();
  }
  return out;
}

Weight Weight::operator+(const Weight& other) const {
  if (owner != other.owner) throw OwnerMismatch("weights of different systems");
  Weight out = *this;
  for (std::size_t i = 0; i < coords.size(); ++i) out.coords[i] += other.coords[i];
  return out;
}

Weight Weight::operator-(const Weight& other) const {
  if (owner != other.owner) throw OwnerMismatch("weights of different systems");
  Weight out = *this;
  for (std::size_t i = 0; i < coords.size(); ++i) out.coords[i] -= other.coords[i];
  return out;
}

mpq_class pair_with_coroot(const Weight& w, std::span<const int> coroot) {
  mpq_class sum = 0;
  for (std::size_t i = 0; i < w.coords.size(); ++i) sum += coroot[i] * w.coords[i];
  return sum;
}

Weight act(const Element& w, const Weight& lambda) {
  if (w.owner_ptr() != lambda.owner) throw OwnerMismatch("element and weight belong to different systems");
  require_crystallographic(lambda.owner);
  std::vector<int> word = w.owner().reduced_word(w);
  Weight out = lambda;
  for (auto it = word.rbegin(); it != word.rend(); ++it) out = simple_reflect(out, *it);
  return out;
}

Weight dot_action(const Element& w, const Weight& lambda) {
  Weight rho = Weight::rho(lambda.owner);
  return act(w, lambda + rho) - rho;
}

namespace {

// <gamma, beta^v> for a root gamma and a coroot beta^v.
int root_coroot_pairing(const IntMatrix& cartan, std::span<const int> gamma, std::span<const int> coroot) {
  int sum = 0;
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    if (gamma[i] == 0) continue;
    for (std::size_t j = 0; j < coroot.size(); ++j) sum += gamma[i] * coroot[j] * cartan[j][i];
  }
  return sum;
}

// Canonical simple system of the reflection subgroup spanned by the given
// positive roots: those beta whose reflection makes no other root of the
// subsystem negative.
std::vector<std::size_t> simple_subsystem(const CoxeterSystem& sys, const std::vector<std::size_t>& subset) {
  const auto& roots = sys.positive_roots();
  const auto& coroots = sys.positive_coroots();
  const auto& cartan = sys.cartan_matrix();
  std::vector<std::size_t> simple;
  for (std::size_t b : subset) {
    bool is_simple = true;
    for (std::size_t g : subset) {
      if (g == b) continue;
      int c = root_coroot_pairing(cartan, roots[g], coroots[b]);
      std::vector<int> image = roots[g];
      for (std::size_t i = 0; i < image.size(); ++i) image[i] -= c * roots[b][i];
      if (is_negative_root(image)) {
        is_simple = false;
        break;
      }
    }
    if (is_simple) simple.push_back(b);
  }
  return simple;
}

}  // namespace

IsotropyGroups isotropy_groups(const Weight& lambda) {
  require_crystallographic(lambda.owner);
  const auto& sys = *lambda.owner;
  Weight shifted = lambda + Weight::rho(lambda.owner);
  std::vector<std::size_t> integral;
  std::vector<std::size_t> singular;
  for (std::size_t k = 0; k < sys.positive_roots().size(); ++k) {
    mpq_class p = pair_with_coroot(shifted, sys.positive_coroots()[k]);
    if (p.get_den() == 1) integral.push_back(k);
    if (p == 0) singular.push_back(k);
  }
  IsotropyGroups out;
  for (std::size_t k : simple_subsystem(sys, integral)) {
    out.integral_generators.push_back(sys.positive_roots()[k]);
    out.integral_generator_coroots.push_back(sys.positive_coroots()[k]);
  }
  for (std::size_t k : simple_subsystem(sys, singular)) out.singular_generators.push_back(sys.positive_roots()[k]);
  out.integral = std::all_of(lambda.coords.begin(), lambda.coords.end(), [](const mpq_class& c) { return c.get_den() == 1; });
  return out;
}

}  // namespace klcalc
