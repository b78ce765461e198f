#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "klcalc/andersen.hpp"
#include "klcalc/cache.hpp"
#include "klcalc/characters.hpp"
#include "klcalc/errors.hpp"
#include "klcalc/filtration.hpp"
#include "output.hpp"

namespace fs = std::filesystem;
using namespace klcalc;
using cli::Output;
using ojson = nlohmann::ordered_json;

namespace {

struct Options {
  std::string type;
  std::string format = "json";
  bool no_cache = false;
  std::string cache_dir;
  unsigned threads = std::max(1U, std::thread::hardware_concurrency());
  std::string y;
  std::string x;
  std::string word;
  std::string singular;
  std::string weight;
  std::string matrix;
  int trunc = 0;
  std::string path;
};

std::optional<fs::path> cache_directory(const Options& o) {
  if (o.no_cache) return std::nullopt;
  if (!o.cache_dir.empty()) return fs::path(o.cache_dir);
  if (const char* env = std::getenv("KL_CACHE_DIR"); env && *env) return fs::path(env);
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return fs::path(xdg) / "klcalc";
  if (const char* home = std::getenv("HOME"); home && *home) return fs::path(home) / ".cache" / "klcalc";
  return std::nullopt;
}

std::size_t entry_count(const KLTable& t) {
  std::size_t n = 0;
  for (ElementId x = 0; x < t.group().size(); ++x)
    if (t.has_row(x)) n += t.support(x).size();
  return n;
}

// KL table of one group backed by the on-disk cache. A damaged cache file is
// reported and ignored; the query still runs.
class TableSession {
 public:
  TableSession(EnumerationPtr group, const Options& o) : table_(std::make_shared<KLTable>(group)) {
    if (auto dir = cache_directory(o)) {
      path_ = *dir / cache_file_name(group->system().descriptor());
      if (fs::exists(*path_)) {
        try {
          load_cache_into(*table_, *path_);
        } catch (const Error& e) {
          std::cerr << "klcalc: ignoring cache " << path_->string() << ": " << e.what() << '\n';
        }
      }
    }
    loaded_rows_ = table_->rows_computed();
  }

  const std::shared_ptr<KLTable>& table() const { return table_; }

  void persist() const {
    if (!path_ || table_->rows_computed() == loaded_rows_) return;
    try {
      save_cache(*table_, *path_);
    } catch (const std::exception& e) {
      std::cerr << "klcalc: could not write cache " << path_->string() << ": " << e.what() << '\n';
    }
  }

 private:
  std::shared_ptr<KLTable> table_;
  std::optional<fs::path> path_;
  std::size_t loaded_rows_ = 0;
};

std::string word_of(const Enumeration& g, ElementId id) { return g.system().word_string(g.element(id)); }

ojson root_with_type(const CoxeterSystem& sys) {
  ojson j;
  j["type"] = sys.type_label();
  return j;
}

Output run_group(const Options& o) {
  auto sys = CoxeterSystem::build(o.type);
  Output out;
  out.json = root_with_type(*sys);
  out.json["descriptor"] = sys->descriptor();
  out.json["rank"] = sys->rank();
  out.json["order"] = integer_json(sys->order());
  out.json["longest_length"] = sys->num_reflections();
  out.json["positive_roots"] = sys->num_reflections();
  out.json["crystallographic"] = sys->is_crystallographic();
  out.json["coxeter_matrix"] = sys->coxeter_matrix();
  out.columns = {"type", "rank", "order", "longest_length", "positive_roots"};
  out.rows = {{sys->type_label(), std::to_string(sys->rank()), sys->order().get_str(),
               std::to_string(sys->num_reflections()), std::to_string(sys->num_reflections())}};
  return out;
}

Output run_kl(const Options& o) {
  auto g = Enumeration::build(CoxeterSystem::build(o.type));
  const auto& sys = g->system();
  const ElementId y = g->id_of(sys.parse_word(o.y));
  const ElementId x = g->id_of(sys.parse_word(o.x));
  TableSession session(g, o);
  const LaurentPoly h = session.table()->h(y, x);
  session.persist();
  const int ldiff = g->length(x) - g->length(y);
  const LaurentPoly P = h.is_zero() ? LaurentPoly() : h_to_P(h, ldiff);
  Output out;
  out.json = root_with_type(sys);
  out.json["y"] = word_of(*g, y);
  out.json["x"] = word_of(*g, x);
  out.json["ldiff"] = ldiff;
  out.json["P"] = P.to_string('q');
  out.json["h"] = h.to_string('v');
  out.columns = {"y", "x", "ldiff", "P", "h"};
  out.math = {true, true, false, true, true};
  out.rows = {{word_of(*g, y), word_of(*g, x), std::to_string(ldiff), P.to_string('q'), h.to_string('v')}};
  return out;
}

Output run_klbasis(const Options& o) {
  auto g = Enumeration::build(CoxeterSystem::build(o.type));
  const ElementId x = g->id_of(g->system().parse_word(o.x));
  TableSession session(g, o);
  const KLTable& t = *session.table();
  Output out;
  out.json = root_with_type(g->system());
  out.json["x"] = word_of(*g, x);
  ojson terms = ojson::array();
  out.columns = {"y", "h", "P"};
  out.math = {true, true, true};
  for (ElementId y : t.support(x)) {
    const LaurentPoly& h = t.h(y, x);
    const std::string P = h_to_P(h, g->length(x) - g->length(y)).to_string('q');
    ojson term;
    term["y"] = word_of(*g, y);
    term["h"] = h.to_string('v');
    term["P"] = P;
    terms.push_back(term);
    out.rows.push_back({word_of(*g, y), h.to_string('v'), P});
  }
  session.persist();
  out.json["terms"] = terms;
  return out;
}

Output run_mu(const Options& o) {
  auto g = Enumeration::build(CoxeterSystem::build(o.type));
  const auto& sys = g->system();
  const ElementId y = g->id_of(sys.parse_word(o.y));
  const ElementId x = g->id_of(sys.parse_word(o.x));
  TableSession session(g, o);
  const mpz_class m = session.table()->mu(y, x);
  session.persist();
  Output out;
  out.json = root_with_type(sys);
  out.json["y"] = word_of(*g, y);
  out.json["x"] = word_of(*g, x);
  out.json["mu"] = integer_json(m);
  out.columns = {"y", "x", "mu"};
  out.math = {true, true, false};
  out.rows = {{word_of(*g, y), word_of(*g, x), m.get_str()}};
  return out;
}

Output run_bs(const Options& o) {
  auto g = Enumeration::build(CoxeterSystem::build(o.type));
  const std::vector<int> letters = g->system().parse_letters(o.word);
  TableSession session(g, o);
  const HeckeElement ch = bs_character(g, letters);
  const KLMultiplicities parts = decompose_kl(ch, *session.table());
  session.persist();
  Output out;
  out.json = root_with_type(g->system());
  std::string word;
  for (int s : letters) word += (word.empty() || g->system().rank() < 10 ? "" : ",") + std::to_string(s);
  out.json["word"] = word;
  ojson standard = ojson::array();
  for (const auto& [y, c] : ch.terms()) standard.push_back({{"y", word_of(*g, y)}, {"coefficient", c.to_string('v')}});
  ojson kl = ojson::array();
  out.columns = {"basis", "y", "coefficient"};
  out.math = {false, true, true};
  for (const auto& [y, c] : ch.terms()) out.rows.push_back({"standard", word_of(*g, y), c.to_string('v')});
  for (const auto& [y, c] : parts) {
    kl.push_back({{"y", word_of(*g, y)}, {"multiplicity", c.to_string('v')}});
    out.rows.push_back({"kl", word_of(*g, y), c.to_string('v')});
  }
  out.json["character"] = standard;
  out.json["kl_decomposition"] = kl;
  return out;
}

BlockDescriptor block_of(const Options& o) {
  auto sys = CoxeterSystem::build(o.type);
  if (!o.weight.empty()) {
    if (!o.singular.empty()) throw UsageError("--weight and --singular are mutually exclusive");
    return block_from_weight(Weight::parse(sys, o.weight));
  }
  return BlockDescriptor{sys, parse_subset(o.singular, sys->rank()), std::nullopt};
}

std::string layers_string(const AndersenReport& r) {
  std::string s;
  for (const auto& [i, dim] : r.layers) s += (s.empty() ? "" : ";") + std::to_string(i) + ":" + dim.get_str();
  return s;
}

const std::vector<std::string> kReportColumns = {"ybar", "xbar", "y", "x", "ldiff", "P", "h", "layers", "total"};
const std::vector<bool> kReportMath = {true, true, true, true, false, true, true, false, false};

std::vector<std::string> report_row(const AndersenReport& r) {
  return {r.ybar, r.xbar, r.y, r.x, std::to_string(r.ldiff), r.P.to_string('q'), r.h.to_string('v'), layers_string(r),
          r.total.get_str()};
}

Output run_andersen(const Options& o) {
  BlockDescriptor d = block_of(o);
  auto g = Enumeration::build(d.ambient);
  TableSession session(g, o);
  Block block(d, session.table());
  const auto& sys = *d.ambient;
  AndersenReport r = andersen_layers(block, sys.parse_word(o.y), sys.parse_word(o.x));
  session.persist();
  Output out;
  out.json = r.to_json();
  out.columns = kReportColumns;
  out.math = kReportMath;
  out.rows = {report_row(r)};
  return out;
}

Output run_table(const Options& o) {
  BlockDescriptor d = block_of(o);
  auto g = Enumeration::build(d.ambient);
  TableSession session(g, o);
  session.table()->compute_all(o.threads);
  Block block(d, session.table());
  std::vector<AndersenReport> reports = full_block_table(block);
  session.persist();
  Output out;
  out.json["ambient"] = d.ambient->descriptor();
  out.json["singular"] = subset_string(d.singular_subset, d.ambient->rank());
  if (d.provenance) out.json["weight"] = d.provenance->to_string();
  bool checked = true;
  ojson list = ojson::array();
  for (const auto& r : reports) {
    checked = checked && cross_check(r);
    list.push_back(r.to_json());
    out.rows.push_back(report_row(r));
  }
  out.json["count"] = reports.size();
  out.json["cross_check"] = checked;
  out.json["reports"] = list;
  out.columns = kReportColumns;
  out.math = kReportMath;
  return out;
}

LaurentPoly matrix_entry(const nlohmann::json& j) {
  if (j.is_string()) return LaurentPoly::parse(j.get<std::string>());
  if (j.is_number_integer()) return LaurentPoly(j.get<long>());
  throw UsageError("matrix entries must be polynomial strings or integers");
}

Output run_filtration(const Options& o) {
  std::ifstream f(o.matrix);
  if (!f) throw UsageError("cannot read matrix file '" + o.matrix + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("matrix file is not valid JSON: ") + e.what());
  }
  if (!doc.is_array() || doc.empty()) throw UsageError("matrix must be a non-empty JSON array of rows");
  std::vector<std::vector<LaurentPoly>> entries;
  for (const auto& row : doc) {
    if (!row.is_array()) throw UsageError("matrix rows must be arrays");
    std::vector<LaurentPoly> r;
    for (const auto& e : row) r.push_back(matrix_entry(e));
    entries.push_back(std::move(r));
  }
  PSeriesMatrix m = PSeriesMatrix::from_polys(entries, o.trunc > 0 ? std::optional<int>(o.trunc) : std::nullopt);
  if (!has_full_row_rank(entries)) throw RankDeficient("matrix does not have full row rank over Q(v)");
  std::vector<int> d = smith_valuations(m);
  std::map<int, int> layers = layer_dims_from_valuations(d);
  Output out;
  out.json["rows"] = m.rows();
  out.json["cols"] = m.cols();
  out.json["truncation"] = m.truncation();
  out.json["valuations"] = d;
  ojson lj = ojson::object();
  for (const auto& [i, n] : layers) lj[std::to_string(i)] = n;
  out.json["layers"] = lj;
  out.columns = {"layer", "dim"};
  for (const auto& [i, n] : layers) out.rows.push_back({std::to_string(i), std::to_string(n)});
  return out;
}

Output run_bench(const Options& o) {
  auto sys = CoxeterSystem::build(o.type);
  const auto start = std::chrono::steady_clock::now();
  auto g = Enumeration::build(sys);
  KLTable t(g);
  t.compute_all(o.threads);
  const auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  Output out;
  out.json = root_with_type(*sys);
  out.json["elements"] = g->size();
  out.json["entries"] = entry_count(t);
  out.json["threads"] = o.threads;
  out.json["ms"] = ms;
  out.columns = {"type", "elements", "entries", "threads", "ms"};
  out.rows = {{sys->type_label(), std::to_string(g->size()), std::to_string(entry_count(t)), std::to_string(o.threads),
               std::to_string(ms)}};
  return out;
}

Output cache_summary(const KLTable& t, const std::string& path) {
  Output out;
  out.json["group"] = t.group().system().descriptor();
  out.json["rows"] = t.rows_computed();
  out.json["entries"] = entry_count(t);
  out.json["path"] = path;
  out.columns = {"group", "rows", "entries", "path"};
  out.rows = {{t.group().system().descriptor(), std::to_string(t.rows_computed()), std::to_string(entry_count(t)), path}};
  return out;
}

Output run_cache_save(const Options& o) {
  auto g = Enumeration::build(CoxeterSystem::build(o.type));
  TableSession session(g, o);
  session.table()->compute_all(o.threads);
  session.persist();
  save_cache(*session.table(), o.path);
  return cache_summary(*session.table(), o.path);
}

std::shared_ptr<KLTable> load_any(const std::string& path) {
  auto g = Enumeration::build(CoxeterSystem::build(cache_group(path)));
  return load_cache(g, path);
}

Output run_cache_load(const Options& o) {
  auto t = load_any(o.path);
  Output out = cache_summary(*t, o.path);
  std::string installed;
  if (auto dir = cache_directory(o)) {
    fs::path target = *dir / cache_file_name(t->group().system().descriptor());
    save_cache(*t, target);
    installed = target.string();
  }
  out.json["installed"] = installed.empty() ? ojson(nullptr) : ojson(installed);
  out.columns.push_back("installed");
  out.rows[0].push_back(installed);
  return out;
}

bool verify_rows(const KLTable& loaded) {
  KLTable fresh(loaded.group_ptr());
  for (ElementId x = 0; x < loaded.group().size(); ++x) {
    if (!loaded.has_row(x)) continue;
    if (loaded.support(x) != fresh.support(x)) return false;
    for (ElementId y : loaded.support(x))
      if (!(loaded.h(y, x) == fresh.h(y, x))) return false;
  }
  return true;
}

int run_cache_verify(const Options& o, Output& out) {
  auto t = load_any(o.path);
  std::ifstream f(o.path, std::ios::binary);
  std::ostringstream bytes;
  bytes << f.rdbuf();
  const bool canonical = serialize_cache(*t) == bytes.str();
  const bool consistent = verify_rows(*t);
  out = cache_summary(*t, o.path);
  out.json["canonical"] = canonical;
  out.json["consistent"] = consistent;
  out.columns.insert(out.columns.end(), {"canonical", "consistent"});
  out.rows[0].insert(out.rows[0].end(), {canonical ? "true" : "false", consistent ? "true" : "false"});
  if (!canonical || !consistent) {
    std::cerr << "klcalc: cache verification failed for " << o.path << '\n';
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Exact Kazhdan-Lusztig and Andersen filtration calculator", "klcalc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "klcalc 0.1.0");

  auto add_format = [&](CLI::App* c) {
    c->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv", "latex"}));
  };
  auto add_cache = [&](CLI::App* c) {
    c->add_flag("--no-cache", o.no_cache, "Do not read or write the KL cache");
    c->add_option("--cache-dir", o.cache_dir, "Cache directory (default $KL_CACHE_DIR)");
  };
  auto add_type = [&](CLI::App* c) {
    c->add_option("--type,-t", o.type, "Type label (A3, B2, I2(5), ...) or Coxeter matrix")->required();
  };
  auto add_threads = [&](CLI::App* c) {
    c->add_option("--threads", o.threads, "Worker threads")->check(CLI::Range(1U, 1024U));
  };

  auto* group = app.add_subcommand("group", "Order, longest length and reflection count");
  add_type(group);
  add_format(group);

  auto* kl = app.add_subcommand("kl", "KL polynomial P_{y,x} and h_{y,x}");
  add_type(kl);
  kl->add_option("--y", o.y, "Word for y")->required();
  kl->add_option("--x", o.x, "Word for x")->required();
  add_format(kl);
  add_cache(kl);

  auto* klbasis = app.add_subcommand("klbasis", "Standard-basis expansion of the KL basis element of x");
  add_type(klbasis);
  klbasis->add_option("--x", o.x, "Word for x")->required();
  add_format(klbasis);
  add_cache(klbasis);

  auto* mu = app.add_subcommand("mu", "mu(y, x)");
  add_type(mu);
  mu->add_option("--y", o.y, "Word for y")->required();
  mu->add_option("--x", o.x, "Word for x")->required();
  add_format(mu);
  add_cache(mu);

  auto* bs = app.add_subcommand("bs", "Bott-Samelson character and its KL decomposition");
  add_type(bs);
  bs->add_option("--word", o.word, "Generator word, not necessarily reduced")->required();
  add_format(bs);
  add_cache(bs);

  auto* andersen = app.add_subcommand("andersen", "Andersen filtration layers for one pair of cosets");
  add_type(andersen);
  andersen->add_option("--singular", o.singular, "Singular subset, e.g. 1,3");
  andersen->add_option("--weight", o.weight, "Weight in fundamental-weight coordinates, e.g. 0,-1/2");
  andersen->add_option("--ybar", o.y, "Any element of the coset of y")->required();
  andersen->add_option("--xbar", o.x, "Any element of the coset of x")->required();
  add_format(andersen);
  add_cache(andersen);

  auto* table = app.add_subcommand("table", "Andersen reports for every comparable pair of cosets");
  add_type(table);
  table->add_option("--singular", o.singular, "Singular subset, e.g. 1,3");
  table->add_option("--weight", o.weight, "Weight in fundamental-weight coordinates");
  add_threads(table);
  add_format(table);
  add_cache(table);

  auto* filtration = app.add_subcommand("filtration", "Smith valuations and layer dimensions of a pairing matrix");
  filtration->add_option("--matrix", o.matrix, "JSON file: array of rows of polynomial strings")->required();
  filtration->add_option("--trunc", o.trunc, "Truncation order N (series known mod v^N)")->check(CLI::PositiveNumber);
  add_format(filtration);

  auto* bench = app.add_subcommand("bench", "Time a full KL table");
  add_type(bench);
  add_threads(bench);
  add_format(bench);

  auto* cache = app.add_subcommand("cache", "Manage KL cache files");
  cache->require_subcommand(1);
  auto* save = cache->add_subcommand("save", "Compute a full table and write it to a file");
  add_type(save);
  save->add_option("--path", o.path, "Cache file")->required();
  add_threads(save);
  add_format(save);
  add_cache(save);
  auto* load = cache->add_subcommand("load", "Validate a cache file and install it in the cache directory");
  load->add_option("--path", o.path, "Cache file")->required();
  add_format(load);
  add_cache(load);
  auto* verify = cache->add_subcommand("verify", "Recompute every row of a cache file and check its encoding");
  verify->add_option("--path", o.path, "Cache file")->required();
  add_format(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    Output out;
    int code = 0;
    if (*group) out = run_group(o);
    else if (*kl) out = run_kl(o);
    else if (*klbasis) out = run_klbasis(o);
    else if (*mu) out = run_mu(o);
    else if (*bs) out = run_bs(o);
    else if (*andersen) out = run_andersen(o);
    else if (*table) out = run_table(o);
    else if (*filtration) out = run_filtration(o);
    else if (*bench) out = run_bench(o);
    else if (*save) out = run_cache_save(o);
    else if (*load) out = run_cache_load(o);
    else if (*verify) code = run_cache_verify(o, out);
    cli::emit(std::cout, out, cli::parse_format(o.format));
    return code;
  } catch (const UsageError& e) {
    std::cerr << "klcalc: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "klcalc: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "klcalc: " << e.what() << '\n';
    return 3;
  }
}
