#include "klcalc/cache.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "klcalc/errors.hpp"

namespace klcalc {

namespace {

using ojson = nlohmann::ordered_json;

ojson header_json(const std::string& descriptor) {
  ojson h;
  h["format"] = "klcache";
  h["version"] = kCacheVersion;
  h["group"] = descriptor;
  h["normalization"] = kCacheNormalization;
  return h;
}

ojson coefficient_json(const mpz_class& c) {
  if (c.fits_slong_p()) return static_cast<std::int64_t>(c.get_si());
  return c.get_str();
}

mpz_class coefficient_from_json(const ojson& j) {
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<std::int64_t>()));
  if (j.is_string()) {
    try {
      return mpz_class(j.get<std::string>());
    } catch (const std::invalid_argument&) {
    }
  }
  throw CacheError("invalid coefficient in cache entry");
}

void check_header(const ojson& h, const std::string& descriptor) {
  if (!h.is_object() || h.value("format", "") != "klcache") throw CacheError("not a klcache file");
  if (h.value("version", 0) != kCacheVersion) throw CacheError("unsupported cache version");
  if (h.value("normalization", "") != kCacheNormalization) throw CacheError("cache uses a different normalization");
  if (h.value("group", "") != descriptor)
    throw CacheError("cache is for group '" + h.value("group", "") + "', expected '" + descriptor + "'");
}

}  // namespace

std::string serialize_cache(const KLTable& table) {
  const Enumeration& g = table.group();
  const CoxeterSystem& sys = g.system();
  std::ostringstream out;
  out << header_json(sys.descriptor()).dump() << '\n';
  for (ElementId x = 0; x < g.size(); ++x) {
    if (!table.has_row(x)) continue;
    const std::string xw = sys.word_string(g.element(x));
    for (ElementId y : table.support(x)) {
      ojson entry;
      entry["x"] = xw;
      entry["y"] = sys.word_string(g.element(y));
      ojson terms = ojson::array();
      for (const auto& [e, c] : table.h(y, x).terms()) terms.push_back(ojson::array({e, coefficient_json(c)}));
      entry["h"] = terms;
      out << entry.dump() << '\n';
    }
  }
  return out.str();
}

void save_cache(const KLTable& table, const std::filesystem::path& path) {
  const std::string text = serialize_cache(table);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw CacheError("cannot write " + tmp.string());
    f << text;
    if (!f.flush()) throw CacheError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string cache_group(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CacheError("cannot read " + path.string());
  std::string line;
  if (!std::getline(f, line)) throw CacheError("empty cache file");
  try {
    return ojson::parse(line).at("group").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw CacheError(std::string("malformed cache header: ") + e.what());
  }
}

void load_cache_into(KLTable& table, const std::filesystem::path& path) {
  const Enumeration& g = table.group();
  const CoxeterSystem& sys = g.system();
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CacheError("cannot read " + path.string());
  std::string line;
  if (!std::getline(f, line)) throw CacheError("empty cache file");
  try {
    check_header(ojson::parse(line), sys.descriptor());
  } catch (const nlohmann::json::exception& e) {
    throw CacheError(std::string("malformed cache header: ") + e.what());
  }
  std::map<ElementId, std::vector<std::pair<ElementId, LaurentPoly>>> rows;
  std::size_t lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      ojson entry = ojson::parse(line);
      ElementId x = g.id_of(sys.parse_word(entry.at("x").get<std::string>()));
      ElementId y = g.id_of(sys.parse_word(entry.at("y").get<std::string>()));
      std::vector<LaurentPoly::Term> terms;
      for (const auto& t : entry.at("h")) terms.emplace_back(t.at(0).get<int>(), coefficient_from_json(t.at(1)));
      rows[x].emplace_back(y, LaurentPoly(std::move(terms)));
    } catch (const nlohmann::json::exception& e) {
      throw CacheError("malformed cache entry on line " + std::to_string(lineno) + ": " + e.what());
    } catch (const ParseError& e) {
      throw CacheError("bad word on line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  for (const auto& [x, entries] : rows) table.insert_row(x, entries);
}

std::shared_ptr<KLTable> load_cache(EnumerationPtr group, const std::filesystem::path& path) {
  auto table = std::make_shared<KLTable>(std::move(group));
  load_cache_into(*table, path);
  return table;
}

std::string cache_file_name(const std::string& descriptor) {
  std::string out;
  for (char c : descriptor) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') {
      out += c;
    } else if (c == '(' || c == ')' || c == ',' || c == ':' || c == '[' || c == ']') {
      out += '_';
    }
  }
  return out + ".klcache.jsonl";
}

}  // namespace klcalc
