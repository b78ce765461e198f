#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "klcalc/hecke.hpp"

namespace klcalc {

// JSON-lines KL cache. The first line is the header
//   {"format":"klcache","version":1,"group":<descriptor>,"normalization":"soergel-v"}
// followed by one line per pair y <= x of computed rows:
//   {"x":<word>,"y":<word>,"h":[[exponent,coefficient],...]}
// with x and y in (length, key) order and exponents ascending.
inline constexpr int kCacheVersion = 1;
inline constexpr const char* kCacheNormalization = "soergel-v";

std::string serialize_cache(const KLTable& table);
// Writes to a temporary sibling and renames it into place.
void save_cache(const KLTable& table, const std::filesystem::path& path);

// Loads rows into a table for the given group; throws CacheError on a
// malformed file or a header that does not match the group.
std::shared_ptr<KLTable> load_cache(EnumerationPtr group, const std::filesystem::path& path);
void load_cache_into(KLTable& table, const std::filesystem::path& path);

// Reads only the header's group descriptor.
std::string cache_group(const std::filesystem::path& path);

// File name used under KL_CACHE_DIR for a group descriptor.
std::string cache_file_name(const std::string& descriptor);

}  // namespace klcalc
