#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hfl/chartab.hpp"
#include "hfl/group.hpp"

namespace hfl {

class CacheError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Directory consulted by character_table and the large enumerations when no explicit one is given.
std::optional<std::filesystem::path> default_cache_dir();
void set_default_cache_dir(std::optional<std::filesystem::path> dir);

/// Group file: "HFL1", p, ell, n, generators, then keys / parents / steps; trailing FNV-1a digest.
void store_group(const std::filesystem::path& file, const FiniteGroup& g);
GroupPtr load_group(const std::filesystem::path& file);

/// generate() backed by a cache directory; the file name is derived from the header.
GroupPtr cached_generate(const std::vector<ZmodMatrix>& gens, int n, std::uint32_t modulus, std::size_t budget,
                         const std::optional<std::filesystem::path>& dir);

/// Table file keyed by the group digest; values stored as (conductor, coefficients).
void store_table(const std::filesystem::path& dir, const CharacterTable& t);
/// nullptr if absent; CacheError on digest mismatch or a table inconsistent with the classes.
TablePtr load_table(const std::filesystem::path& dir, const ClassDataPtr& c);

struct CacheEntry {
    std::string file;
    std::string kind;
    std::uintmax_t bytes = 0;
    bool ok = true;
    std::string detail;
};

std::vector<CacheEntry> cache_list(const std::filesystem::path& dir);
/// Checks every digest; corrupt files move to dir/quarantine.
std::vector<CacheEntry> cache_verify(const std::filesystem::path& dir);
std::size_t cache_purge(const std::filesystem::path& dir);

}  // namespace hfl
