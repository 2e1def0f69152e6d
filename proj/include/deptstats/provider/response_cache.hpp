#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "deptstats/provider/clock.hpp"

namespace deptstats::provider {

struct CacheKey {
    std::string provider;
    std::string operation;
    std::map<std::string, std::string> params; // already normalized
    std::size_t page = 0;

    std::string digest() const;
};

// On-disk response cache. Entries live at <dir>/<2 hex>/<sha256>.json and
// are written with a temp file + rename, so concurrent writers never expose
// a torn entry.
class ResponseCache {
public:
    ResponseCache(std::filesystem::path directory, std::chrono::seconds ttl, Clock &clock);

    std::optional<std::string> get(const CacheKey &key) const;
    void put(const CacheKey &key, const std::string &body);

    const std::filesystem::path &directory() const { return directory_; }

    static constexpr std::chrono::seconds kDefaultTtl{30 * 24 * 3600};

private:
    std::filesystem::path entry_path(const CacheKey &key) const;

    std::filesystem::path directory_;
    std::chrono::seconds ttl_;
    Clock &clock_;
};

} // namespace deptstats::provider
