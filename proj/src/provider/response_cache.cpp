#include "deptstats/provider/response_cache.hpp"

#include <atomic>
#include <fstream>
#include <json.hpp>
#include <thread>

#include "deptstats/core/digest.hpp"
#include "deptstats/core/errors.hpp"
#include "deptstats/core/text.hpp"

namespace deptstats::provider {

namespace fs = std::filesystem;

std::string CacheKey::digest() const {
    std::string material = provider + '\n' + operation + '\n';
    for (const auto &[name, value] : params)
        material += name + '=' + value + '\n';
    material += "page=" + std::to_string(page);
    return sha256_hex(material);
}

ResponseCache::ResponseCache(fs::path directory, std::chrono::seconds ttl, Clock &clock)
    : directory_(std::move(directory)), ttl_(ttl), clock_(clock) {
    fs::create_directories(directory_);
}

fs::path ResponseCache::entry_path(const CacheKey &key) const {
    const std::string digest = key.digest();
    return directory_ / digest.substr(0, 2) / (digest + ".json");
}

std::optional<std::string> ResponseCache::get(const CacheKey &key) const {
    const fs::path path = entry_path(key);
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return std::nullopt;
    try {
        const auto entry = nlohmann::json::parse(in);
        const auto stored_at = parse_utc(entry.at("stored_at").get<std::string>());
        if (clock_.now() - stored_at >= ttl_)
            return std::nullopt;
        return entry.at("body").get<std::string>();
    } catch (const std::exception &) {
        // Unreadable entries behave as misses and get overwritten.
        return std::nullopt;
    }
}

void ResponseCache::put(const CacheKey &key, const std::string &body) {
    static std::atomic<unsigned> counter{0};
    const fs::path path = entry_path(key);
    fs::create_directories(path.parent_path());
    const nlohmann::json entry{{"stored_at", format_utc(clock_.now())},
                               {"provider", key.provider},
                               {"operation", key.operation},
                               {"page", key.page},
                               {"body", body}};
    const fs::path temp = path.string() + ".tmp" + std::to_string(counter++) + "-" +
                          std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("cannot write cache entry " + temp.string());
        out << entry.dump();
    }
    fs::rename(temp, path);
}

} // namespace deptstats::provider
