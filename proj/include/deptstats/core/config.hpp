#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace deptstats {

// Flat view of a TOML-style file:
//
//   workspace = "campaign-2022"
//   [scopus]
//   page_size = 25
//
// yields {"workspace": "campaign-2022", "scopus.page_size": "25"}. Values may
// be bare or double-quoted; '#' starts a comment outside quotes. Arrays and
// inline tables are not supported.
class Config {
public:
    static Config parse(std::string_view text);
    static Config load(const std::string &path);

    std::optional<std::string> get(const std::string &key) const;
    std::string get_or(const std::string &key, const std::string &fallback) const;
    std::int64_t get_int(const std::string &key, std::int64_t fallback) const;
    double get_double(const std::string &key, double fallback) const;

    void set(const std::string &key, std::string value) { values_[key] = std::move(value); }
    const std::map<std::string, std::string> &values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

} // namespace deptstats
