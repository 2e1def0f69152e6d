#include "deptstats/core/config.hpp"

#include <charconv>

#include "deptstats/core/errors.hpp"
#include "deptstats/core/text.hpp"

namespace deptstats {

namespace {

std::string strip_comment(std::string_view line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"')
            quoted = !quoted;
        else if (line[i] == '#' && !quoted)
            return std::string(line.substr(0, i));
    }
    return std::string(line);
}

} // namespace

Config Config::parse(std::string_view text) {
    Config config;
    std::string section;
    std::size_t line_no = 0;
    for (const auto &raw : split(text, '\n')) {
        ++line_no;
        const std::string line(trim(strip_comment(raw)));
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigurationError("config line " + std::to_string(line_no) + ": unterminated section header");
            section = std::string(trim(std::string_view(line).substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigurationError("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key(trim(std::string_view(line).substr(0, eq)));
        std::string value(trim(std::string_view(line).substr(eq + 1)));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        if (key.empty())
            throw ConfigurationError("config line " + std::to_string(line_no) + ": empty key");
        config.values_[section.empty() ? key : section + "." + key] = value;
    }
    return config;
}

Config Config::load(const std::string &path) {
    return parse(read_file(path));
}

std::optional<std::string> Config::get(const std::string &key) const {
    const auto it = values_.find(key);
    if (it == values_.end())
        return std::nullopt;
    return it->second;
}

std::string Config::get_or(const std::string &key, const std::string &fallback) const {
    return get(key).value_or(fallback);
}

std::int64_t Config::get_int(const std::string &key, std::int64_t fallback) const {
    const auto value = get(key);
    if (!value)
        return fallback;
    std::int64_t parsed = 0;
    const auto [ptr, ec] = std::from_chars(value->data(), value->data() + value->size(), parsed);
    if (ec != std::errc() || ptr != value->data() + value->size())
        throw ConfigurationError("config key '" + key + "' is not an integer: '" + *value + "'");
    return parsed;
}

double Config::get_double(const std::string &key, double fallback) const {
    const auto value = get(key);
    if (!value)
        return fallback;
    try {
        std::size_t used = 0;
        const double parsed = std::stod(*value, &used);
        if (used != value->size())
            throw std::invalid_argument(*value);
        return parsed;
    } catch (const std::logic_error &) {
        throw ConfigurationError("config key '" + key + "' is not a number: '" + *value + "'");
    }
}

} // namespace deptstats
