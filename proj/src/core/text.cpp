#include "deptstats/core/text.hpp"

#include <array>
#include <cctype>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "deptstats/core/errors.hpp"

namespace deptstats {

namespace {

// Decodes one code point starting at text[pos]; returns 0xFFFD-free value or
// -1 for an invalid sequence. Advances pos past what was consumed.
long decode_utf8(std::string_view text, std::size_t &pos) {
    const auto lead = static_cast<unsigned char>(text[pos++]);
    if (lead < 0x80)
        return lead;
    int extra = 0;
    long cp = 0;
    if ((lead & 0xE0) == 0xC0) {
        extra = 1;
        cp = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
        extra = 2;
        cp = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
        extra = 3;
        cp = lead & 0x07;
    } else {
        return -1;
    }
    for (int i = 0; i < extra; ++i) {
        if (pos >= text.size())
            return -1;
        const auto cont = static_cast<unsigned char>(text[pos]);
        if ((cont & 0xC0) != 0x80)
            return -1;
        cp = (cp << 6) | (cont & 0x3F);
        ++pos;
    }
    return cp;
}

void encode_utf8(long cp, std::string &out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// U+00C0..U+00FF, lowercase base letters; "" keeps the original character.
constexpr std::array<std::string_view, 64> kLatin1 = {
    "a", "a", "a", "a", "a", "a", "ae", "c", "e", "e", "e", "e", "i", "i", "i", "i",
    "d", "n", "o", "o", "o", "o", "o",  "",  "o", "u", "u", "u", "u", "y", "th", "ss",
    "a", "a", "a", "a", "a", "a", "ae", "c", "e", "e", "e", "e", "i", "i", "i", "i",
    "d", "n", "o", "o", "o", "o", "o",  "",  "o", "u", "u", "u", "u", "y", "th", "y"};

// U+0100..U+017F as runs of (length, base letters).
struct Run {
    int length;
    std::string_view base;
};
constexpr std::array kLatinExtA = {Run{6, "a"},  Run{8, "c"}, Run{4, "d"},  Run{10, "e"}, Run{8, "g"}, Run{4, "h"},
                                   Run{10, "i"}, Run{2, "ij"}, Run{2, "j"}, Run{3, "k"},  Run{10, "l"}, Run{9, "n"},
                                   Run{6, "o"},  Run{2, "oe"}, Run{6, "r"}, Run{8, "s"},  Run{6, "t"}, Run{12, "u"},
                                   Run{2, "w"},  Run{3, "y"},  Run{6, "z"}, Run{1, "s"}};

std::string_view latin_ext_a(long cp) {
    long offset = cp - 0x100;
    for (const auto &run : kLatinExtA) {
        if (offset < run.length)
            return run.base;
        offset -= run.length;
    }
    return {};
}

long fold_greek(long cp) {
    switch (cp) {
    case 0x0386:
    case 0x03AC:
        return 0x03B1; // alpha
    case 0x0388:
    case 0x03AD:
        return 0x03B5; // epsilon
    case 0x0389:
    case 0x03AE:
        return 0x03B7; // eta
    case 0x038A:
    case 0x03AF:
    case 0x0390:
    case 0x03AA:
    case 0x03CA:
        return 0x03B9; // iota
    case 0x038C:
    case 0x03CC:
        return 0x03BF; // omicron
    case 0x038E:
    case 0x03CD:
    case 0x03B0:
    case 0x03AB:
    case 0x03CB:
        return 0x03C5; // upsilon
    case 0x038F:
    case 0x03CE:
        return 0x03C9; // omega
    case 0x03C2:
        return 0x03C3; // final sigma
    default:
        break;
    }
    if (cp >= 0x0391 && cp <= 0x03A9 && cp != 0x03A2)
        return cp + 0x20;
    return cp;
}

} // namespace

std::string_view trim(std::string_view text) {
    const auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
    while (!text.empty() && is_space(text.front()))
        text.remove_prefix(1);
    while (!text.empty() && is_space(text.back()))
        text.remove_suffix(1);
    return text;
}

std::vector<std::string> split(std::string_view text, char separator) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto next = text.find(separator, start);
        parts.emplace_back(text.substr(start, next - start));
        if (next == std::string_view::npos)
            break;
        start = next + 1;
    }
    return parts;
}

std::string join(const std::vector<std::string> &parts, std::string_view separator) {
    std::string joined;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0)
            joined += separator;
        joined += parts[i];
    }
    return joined;
}

std::string fold(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const long cp = decode_utf8(text, pos);
        if (cp < 0)
            continue;
        if (cp < 0x80 && std::isspace(static_cast<int>(cp))) {
            pending_space = true;
            continue;
        }
        if (cp >= 0x0300 && cp <= 0x036F) // combining diacritical marks
            continue;
        if (pending_space && !out.empty())
            out.push_back(' ');
        pending_space = false;
        if (cp < 0x80) {
            out.push_back(static_cast<char>(std::tolower(static_cast<int>(cp))));
        } else if (cp >= 0xC0 && cp <= 0xFF && !kLatin1[cp - 0xC0].empty()) {
            out += kLatin1[cp - 0xC0];
        } else if (cp >= 0x100 && cp <= 0x17F) {
            out += latin_ext_a(cp);
        } else if (cp >= 0x0370 && cp <= 0x03FF) {
            encode_utf8(fold_greek(cp), out);
        } else {
            encode_utf8(cp, out);
        }
    }
    return out;
}

std::vector<CsvRecord> parse_csv(std::string_view text) {
    if (text.starts_with("\xEF\xBB\xBF"))
        text.remove_prefix(3);

    std::vector<CsvRecord> records;
    CsvRecord current;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t line = 1;
    current.line = 1;

    const auto end_record = [&] {
        current.fields.push_back(std::move(field));
        field.clear();
        const bool blank = current.fields.size() == 1 && current.fields.front().empty() && !field_started;
        if (!blank)
            records.push_back(std::move(current));
        current = CsvRecord{};
        field_started = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n')
                    ++line;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            in_quotes = true;
            field_started = true;
            break;
        case ',':
            current.fields.push_back(std::move(field));
            field.clear();
            field_started = true;
            break;
        case '\r':
            break;
        case '\n':
            end_record();
            ++line;
            current.line = line;
            break;
        default:
            field.push_back(c);
            field_started = true;
            break;
        }
    }
    if (in_quotes)
        throw ValidationError("line " + std::to_string(current.line) + ": unterminated quoted field");
    if (field_started || !current.fields.empty())
        end_record();
    return records;
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(field);
    std::string quoted = "\"";
    for (const char c : field) {
        if (c == '"')
            quoted.push_back('"');
        quoted.push_back(c);
    }
    quoted.push_back('"');
    return quoted;
}

std::string csv_line(const std::vector<std::string> &fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0)
            line.push_back(',');
        line += csv_escape(fields[i]);
    }
    line.push_back('\n');
    return line;
}

std::string format_utc(std::chrono::system_clock::time_point at) {
    const std::time_t seconds = std::chrono::system_clock::to_time_t(at);
    std::tm parts{};
    gmtime_r(&seconds, &parts);
    std::ostringstream out;
    out << std::put_time(&parts, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

std::chrono::system_clock::time_point parse_utc(std::string_view text) {
    std::tm parts{};
    std::istringstream in{std::string(text)};
    in >> std::get_time(&parts, "%Y-%m-%dT%H:%M:%SZ");
    if (in.fail())
        throw ValidationError("invalid UTC timestamp '" + std::string(text) + "'");
    return std::chrono::system_clock::from_time_t(timegm(&parts));
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw NotFoundError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace deptstats
