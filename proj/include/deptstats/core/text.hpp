#pragma once

#include <chrono>
#include <string>
#include <string_view>
#include <vector>

namespace deptstats {

std::string_view trim(std::string_view text);
std::vector<std::string> split(std::string_view text, char separator);
std::string join(const std::vector<std::string> &parts, std::string_view separator);

// Search normalization: lowercases ASCII, Latin and Greek letters, strips
// diacritics (é -> e, ά -> α), maps final sigma to sigma and collapses runs
// of whitespace. Input is UTF-8; invalid sequences are dropped.
std::string fold(std::string_view text);

// One parsed CSV record: fields plus the 1-based line it started on.
struct CsvRecord {
    std::vector<std::string> fields;
    std::size_t line = 0;
};

// RFC 4180 reader: quoted fields may contain separators, doubled quotes and
// line breaks. Blank lines are skipped. A UTF-8 BOM is ignored.
std::vector<CsvRecord> parse_csv(std::string_view text);

// Quotes a field when it contains a comma, quote, CR or LF.
std::string csv_escape(std::string_view field);
std::string csv_line(const std::vector<std::string> &fields);

// "2026-10-18T05:45:00Z"
std::string format_utc(std::chrono::system_clock::time_point at);
std::chrono::system_clock::time_point parse_utc(std::string_view text);

std::string read_file(const std::string &path);

} // namespace deptstats
