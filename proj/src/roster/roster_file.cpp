#include "deptstats/roster/roster_file.hpp"

#include "deptstats/core/errors.hpp"
#include "deptstats/core/text.hpp"

namespace deptstats::roster {

namespace {

void expect_header(const std::vector<CsvRecord> &records, const std::vector<std::string> &expected,
                   std::string_view what) {
    if (records.empty())
        return;
    std::vector<std::string> header;
    for (const auto &field : records.front().fields)
        header.emplace_back(trim(field));
    if (header != expected)
        throw RosterError(records.front().line, std::string(what) + " header must be '" + join(expected, ",") + "'");
}

} // namespace

std::vector<InstitutionRecord> parse_institution_list(std::string_view csv_text) {
    const auto records = parse_csv(csv_text);
    expect_header(records, {"abbreviation", "name"}, "institution list");
    std::vector<InstitutionRecord> institutions;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto &record = records[i];
        if (record.fields.size() != 2)
            throw RosterError(record.line, "expected 2 fields, got " + std::to_string(record.fields.size()));
        InstitutionRecord institution{std::string(trim(record.fields[0])), std::string(trim(record.fields[1]))};
        if (institution.abbreviation.empty())
            throw RosterError(record.line, "empty institution abbreviation");
        for (const auto &existing : institutions)
            if (existing.abbreviation == institution.abbreviation)
                throw RosterError(record.line, "duplicate abbreviation '" + institution.abbreviation + "'");
        institutions.push_back(std::move(institution));
    }
    return institutions;
}

RosterFile RosterFile::parse(std::string_view csv_text) {
    const auto records = parse_csv(csv_text);
    expect_header(records, {"institution", "department", "member", "rank", "author_ids"}, "roster");

    RosterFile file;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto &record = records[i];
        if (record.fields.size() != 5)
            throw RosterError(record.line, "expected 5 fields, got " + std::to_string(record.fields.size()));
        RosterRow row;
        row.line = record.line;
        row.institution_abbrev = std::string(trim(record.fields[0]));
        row.department_name = std::string(trim(record.fields[1]));
        row.member_display_name = std::string(trim(record.fields[2]));
        if (row.institution_abbrev.empty() || row.department_name.empty() || row.member_display_name.empty())
            throw RosterError(record.line, "institution, department and member must be non-empty");
        try {
            row.rank = parse_rank(trim(record.fields[3]));
            const std::string_view cell = trim(record.fields[4]);
            if (cell == "-") {
                row.reviewed_not_found = true;
            } else if (!cell.empty()) {
                for (const auto &token : split(cell, '|'))
                    row.author_ids.push_back(AuthorId::parse(trim(token)));
            }
        } catch (const RosterError &) {
            throw;
        } catch (const ValidationError &error) {
            throw RosterError(record.line, error.what());
        }
        file.rows.push_back(std::move(row));
    }
    return file;
}

RosterFile RosterFile::load(const std::string &path) {
    return parse(read_file(path));
}

std::vector<TagRow> parse_tag_file(std::string_view csv_text) {
    const auto records = parse_csv(csv_text);
    expect_header(records, {"institution", "department", "tags"}, "tag file");
    std::vector<TagRow> rows;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto &record = records[i];
        if (record.fields.size() != 3)
            throw RosterError(record.line, "expected 3 fields, got " + std::to_string(record.fields.size()));
        TagRow row{record.line, std::string(trim(record.fields[0])), std::string(trim(record.fields[1])), {}};
        for (const auto &tag : split(record.fields[2], '|')) {
            const std::string folded = fold(trim(tag));
            if (!folded.empty())
                row.tags.push_back(folded);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace deptstats::roster
