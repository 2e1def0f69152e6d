#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "deptstats/core/model.hpp"

namespace deptstats::roster {

// Reference list of institutions, CSV with header "abbreviation,name".
struct InstitutionRecord {
    std::string abbreviation;
    std::string name;
};

std::vector<InstitutionRecord> parse_institution_list(std::string_view csv_text);

// One roster line. An empty author_ids cell means the member has not been
// resolved yet; the single token "-" means the search finished without
// finding a profile.
struct RosterRow {
    std::size_t line = 0;
    std::string institution_abbrev;
    std::string department_name;
    std::string member_display_name;
    AcademicRank rank = AcademicRank::Professor;
    std::vector<AuthorId> author_ids;
    bool reviewed_not_found = false;
};

// Header: institution,department,member,rank,author_ids. The author_ids
// cell is a '|'-separated list of provider:value tokens.
struct RosterFile {
    std::vector<RosterRow> rows;

    // Throws RosterError (with line number) on malformed input.
    static RosterFile parse(std::string_view csv_text);
    static RosterFile load(const std::string &path);
};

// Optional curated thematic tags, CSV with header
// "institution,department,tags"; tags are '|'-separated keywords.
struct TagRow {
    std::size_t line = 0;
    std::string institution_abbrev;
    std::string department_name;
    std::vector<std::string> tags;
};

std::vector<TagRow> parse_tag_file(std::string_view csv_text);

} // namespace deptstats::roster
