#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "deptstats/core/model.hpp"
#include "deptstats/provider/clock.hpp"
#include "deptstats/roster/roster_file.hpp"

namespace deptstats::roster {

// Append-only line-delimited JSON: {"timestamp", "operation", "before", "after"}.
class AuditLog {
public:
    AuditLog(std::filesystem::path path, provider::Clock &clock);

    void append(const std::string &operation, const nlohmann::json &before, const nlohmann::json &after);
    std::vector<nlohmann::json> entries() const;
    const std::filesystem::path &path() const { return path_; }

private:
    std::filesystem::path path_;
    provider::Clock &clock_;
};

struct IngestDelta {
    std::vector<Institution> institutions_created;
    std::vector<Department> departments_created;
    std::vector<Department> departments_updated;
    std::vector<FacultyMember> members_created;
    std::vector<FacultyMember> members_updated;
    // Members per institution abbreviation after the ingest.
    std::map<std::string, std::int64_t> member_counts;
    std::vector<std::string> warnings;

    bool empty() const;
};

// Institutions, departments and members of one snapshot, with the identity
// rules enforced: abbreviations unique, department names unique within an
// institution, every AuthorId held by at most one member.
//
// Mutations are single-writer; callers serialize them.
class Registry {
public:
    Registry() = default;
    // Rebuilds a registry from stored collections; throws CorruptionError
    // when they break an identity rule.
    Registry(std::vector<Institution> institutions, std::vector<Department> departments,
             std::vector<FacultyMember> members);

    // Idempotent upsert of a roster. Validates every row before changing
    // anything: unknown abbreviation, duplicate (department, member) rows and
    // an AuthorId claimed by two members are RosterErrors.
    IngestDelta ingest(const RosterFile &file, std::span<const InstitutionRecord> institution_list);

    // Sets curated thematic tags; returns the number of departments changed.
    std::size_t apply_tags(std::span<const TagRow> rows);

    // Records that `from` and `into` are the same person. Both ids stay on
    // the member (the provider-side merge is external). Re-applying an
    // existing merge is a no-op and writes no audit entry.
    FacultyMember apply_merge(const std::string &member_id, const AuthorId &from, const AuthorId &into,
                              AuditLog *audit = nullptr);

    // Marks a member whose profile search finished without a result.
    FacultyMember mark_not_found(const std::string &member_id, AuditLog *audit = nullptr);

    std::vector<Institution> institutions() const;
    std::vector<Department> departments() const;
    std::vector<FacultyMember> members() const;
    std::vector<FacultyMember> department_members(const std::string &department_id) const;

    const Institution *find_institution(const std::string &id_or_abbreviation) const;
    const Department *find_department(const std::string &id) const;
    // Departments whose name or id equals the text (case/diacritic-folded).
    std::vector<Department> find_departments_by_name(const std::string &name) const;
    const FacultyMember *find_member(const std::string &id) const;
    const FacultyMember *find_member_by_author(const AuthorId &id) const;

    bool empty() const { return members_.empty(); }

private:
    void recount();

    std::map<std::string, Institution> institutions_;
    std::map<std::string, Department> departments_;
    std::map<std::string, FacultyMember> members_;
    std::map<AuthorId, std::string> author_index_;
};

} // namespace deptstats::roster
