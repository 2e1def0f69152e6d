#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "deptstats/core/model.hpp"

namespace deptstats::metrics {

struct DedupReport {
    std::string department_id;
    std::int64_t raw_doc_instances = 0; // sum over members of their doc counts
    std::int64_t unique_docs = 0;
    std::int64_t duplicates_removed = 0;

    bool operator==(const DedupReport &) const = default;
};

struct DedupResult {
    std::vector<Publication> publications; // sorted by doc_id
    DedupReport report;
    std::vector<std::string> warnings;
};

// Union by doc_id of every member's publications: a paper co-authored by
// several members of the department counts once. Each member's list is
// treated as a set. When the same doc_id carries different citation counts
// the maximum is kept and a data-quality warning is emitted.
DedupResult dedup_department(const std::map<std::string, std::vector<Publication>> &per_member,
                             const std::string &department_id = {});

// Publications with start_year <= year <= end_year, ordered by (year, doc_id).
std::vector<Publication> window_filter(std::span<const Publication> publications, const YearWindow &window);

// Aggregates for one department. The per-TRS denominator counts every
// member, including those without a profile. Self-citations are not
// excluded. Throws DomainError("empty department") without members and
// PreconditionError when a publication lies outside the window.
DepartmentMetrics compute_metrics(const Department &department, std::span<const FacultyMember> members,
                                  std::span<const Publication> deduplicated, const YearWindow &window);

// Reviewer decision that a publication does not belong to a member.
struct DocOverride {
    std::string member_id;
    std::string doc_id;
    std::string reason;

    auto operator<=>(const DocOverride &) const = default;
};

struct MetricsConfig {
    // Empty = every document type counts.
    std::set<std::string> doc_type_allow_list;
};

struct ComputeOutput {
    std::vector<DepartmentMetrics> metrics; // sorted by department_id
    std::vector<DedupReport> reports;
    std::vector<std::string> warnings;
};

// Full pipeline per department: attribute publications to members through
// their author ids, drop overridden docs, apply the doc-type allow-list and
// the window, deduplicate, aggregate. Departments without members are
// skipped with a warning. Departments are processed in parallel.
ComputeOutput compute_all(std::span<const Department> departments, std::span<const FacultyMember> members,
                          std::span<const Publication> publications, std::span<const DocOverride> overrides,
                          const YearWindow &window, const MetricsConfig &config = {});

} // namespace deptstats::metrics
