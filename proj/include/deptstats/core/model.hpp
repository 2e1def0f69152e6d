#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

namespace deptstats {

// Exact ratio; ratios are never rounded until rendered.
using Ratio = boost::rational<std::int64_t>;

// Renders a non-negative ratio with two decimals, rounding half up.
std::string render_fixed2(const Ratio &value);

// Renders a rate in [0,1] as a percentage with two decimals ("11.77%").
std::string render_percent(const Ratio &rate);

// Identity of an author profile in one citation database.
struct AuthorId {
    std::string provider;
    std::string value;

    // Parses "provider:value". Throws ValidationError on a missing separator
    // or an empty part.
    static AuthorId parse(std::string_view token);
    std::string str() const { return provider + ":" + value; }

    auto operator<=>(const AuthorId &) const = default;
    bool operator==(const AuthorId &) const = default;
};

enum class UnitKind { Department, School, Faculty };
enum class AcademicRank { Professor, AssociateProfessor, AssistantProfessor, Lecturer, ProbationaryAssistantProfessor };
enum class ProfileStatus { Resolved, NotFound, PendingReview };

std::string_view to_string(UnitKind kind);
std::string_view to_string(AcademicRank rank);
std::string_view to_string(ProfileStatus status);
UnitKind parse_unit_kind(std::string_view text);
AcademicRank parse_rank(std::string_view text);
ProfileStatus parse_profile_status(std::string_view text);

// "School of Physics" -> School, "Faculty of Law" -> Faculty, anything else
// -> Department. Naming only; comparisons ignore it.
UnitKind infer_unit_kind(std::string_view department_name);

struct Institution {
    std::string id;
    std::string name;
    std::string abbreviation;
    std::int64_t trs_count = 0;

    bool operator==(const Institution &) const = default;
};

struct Department {
    std::string id;
    std::string institution_id;
    std::string name;
    UnitKind unit_kind = UnitKind::Department;
    std::set<std::string> thematic_tags;

    bool operator==(const Department &) const = default;
};

struct FacultyMember {
    std::string id;
    std::string department_id;
    std::string display_name;
    AcademicRank rank = AcademicRank::Professor;
    std::vector<AuthorId> author_ids;
    ProfileStatus profile_status = ProfileStatus::PendingReview;
    // Profile pairs recorded as the same person, stored (smaller, larger).
    std::set<std::pair<AuthorId, AuthorId>> merged_pairs;

    bool has_author(const AuthorId &id) const;
    bool operator==(const FacultyMember &) const = default;
};

struct Publication {
    std::string doc_id;
    std::string title;
    int year = 0;
    std::int64_t citation_count = 0;
    std::vector<AuthorId> author_ids;
    std::optional<std::string> source_title;
    std::optional<std::string> doc_type;
    std::vector<std::string> subject_areas;

    bool operator==(const Publication &) const = default;
};

// Throws ValidationError when the record breaks a Publication invariant.
void validate(const Publication &publication, int current_year);

// Closed interval of publication years.
class YearWindow {
public:
    YearWindow(int start_year, int end_year);

    // Parses "2017:2021".
    static YearWindow parse(std::string_view text);

    int start_year() const { return start_; }
    int end_year() const { return end_; }
    bool contains(int year) const { return start_ <= year && year <= end_; }
    std::string str() const;

    bool operator==(const YearWindow &) const = default;

private:
    int start_;
    int end_;
};

struct DepartmentMetrics {
    std::string department_id;
    YearWindow window{0, 0};
    std::int64_t trs_total = 0;
    std::int64_t trs_without_profile = 0;
    std::int64_t paper_count = 0;
    std::int64_t citation_count = 0;

    Ratio papers_per_trs() const { return Ratio(paper_count, trs_total); }
    Ratio citations_per_trs() const { return Ratio(citation_count, trs_total); }
    // Zero when the department has no papers, so every row stays rankable.
    Ratio citations_per_paper() const { return paper_count > 0 ? Ratio(citation_count, paper_count) : Ratio(0); }

    bool operator==(const DepartmentMetrics &) const = default;
};

// Share of members whose profile search finished without a result.
// Throws DomainError("no faculty") on an empty collection.
Ratio missing_profile_rate(std::span<const FacultyMember> members);

// Lowercase ASCII slug used to derive stable identifiers.
std::string slugify(std::string_view text);

} // namespace deptstats
