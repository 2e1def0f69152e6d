#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "deptstats/core/model.hpp"

namespace deptstats::ranking {

enum class Metric { CitationsPerTrs, CitationsPerPaper, PapersPerTrs, PaperCount, CitationCount };
enum class Direction { Descending, Ascending };
enum class Scope { Institution, Thematic, AdHoc };

std::string_view to_string(Metric metric);
std::string_view to_string(Direction direction);
std::string_view to_string(Scope scope);
// Accepts the enum spelling ("CitationsPerTrs") or snake case ("citations_per_trs").
Metric parse_metric(std::string_view text);
// "desc"/"descending" or "asc"/"ascending".
Direction parse_direction(std::string_view text);

// Value of a metric as an exact ratio (counts become n/1).
Ratio metric_value(const DepartmentMetrics &metrics, Metric metric);

struct RankingRow {
    int rank = 0;
    std::string department_id;
    std::string department_name;
    std::string institution_abbreviation;
    DepartmentMetrics metrics;

    bool operator==(const RankingRow &) const = default;
};

struct RankingTable {
    Metric metric = Metric::CitationsPerTrs;
    Direction direction = Direction::Descending;
    Scope scope = Scope::Institution;
    std::map<std::string, std::string> scope_parameters;
    std::vector<RankingRow> rows;

    std::vector<std::string> department_ids() const;
    bool operator==(const RankingTable &) const = default;
};

// JSON form served by the API; ratios as 2-decimal strings plus exact
// numerator/denominator.
nlohmann::json to_json(const RankingTable &table);

// Read-only view over one snapshot's departments and their metrics.
class Comparator {
public:
    Comparator(std::vector<Institution> institutions, std::vector<Department> departments,
               std::vector<DepartmentMetrics> metrics);

    // All departments of an institution (id or abbreviation) that have
    // metrics, truncated to top_k. Throws NotFoundError for an unknown
    // institution, PreconditionError when none of its departments has metrics.
    RankingTable rank_institution(const std::string &institution, Metric metric = Metric::CitationsPerTrs,
                                  std::optional<std::size_t> top_k = std::nullopt,
                                  Direction direction = Direction::Descending) const;

    // Departments whose folded name or tags contain any folded query term,
    // minus exclusions. Throws ValidationError when no term is non-empty.
    RankingTable rank_thematic(const std::vector<std::string> &query_terms, const std::set<std::string> &exclude,
                               Metric metric = Metric::CitationsPerTrs,
                               std::optional<std::size_t> top_k = std::nullopt,
                               Direction direction = Direction::Descending) const;

    // Two to five departments. More than five is a ValidationError naming the
    // cap; an unknown id is a NotFoundError naming the id.
    RankingTable compare_adhoc(const std::vector<std::string> &department_ids, Metric metric = Metric::CitationsPerTrs,
                               Direction direction = Direction::Descending) const;

    // Sorting and rank assignment shared by every product (and the export).
    std::vector<RankingRow> order(std::vector<std::string> department_ids, Metric metric, Direction direction) const;

    const std::vector<Institution> &institutions() const { return institutions_; }
    const Department *department(const std::string &id) const;
    const DepartmentMetrics *metrics(const std::string &department_id) const;
    const Institution *institution(const std::string &id_or_abbreviation) const;

    static constexpr std::size_t kMaxComparison = 5;

private:
    std::vector<Institution> institutions_;
    std::map<std::string, Department> departments_;
    std::map<std::string, DepartmentMetrics> metrics_;
};

} // namespace deptstats::ranking
