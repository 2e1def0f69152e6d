#include "deptstats/ranking/comparator.hpp"

#include <algorithm>

#include "deptstats/core/errors.hpp"
#include "deptstats/core/json_codec.hpp"
#include "deptstats/core/text.hpp"

namespace deptstats::ranking {

namespace {

constexpr std::array<std::pair<Metric, std::string_view>, 5> kMetricNames{
    std::pair{Metric::CitationsPerTrs, std::string_view("CitationsPerTrs")},
    std::pair{Metric::CitationsPerPaper, std::string_view("CitationsPerPaper")},
    std::pair{Metric::PapersPerTrs, std::string_view("PapersPerTrs")},
    std::pair{Metric::PaperCount, std::string_view("PaperCount")},
    std::pair{Metric::CitationCount, std::string_view("CitationCount")}};

std::string compact(std::string_view text) {
    std::string out;
    for (const char c : text)
        if (c != '_' && c != '-' && c != ' ')
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
}

Metric tie_break_metric(Metric metric) {
    return metric == Metric::CitationsPerTrs ? Metric::CitationsPerPaper : Metric::CitationsPerTrs;
}

void truncate(RankingTable &table, std::optional<std::size_t> top_k) {
    if (top_k && table.rows.size() > *top_k)
        table.rows.resize(*top_k);
}

} // namespace

std::string_view to_string(Metric metric) {
    for (const auto &[value, name] : kMetricNames)
        if (value == metric)
            return name;
    return "CitationsPerTrs";
}

std::string_view to_string(Direction direction) {
    return direction == Direction::Descending ? "desc" : "asc";
}

std::string_view to_string(Scope scope) {
    switch (scope) {
    case Scope::Institution:
        return "Institution";
    case Scope::Thematic:
        return "Thematic";
    case Scope::AdHoc:
        return "AdHoc";
    }
    return "Institution";
}

Metric parse_metric(std::string_view text) {
    const std::string wanted = compact(text);
    for (const auto &[value, name] : kMetricNames)
        if (compact(name) == wanted)
            return value;
    throw ValidationError("unknown metric '" + std::string(text) +
                          "' (expected citations_per_trs, citations_per_paper, papers_per_trs, paper_count or "
                          "citation_count)");
}

Direction parse_direction(std::string_view text) {
    const std::string wanted = compact(text);
    if (wanted == "desc" || wanted == "descending")
        return Direction::Descending;
    if (wanted == "asc" || wanted == "ascending")
        return Direction::Ascending;
    throw ValidationError("unknown direction '" + std::string(text) + "' (expected asc or desc)");
}

Ratio metric_value(const DepartmentMetrics &metrics, Metric metric) {
    switch (metric) {
    case Metric::CitationsPerTrs:
        return metrics.citations_per_trs();
    case Metric::CitationsPerPaper:
        return metrics.citations_per_paper();
    case Metric::PapersPerTrs:
        return metrics.papers_per_trs();
    case Metric::PaperCount:
        return Ratio(metrics.paper_count);
    case Metric::CitationCount:
        return Ratio(metrics.citation_count);
    }
    return Ratio(0);
}

std::vector<std::string> RankingTable::department_ids() const {
    std::vector<std::string> ids;
    for (const auto &row : rows)
        ids.push_back(row.department_id);
    return ids;
}

nlohmann::json to_json(const RankingTable &table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &row : table.rows) {
        const auto &m = row.metrics;
        rows.push_back({{"rank", row.rank},
                        {"department_id", row.department_id},
                        {"department", row.department_name},
                        {"institution", row.institution_abbreviation},
                        {"trs_total", m.trs_total},
                        {"trs_without_profile", m.trs_without_profile},
                        {"paper_count", m.paper_count},
                        {"citation_count", m.citation_count},
                        {"papers_per_trs", ratio_json(m.papers_per_trs())},
                        {"citations_per_trs", ratio_json(m.citations_per_trs())},
                        {"citations_per_paper", ratio_json(m.citations_per_paper())}});
    }
    return nlohmann::json{{"metric", to_string(table.metric)},
                          {"direction", to_string(table.direction)},
                          {"scope", {{"kind", to_string(table.scope)}, {"parameters", table.scope_parameters}}},
                          {"rows", rows}};
}

Comparator::Comparator(std::vector<Institution> institutions, std::vector<Department> departments,
                       std::vector<DepartmentMetrics> metrics)
    : institutions_(std::move(institutions)) {
    for (auto &department : departments)
        departments_.emplace(department.id, std::move(department));
    for (auto &m : metrics)
        metrics_.emplace(m.department_id, std::move(m));
}

const Department *Comparator::department(const std::string &id) const {
    const auto it = departments_.find(id);
    return it == departments_.end() ? nullptr : &it->second;
}

const DepartmentMetrics *Comparator::metrics(const std::string &department_id) const {
    const auto it = metrics_.find(department_id);
    return it == metrics_.end() ? nullptr : &it->second;
}

const Institution *Comparator::institution(const std::string &id_or_abbreviation) const {
    for (const auto &institution : institutions_)
        if (institution.id == id_or_abbreviation || institution.abbreviation == id_or_abbreviation)
            return &institution;
    return nullptr;
}

std::vector<RankingRow> Comparator::order(std::vector<std::string> department_ids, Metric metric,
                                          Direction direction) const {
    struct Keyed {
        Ratio primary;
        Ratio secondary;
        const Department *department;
        const DepartmentMetrics *metrics;
    };
    const Metric secondary = tie_break_metric(metric);
    std::vector<Keyed> keyed;
    for (const auto &id : department_ids) {
        const Department *dept = department(id);
        const DepartmentMetrics *m = metrics(id);
        if (!dept || !m)
            throw NotFoundError("no metrics for department '" + id + "'");
        keyed.push_back(Keyed{metric_value(*m, metric), metric_value(*m, secondary), dept, m});
    }
    const bool descending = direction == Direction::Descending;
    std::sort(keyed.begin(), keyed.end(), [&](const Keyed &a, const Keyed &b) {
        if (a.primary != b.primary)
            return descending ? a.primary > b.primary : a.primary < b.primary;
        if (a.secondary != b.secondary)
            return descending ? a.secondary > b.secondary : a.secondary < b.secondary;
        if (a.department->name != b.department->name)
            return a.department->name < b.department->name;
        return a.department->id < b.department->id;
    });

    std::vector<RankingRow> rows;
    for (std::size_t i = 0; i < keyed.size(); ++i) {
        // Competition ranking: ties on the chosen metric share the smaller rank.
        const int rank = (i > 0 && keyed[i].primary == keyed[i - 1].primary) ? rows.back().rank
                                                                              : static_cast<int>(i) + 1;
        const Institution *owner = institution(keyed[i].department->institution_id);
        rows.push_back(RankingRow{rank, keyed[i].department->id, keyed[i].department->name,
                                  owner ? owner->abbreviation : std::string(), *keyed[i].metrics});
    }
    return rows;
}

RankingTable Comparator::rank_institution(const std::string &institution_key, Metric metric,
                                          std::optional<std::size_t> top_k, Direction direction) const {
    const Institution *owner = institution(institution_key);
    if (!owner)
        throw NotFoundError("unknown institution '" + institution_key + "'");
    std::vector<std::string> ids;
    for (const auto &[id, dept] : departments_)
        if (dept.institution_id == owner->id && metrics_.contains(id))
            ids.push_back(id);
    if (ids.empty())
        throw PreconditionError("institution '" + owner->abbreviation + "' has no departments with metrics");

    RankingTable table{metric, direction, Scope::Institution, {{"institution", owner->abbreviation}}, {}};
    if (top_k)
        table.scope_parameters["top"] = std::to_string(*top_k);
    table.rows = order(ids, metric, direction);
    truncate(table, top_k);
    return table;
}

RankingTable Comparator::rank_thematic(const std::vector<std::string> &query_terms, const std::set<std::string> &exclude,
                                       Metric metric, std::optional<std::size_t> top_k, Direction direction) const {
    std::vector<std::string> terms;
    for (const auto &term : query_terms)
        if (auto folded = fold(trim(term)); !folded.empty())
            terms.push_back(std::move(folded));
    if (terms.empty())
        throw ValidationError("thematic search needs at least one query term");

    std::vector<std::string> ids;
    for (const auto &[id, dept] : departments_) {
        if (exclude.contains(id) || !metrics_.contains(id))
            continue;
        const std::string name = fold(dept.name);
        const bool match = std::any_of(terms.begin(), terms.end(), [&](const std::string &term) {
            if (name.find(term) != std::string::npos)
                return true;
            return std::any_of(dept.thematic_tags.begin(), dept.thematic_tags.end(),
                               [&](const std::string &tag) { return fold(tag).find(term) != std::string::npos; });
        });
        if (match)
            ids.push_back(id);
    }

    RankingTable table{metric, direction, Scope::Thematic, {{"query", join(terms, ",")}}, {}};
    if (!exclude.empty())
        table.scope_parameters["exclude"] = join(std::vector<std::string>(exclude.begin(), exclude.end()), ",");
    if (top_k)
        table.scope_parameters["top"] = std::to_string(*top_k);
    table.rows = order(ids, metric, direction);
    truncate(table, top_k);
    return table;
}

RankingTable Comparator::compare_adhoc(const std::vector<std::string> &department_ids, Metric metric,
                                       Direction direction) const {
    if (department_ids.size() > kMaxComparison)
        throw ValidationError("comparison limited to five departments (got " + std::to_string(department_ids.size()) +
                              ")");
    if (department_ids.size() < 2)
        throw ValidationError("comparison needs at least two departments");
    const std::set<std::string> unique(department_ids.begin(), department_ids.end());
    if (unique.size() != department_ids.size())
        throw ValidationError("comparison lists a department more than once");
    for (const auto &id : department_ids)
        if (!department(id) || !metrics(id))
            throw NotFoundError("unknown department '" + id + "'");

    RankingTable table{metric, direction, Scope::AdHoc, {{"ids", join(department_ids, ",")}}, {}};
    table.rows = order(department_ids, metric, direction);
    return table;
}

} // namespace deptstats::ranking
