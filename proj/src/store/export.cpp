#include "deptstats/store/export.hpp"

#include <algorithm>

#include "deptstats/core/errors.hpp"
#include "deptstats/core/json_codec.hpp"
#include "deptstats/core/text.hpp"
#include "deptstats/ranking/comparator.hpp"

namespace deptstats::store {

ExportFormat parse_export_format(std::string_view text) {
    if (text == "csv" || text == "CSV")
        return ExportFormat::Csv;
    if (text == "json" || text == "JSON")
        return ExportFormat::Json;
    throw ValidationError("unknown export format '" + std::string(text) + "' (expected csv or json)");
}

std::string export_full_table(const Snapshot &snapshot, ExportFormat format) {
    if (!snapshot.departments.empty() && snapshot.metrics.empty())
        throw PreconditionError("snapshot has no computed metrics; run compute first");

    ranking::Comparator comparator(snapshot.institutions, snapshot.departments, snapshot.metrics);
    std::vector<Institution> institutions = snapshot.institutions;
    std::sort(institutions.begin(), institutions.end(), [](const Institution &a, const Institution &b) {
        if (a.trs_count != b.trs_count)
            return a.trs_count > b.trs_count;
        return a.abbreviation < b.abbreviation;
    });

    std::vector<ranking::RankingRow> rows;
    for (const auto &institution : institutions) {
        std::vector<std::string> ids;
        for (const auto &department : snapshot.departments)
            if (department.institution_id == institution.id && comparator.metrics(department.id))
                ids.push_back(department.id);
        const auto ordered =
            comparator.order(ids, ranking::Metric::CitationsPerTrs, ranking::Direction::Descending);
        rows.insert(rows.end(), ordered.begin(), ordered.end());
    }

    const auto cells = [](const ranking::RankingRow &row) {
        const auto &m = row.metrics;
        return std::vector<std::string>{row.institution_abbreviation,
                                        row.department_name,
                                        std::to_string(m.trs_total),
                                        std::to_string(m.trs_without_profile),
                                        std::to_string(m.paper_count),
                                        render_fixed2(m.papers_per_trs()),
                                        std::to_string(m.citation_count),
                                        render_fixed2(m.citations_per_trs()),
                                        render_fixed2(m.citations_per_paper())};
    };
    const std::vector<std::string> columns(std::begin(kExportColumns), std::end(kExportColumns));

    if (format == ExportFormat::Csv) {
        std::string out = csv_line(columns);
        for (const auto &row : rows)
            out += csv_line(cells(row));
        return out;
    }

    nlohmann::json json_rows = nlohmann::json::array();
    for (const auto &row : rows) {
        const auto values = cells(row);
        nlohmann::json entry = nlohmann::json::object();
        for (std::size_t i = 0; i < columns.size(); ++i) {
            // Counts stay numeric; names and rendered ratios are strings.
            const bool numeric = columns[i] == "trs_total" || columns[i] == "trs_without_profile" ||
                                 columns[i] == "paper_count" || columns[i] == "citation_count";
            entry[columns[i]] = numeric ? nlohmann::json(std::stoll(values[i])) : nlohmann::json(values[i]);
        }
        entry["department_id"] = row.department_id;
        json_rows.push_back(entry);
    }
    const nlohmann::json document{
        {"window", snapshot.window ? nlohmann::json(*snapshot.window) : nlohmann::json(nullptr)},
        {"columns", columns},
        {"rows", json_rows}};
    return document.dump(2) + "\n";
}

} // namespace deptstats::store
