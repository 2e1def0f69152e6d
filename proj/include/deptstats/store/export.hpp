#pragma once

#include <string>
#include <string_view>

#include "deptstats/store/snapshot_store.hpp"

namespace deptstats::store {

enum class ExportFormat { Csv, Json };
ExportFormat parse_export_format(std::string_view text);

// Column order of the full results table.
inline constexpr const char *kExportColumns[] = {
    "institution",    "department",        "trs_total",          "trs_without_profile", "paper_count",
    "papers_per_trs", "citation_count",    "citations_per_trs",  "citations_per_paper"};

// One row per department with metrics, grouped by institution (largest
// trs_count first, then abbreviation), rows within an institution by
// citations per TRS member descending. Ratios are rendered half-up with two
// decimals. CSV is UTF-8 with a header row and RFC 4180 quoting; JSON is an
// object {"window", "columns", "rows"}. Throws PreconditionError when the
// snapshot has departments but no computed metrics.
std::string export_full_table(const Snapshot &snapshot, ExportFormat format);

} // namespace deptstats::store
