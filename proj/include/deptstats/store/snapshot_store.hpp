#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "deptstats/core/model.hpp"
#include "deptstats/metrics/engine.hpp"
#include "deptstats/provider/gateway.hpp"

namespace deptstats::store {

// Everything needed to reproduce every report: rosters, fetched records,
// reviewer overrides, computed metrics and fetch provenance.
struct Snapshot {
    std::string snapshot_id; // filled by save()/load()
    std::string created_at;  // filled by save() when empty
    std::optional<YearWindow> window;
    std::vector<std::string> doc_type_allow_list;
    std::vector<Institution> institutions;
    std::vector<Department> departments;
    std::vector<FacultyMember> members;
    std::vector<Publication> publications;
    std::vector<metrics::DocOverride> overrides;
    std::vector<DepartmentMetrics> metrics;
    std::vector<provider::FetchReceipt> provenance;

    bool operator==(const Snapshot &) const = default;
};

// Sorts every collection by its key so that equal content serializes to
// equal bytes.
void canonicalize(Snapshot &snapshot);

// Equality of everything except snapshot_id and created_at.
bool same_content(const Snapshot &a, const Snapshot &b);

// Content digest; created_at does not participate.
std::string compute_snapshot_id(const Snapshot &snapshot);

// Recomputes all department metrics from the snapshot's inputs.
metrics::ComputeOutput recompute_metrics(const Snapshot &snapshot);

// One directory per snapshot:
//   <root>/<snapshot_id>/manifest.json
//   <root>/<snapshot_id>/{institutions,departments,members,publications,
//                         overrides,metrics,provenance}.jsonl
// The manifest records each collection's SHA-256 and record count; the
// snapshot id is the SHA-256 of the canonical manifest body (format,
// window, settings, collection digests). Snapshots are written into a
// temporary directory and renamed into place, so readers never see a
// partial snapshot. <root>/HEAD names the current snapshot.
class SnapshotStore {
public:
    explicit SnapshotStore(std::filesystem::path root);

    // Returns the snapshot id. Saving identical content twice yields the
    // same id and leaves the first copy (and its created_at) untouched.
    std::string save(const Snapshot &snapshot);

    // Accepts a full id or a unique prefix of at least 8 characters.
    // NotFoundError for unknown ids, CorruptionError on digest mismatch.
    Snapshot load(const std::string &id) const;

    std::vector<std::string> list() const;
    std::optional<std::string> head() const;
    void set_head(const std::string &snapshot_id);

    const std::filesystem::path &root() const { return root_; }

    static constexpr const char *kFormat = "deptstats-snapshot/1";

private:
    std::string resolve(const std::string &id) const;

    std::filesystem::path root_;
};

} // namespace deptstats::store
