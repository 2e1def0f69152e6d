#include "deptstats/store/snapshot_store.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <random>

#include "deptstats/core/digest.hpp"
#include "deptstats/core/errors.hpp"
#include "deptstats/core/json_codec.hpp"
#include "deptstats/core/text.hpp"

namespace deptstats::store {

namespace fs = std::filesystem;

namespace {

nlohmann::json override_json(const metrics::DocOverride &record) {
    return {{"member_id", record.member_id}, {"doc_id", record.doc_id}, {"reason", record.reason}};
}

metrics::DocOverride override_from_json(const nlohmann::json &j) {
    return {j.at("member_id").get<std::string>(), j.at("doc_id").get<std::string>(), j.value("reason", std::string())};
}

template <typename T, typename Encode>
std::string to_jsonl(const std::vector<T> &items, Encode encode) {
    std::string out;
    for (const auto &item : items) {
        out += encode(item).dump();
        out.push_back('\n');
    }
    return out;
}

template <typename T, typename Decode>
std::vector<T> from_jsonl(const std::string &text, Decode decode) {
    std::vector<T> items;
    for (const auto &line : split(text, '\n')) {
        if (line.empty())
            continue;
        items.push_back(decode(nlohmann::json::parse(line)));
    }
    return items;
}

struct Collection {
    std::string name;
    std::string body;
    std::size_t count;
};

std::vector<Collection> serialize(const Snapshot &s) {
    const auto plain = [](const auto &item) { return nlohmann::json(item); };
    return {
        {"institutions", to_jsonl(s.institutions, plain), s.institutions.size()},
        {"departments", to_jsonl(s.departments, plain), s.departments.size()},
        {"members", to_jsonl(s.members, plain), s.members.size()},
        {"publications", to_jsonl(s.publications, plain), s.publications.size()},
        {"overrides", to_jsonl(s.overrides, override_json), s.overrides.size()},
        {"metrics", to_jsonl(s.metrics, plain), s.metrics.size()},
        {"provenance", to_jsonl(s.provenance, plain), s.provenance.size()},
    };
}

nlohmann::json manifest_body(const Snapshot &snapshot, const std::vector<Collection> &collections) {
    nlohmann::json listed = nlohmann::json::object();
    for (const auto &collection : collections)
        listed[collection.name] = {{"file", collection.name + ".jsonl"},
                                   {"sha256", sha256_hex(collection.body)},
                                   {"count", collection.count}};
    return {{"format", SnapshotStore::kFormat},
            {"window", snapshot.window ? nlohmann::json(*snapshot.window) : nlohmann::json(nullptr)},
            {"settings", {{"doc_type_allow_list", snapshot.doc_type_allow_list}}},
            {"collections", listed}};
}

void write_file(const fs::path &path, const std::string &body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot write " + path.string());
    out << body;
    out.flush();
    if (!out)
        throw Error("write to " + path.string() + " failed");
}

std::string temp_suffix() {
    static std::atomic<unsigned> counter{0};
    std::random_device device;
    return std::to_string(device()) + "-" + std::to_string(counter++);
}

} // namespace

void canonicalize(Snapshot &s) {
    const auto by_id = [](const auto &a, const auto &b) { return a.id < b.id; };
    std::sort(s.institutions.begin(), s.institutions.end(), by_id);
    std::sort(s.departments.begin(), s.departments.end(), by_id);
    std::sort(s.members.begin(), s.members.end(), by_id);
    std::sort(s.publications.begin(), s.publications.end(),
              [](const auto &a, const auto &b) { return a.doc_id < b.doc_id; });
    std::sort(s.overrides.begin(), s.overrides.end());
    s.overrides.erase(std::unique(s.overrides.begin(), s.overrides.end()), s.overrides.end());
    std::sort(s.metrics.begin(), s.metrics.end(),
              [](const auto &a, const auto &b) { return a.department_id < b.department_id; });
    std::sort(s.doc_type_allow_list.begin(), s.doc_type_allow_list.end());
    s.doc_type_allow_list.erase(std::unique(s.doc_type_allow_list.begin(), s.doc_type_allow_list.end()),
                                s.doc_type_allow_list.end());
}

bool same_content(const Snapshot &a, const Snapshot &b) {
    Snapshot left = a;
    Snapshot right = b;
    left.snapshot_id = right.snapshot_id = "";
    left.created_at = right.created_at = "";
    return left == right;
}

std::string compute_snapshot_id(const Snapshot &snapshot) {
    Snapshot canonical = snapshot;
    canonicalize(canonical);
    return sha256_hex(manifest_body(canonical, serialize(canonical)).dump());
}

metrics::ComputeOutput recompute_metrics(const Snapshot &snapshot) {
    if (!snapshot.window)
        throw PreconditionError("snapshot has no year window; run fetch first");
    metrics::MetricsConfig config;
    config.doc_type_allow_list.insert(snapshot.doc_type_allow_list.begin(), snapshot.doc_type_allow_list.end());
    return metrics::compute_all(snapshot.departments, snapshot.members, snapshot.publications, snapshot.overrides,
                                *snapshot.window, config);
}

SnapshotStore::SnapshotStore(fs::path root) : root_(std::move(root)) {
    fs::create_directories(root_);
}

std::string SnapshotStore::save(const Snapshot &snapshot) {
    Snapshot canonical = snapshot;
    canonicalize(canonical);
    const auto collections = serialize(canonical);
    nlohmann::json manifest = manifest_body(canonical, collections);
    const std::string id = sha256_hex(manifest.dump());

    const fs::path target = root_ / id;
    if (fs::exists(target / "manifest.json"))
        return id;

    manifest["snapshot_id"] = id;
    manifest["created_at"] =
        canonical.created_at.empty() ? format_utc(std::chrono::system_clock::now()) : canonical.created_at;

    const fs::path staging = root_ / (".tmp-" + temp_suffix());
    fs::create_directories(staging);
    try {
        for (const auto &collection : collections)
            write_file(staging / (collection.name + ".jsonl"), collection.body);
        write_file(staging / "manifest.json", manifest.dump(2) + "\n");
        std::error_code ec;
        fs::rename(staging, target, ec);
        if (ec) {
            // A concurrent writer published the same content first.
            fs::remove_all(staging);
            if (!fs::exists(target / "manifest.json"))
                throw Error("cannot publish snapshot " + id + ": " + ec.message());
        }
    } catch (...) {
        std::error_code ignored;
        fs::remove_all(staging, ignored);
        throw;
    }
    return id;
}

std::string SnapshotStore::resolve(const std::string &id) const {
    if (id.empty())
        throw NotFoundError("empty snapshot id");
    if (fs::exists(root_ / id / "manifest.json") && id.find('/') == std::string::npos)
        return id;
    if (id.size() < 8)
        throw NotFoundError("snapshot '" + id + "' not found");
    std::vector<std::string> matches;
    for (const auto &candidate : list())
        if (candidate.starts_with(id))
            matches.push_back(candidate);
    if (matches.size() == 1)
        return matches.front();
    if (matches.empty())
        throw NotFoundError("snapshot '" + id + "' not found");
    throw ValidationError("snapshot prefix '" + id + "' is ambiguous");
}

Snapshot SnapshotStore::load(const std::string &requested) const {
    const std::string id = resolve(requested);
    const fs::path directory = root_ / id;
    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(read_file((directory / "manifest.json").string()));
    } catch (const nlohmann::json::exception &error) {
        throw CorruptionError("snapshot " + id + ": unreadable manifest: " + error.what());
    }
    if (manifest.value("format", std::string()) != kFormat)
        throw CorruptionError("snapshot " + id + ": unsupported format");

    std::map<std::string, std::string> bodies;
    for (const auto &[name, entry] : manifest.at("collections").items()) {
        std::string body;
        try {
            body = read_file((directory / entry.at("file").get<std::string>()).string());
        } catch (const NotFoundError &) {
            throw CorruptionError("snapshot " + id + ": missing collection " + name);
        }
        if (sha256_hex(body) != entry.at("sha256").get<std::string>())
            throw CorruptionError("snapshot " + id + ": digest mismatch in " + name);
        bodies[name] = std::move(body);
    }

    Snapshot snapshot;
    try {
        snapshot.snapshot_id = id;
        snapshot.created_at = manifest.value("created_at", std::string());
        if (!manifest.at("window").is_null())
            snapshot.window = window_from_json(manifest.at("window"));
        snapshot.doc_type_allow_list =
            manifest.at("settings").value("doc_type_allow_list", std::vector<std::string>{});
        const auto plain = [](auto tag) {
            return [](const nlohmann::json &j) { return j.get<decltype(tag)>(); };
        };
        snapshot.institutions = from_jsonl<Institution>(bodies["institutions"], plain(Institution{}));
        snapshot.departments = from_jsonl<Department>(bodies["departments"], plain(Department{}));
        snapshot.members = from_jsonl<FacultyMember>(bodies["members"], plain(FacultyMember{}));
        snapshot.publications = from_jsonl<Publication>(bodies["publications"], plain(Publication{}));
        snapshot.overrides = from_jsonl<metrics::DocOverride>(bodies["overrides"], override_from_json);
        snapshot.metrics = from_jsonl<DepartmentMetrics>(bodies["metrics"], plain(DepartmentMetrics{}));
        snapshot.provenance = from_jsonl<provider::FetchReceipt>(bodies["provenance"], plain(provider::FetchReceipt{}));
    } catch (const nlohmann::json::exception &error) {
        throw CorruptionError("snapshot " + id + ": " + error.what());
    }
    if (compute_snapshot_id(snapshot) != id)
        throw CorruptionError("snapshot " + id + ": content does not match its id");
    return snapshot;
}

std::vector<std::string> SnapshotStore::list() const {
    std::vector<std::string> ids;
    for (const auto &entry : fs::directory_iterator(root_)) {
        const std::string name = entry.path().filename().string();
        if (entry.is_directory() && !name.starts_with(".") && fs::exists(entry.path() / "manifest.json"))
            ids.push_back(name);
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::optional<std::string> SnapshotStore::head() const {
    const fs::path path = root_ / "HEAD";
    if (!fs::exists(path))
        return std::nullopt;
    const std::string id(trim(read_file(path.string())));
    if (id.empty())
        return std::nullopt;
    return id;
}

void SnapshotStore::set_head(const std::string &snapshot_id) {
    const fs::path temp = root_ / (".HEAD-" + temp_suffix());
    write_file(temp, snapshot_id + "\n");
    fs::rename(temp, root_ / "HEAD");
}

} // namespace deptstats::store
