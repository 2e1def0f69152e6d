#include "deptstats/cli/cli.hpp"

#include <algorithm>
#include <atomic>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "deptstats/api/service.hpp"
#include "deptstats/core/config.hpp"
#include "deptstats/core/errors.hpp"
#include "deptstats/core/json_codec.hpp"
#include "deptstats/core/text.hpp"
#include "deptstats/provider/fixture_backend.hpp"
#include "deptstats/provider/scopus_backend.hpp"
#include "deptstats/ranking/comparator.hpp"
#include "deptstats/roster/disambiguation.hpp"
#include "deptstats/roster/registry.hpp"
#include "deptstats/store/export.hpp"
#include "deptstats/store/snapshot_store.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace deptstats::cli {

Environment Environment::system() {
    Environment environment;
    environment.getenv = [](const std::string &name) -> std::optional<std::string> {
        if (const char *value = std::getenv(name.c_str()))
            return std::string(value);
        return std::nullopt;
    };
    environment.clock = std::make_shared<provider::SystemClock>();
    return environment;
}

namespace {

std::atomic<bool> g_interrupted{false};

extern "C" void on_interrupt(int) { g_interrupted.store(true); }

class InterruptedError : public Error {
public:
    InterruptedError() : Error("interrupted; no snapshot written") { }
};

// Installs the SIGINT handler for the duration of a long-running command.
class InterruptGuard {
public:
    InterruptGuard() {
        g_interrupted.store(false);
        previous_ = std::signal(SIGINT, on_interrupt);
    }
    ~InterruptGuard() { std::signal(SIGINT, previous_); }
    InterruptGuard(const InterruptGuard &) = delete;
    InterruptGuard &operator=(const InterruptGuard &) = delete;

    static void check() {
        if (g_interrupted.load())
            throw InterruptedError();
    }

private:
    void (*previous_)(int) = SIG_DFL;
};

struct GlobalOptions {
    std::string workspace;
    std::string config_path;
    std::string provider;
    std::string fixture_dir;
    std::string snapshot;
    bool no_cache = false;
};

struct Context {
    Config config;
    fs::path workspace;
    std::string provider;
    std::optional<std::string> fixture_dir;
    std::optional<std::string> snapshot_ref;
    bool use_cache = true;
    Environment environment;
    std::ostream &out;
    std::ostream &err;

    store::SnapshotStore store() const { return store::SnapshotStore(workspace / "snapshots"); }
};

std::size_t display_width(const std::string &text) {
    return static_cast<std::size_t>(
        std::count_if(text.begin(), text.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

void print_table(std::ostream &out, const std::vector<std::string> &headers,
                 const std::vector<std::vector<std::string>> &rows) {
    std::vector<std::size_t> widths(headers.size());
    for (std::size_t c = 0; c < headers.size(); ++c)
        widths[c] = display_width(headers[c]);
    for (const auto &row : rows)
        for (std::size_t c = 0; c < row.size() && c < widths.size(); ++c)
            widths[c] = std::max(widths[c], display_width(row[c]));

    const auto emit = [&](const std::vector<std::string> &cells) {
        std::string line;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c > 0)
                line += "  ";
            line += cells[c];
            if (c + 1 < cells.size())
                line.append(widths[c] - display_width(cells[c]), ' ');
        }
        out << line << "\n";
    };
    emit(headers);
    std::vector<std::string> rule;
    for (const auto width : widths)
        rule.emplace_back(width, '-');
    emit(rule);
    for (const auto &row : rows)
        emit(row);
}

void print_summary(std::ostream &out, const json &summary) { out << summary.dump() << "\n"; }

std::vector<std::string> comma_list(const std::string &text) {
    std::vector<std::string> values;
    for (const auto &part : split(text, ','))
        if (const auto value = trim(part); !value.empty())
            values.emplace_back(value);
    return values;
}

std::size_t positive(std::int64_t value, const std::string &key) {
    if (value <= 0)
        throw ConfigurationError(key + " must be positive");
    return static_cast<std::size_t>(value);
}

// ---- snapshot plumbing -----------------------------------------------------

std::optional<store::Snapshot> load_current(const Context &ctx) {
    const auto store = ctx.store();
    if (ctx.snapshot_ref)
        return store.load(*ctx.snapshot_ref);
    if (const auto head = store.head())
        return store.load(*head);
    return std::nullopt;
}

store::Snapshot require_current(const Context &ctx) {
    auto snapshot = load_current(ctx);
    if (!snapshot)
        throw ValidationError("no snapshot in workspace " + ctx.workspace.string() + "; run ingest first");
    return std::move(*snapshot);
}

std::string commit(const Context &ctx, store::Snapshot snapshot) {
    snapshot.snapshot_id.clear();
    snapshot.created_at.clear();
    auto store = ctx.store();
    const auto id = store.save(snapshot);
    store.set_head(id);
    return id;
}

roster::Registry registry_of(const store::Snapshot &snapshot) {
    return roster::Registry(snapshot.institutions, snapshot.departments, snapshot.members);
}

// ---- provider plumbing -----------------------------------------------------

provider::ProviderConfig provider_config(const Context &ctx) {
    provider::ProviderConfig config;
    const std::string section = ctx.provider + ".";
    const auto &c = ctx.config;
    if (ctx.provider == "fixture") {
        // Local files have no quota; keep the limiter but make it generous.
        config.rate_limit_requests = 10000;
        config.backoff_base = std::chrono::milliseconds(1);
        config.backoff_cap = std::chrono::milliseconds(10);
    }
    config.base_endpoint = c.get_or(section + "base_endpoint", config.base_endpoint);
    config.rate_limit_requests = positive(
        c.get_int(section + "rate_limit_requests", static_cast<std::int64_t>(config.rate_limit_requests)),
        section + "rate_limit_requests");
    config.rate_limit_window =
        std::chrono::milliseconds(c.get_int(section + "rate_limit_window_ms", config.rate_limit_window.count()));
    config.page_size =
        positive(c.get_int(section + "page_size", static_cast<std::int64_t>(config.page_size)), section + "page_size");
    config.max_retries = static_cast<std::size_t>(
        std::max<std::int64_t>(0, c.get_int(section + "max_retries", static_cast<std::int64_t>(config.max_retries))));
    config.backoff_base = std::chrono::milliseconds(c.get_int(section + "backoff_base_ms", config.backoff_base.count()));
    config.backoff_cap = std::chrono::milliseconds(c.get_int(section + "backoff_cap_ms", config.backoff_cap.count()));
    config.authors_per_query = positive(
        c.get_int(section + "authors_per_query", static_cast<std::int64_t>(config.authors_per_query)),
        section + "authors_per_query");
    config.max_search_results = positive(
        c.get_int(section + "max_search_results", static_cast<std::int64_t>(config.max_search_results)),
        section + "max_search_results");
    return config;
}

std::unique_ptr<provider::Gateway> make_gateway(const Context &ctx) {
    auto config = provider_config(ctx);
    std::shared_ptr<provider::ProviderBackend> backend;
    if (ctx.provider == "fixture") {
        if (!ctx.fixture_dir)
            throw ValidationError("--provider fixture needs --fixture-dir (or fixture_dir in the config file)");
        if (!fs::is_directory(*ctx.fixture_dir))
            throw ValidationError("fixture directory not found: " + *ctx.fixture_dir);
        backend = std::make_shared<provider::FixtureBackend>(*ctx.fixture_dir);
    } else if (ctx.provider == "scopus") {
        const auto key = ctx.environment.getenv ? ctx.environment.getenv("BIBLIO_API_KEY") : std::nullopt;
        if (!key || key->empty())
            throw ConfigurationError("BIBLIO_API_KEY is not set; the scopus provider needs an API key");
        config.credential = *key;
        if (config.base_endpoint.empty())
            config.base_endpoint = provider::ScopusBackend::kDefaultEndpoint;
        backend = std::make_shared<provider::ScopusBackend>(config);
    } else {
        throw ValidationError("unknown provider '" + ctx.provider + "' (expected scopus or fixture)");
    }
    config.validate();

    std::shared_ptr<provider::ResponseCache> cache;
    if (ctx.use_cache && ctx.config.get_or("cache.enabled", "true") != "false") {
        const fs::path dir = ctx.config.get_or("cache.dir", (ctx.workspace / "cache").string());
        const auto ttl_days = ctx.config.get_int("cache.ttl_days", 30);
        cache = std::make_shared<provider::ResponseCache>(dir, std::chrono::seconds(ttl_days * 24 * 3600),
                                                          *ctx.environment.clock);
    }
    return std::make_unique<provider::Gateway>(backend, config, ctx.environment.clock, cache,
                                               std::random_device{}());
}

// ---- commands --------------------------------------------------------------

struct IngestOptions {
    std::string roster;
    std::string institutions;
    std::string tags;
};

int cmd_ingest(const Context &ctx, const IngestOptions &options) {
    const auto roster_file = roster::RosterFile::load(options.roster);

    std::string institutions_path = options.institutions;
    if (institutions_path.empty())
        institutions_path = ctx.config.get_or("institutions", "");
    if (institutions_path.empty()) {
        const auto sibling = fs::path(options.roster).parent_path() / "institutions.csv";
        if (!fs::exists(sibling))
            throw ValidationError("no institution list: pass --institutions or place institutions.csv next to the roster");
        institutions_path = sibling.string();
    }
    const auto institution_list = roster::parse_institution_list(read_file(institutions_path));

    auto current = load_current(ctx).value_or(store::Snapshot{});
    auto registry = registry_of(current);
    const auto delta = registry.ingest(roster_file, institution_list);
    std::size_t tagged = 0;
    if (!options.tags.empty()) {
        const auto rows = roster::parse_tag_file(read_file(options.tags));
        tagged = registry.apply_tags(rows);
    }

    store::Snapshot next = current;
    next.institutions = registry.institutions();
    next.departments = registry.departments();
    next.members = registry.members();
    store::canonicalize(next);
    store::canonicalize(current);
    const bool changed = next.institutions != current.institutions || next.departments != current.departments ||
                         next.members != current.members;
    if (changed)
        next.metrics.clear(); // stale until the next compute
    const auto id = commit(ctx, next);

    for (const auto &warning : delta.warnings)
        ctx.err << "warning: " << warning << "\n";
    print_summary(ctx.out, {{"command", "ingest"},
                            {"snapshot_id", id},
                            {"changed", changed},
                            {"institutions_created", delta.institutions_created.size()},
                            {"departments_created", delta.departments_created.size()},
                            {"departments_updated", delta.departments_updated.size()},
                            {"members_created", delta.members_created.size()},
                            {"members_updated", delta.members_updated.size()},
                            {"departments_tagged", tagged},
                            {"warnings", delta.warnings}});

    std::map<std::string, std::size_t> departments_per_institution;
    for (const auto &department : next.departments)
        ++departments_per_institution[department.institution_id];
    std::vector<std::vector<std::string>> rows;
    for (const auto &institution : next.institutions)
        rows.push_back({institution.abbreviation, std::to_string(departments_per_institution[institution.id]),
                        std::to_string(institution.trs_count)});
    print_table(ctx.out, {"institution", "departments", "trs_members"}, rows);
    return kSuccess;
}

struct ResolveOptions {
    std::string department;
    std::string out;
};

int cmd_resolve(const Context &ctx, const ResolveOptions &options) {
    const auto snapshot = require_current(ctx);
    const auto registry = registry_of(snapshot);

    const Department *department = registry.find_department(options.department);
    if (!department) {
        const auto matches = registry.find_departments_by_name(options.department);
        if (matches.empty())
            throw NotFoundError("unknown department '" + options.department + "'");
        if (matches.size() > 1) {
            std::vector<std::string> ids;
            for (const auto &match : matches)
                ids.push_back(match.id);
            throw ValidationError("department name '" + options.department +
                                  "' is ambiguous; use one of: " + join(ids, ", "));
        }
        department = registry.find_department(matches.front().id);
    }
    const auto *institution = registry.find_institution(department->institution_id);
    const auto members = registry.department_members(department->id);

    auto gateway = make_gateway(ctx);
    roster::CoauthorIndex coauthors;
    if (snapshot.window)
        coauthors = roster::build_coauthor_index(snapshot.publications);

    std::vector<std::vector<std::string>> sheet;
    std::vector<std::vector<std::string>> table;
    std::size_t proposals = 0;
    std::size_t accepted_count = 0;
    const roster::MergePolicy policy;
    for (const auto &member : members) {
        const auto candidates =
            gateway->search_authors(member.display_name, institution ? std::optional(institution->name) : std::nullopt);
        if (member.author_ids.empty()) {
            for (const auto &candidate : candidates)
                sheet.push_back({member.id, member.display_name, std::string(to_string(member.profile_status)), "",
                                 candidate.author_id.str(), candidate.indexed_name, "", "", ""});
            table.push_back({member.id, std::string(to_string(member.profile_status)),
                             std::to_string(candidates.size()), "-"});
            proposals += candidates.size();
            continue;
        }
        provider::AuthorProfileRecord anchor;
        try {
            anchor = gateway->get_author_profile(member.author_ids.front());
        } catch (const NotFoundError &) {
            sheet.push_back({member.id, member.display_name, "stale_author_id", member.author_ids.front().str(), "", "",
                             "", "", "anchor profile no longer exists"});
            table.push_back({member.id, "stale", "0", "-"});
            continue;
        }
        const auto merges = roster::propose_merges(member, anchor, candidates, coauthors, policy);
        std::size_t member_accepted = 0;
        for (const auto &merge : merges) {
            std::vector<std::string> evidence;
            for (const auto &item : merge.evidence)
                evidence.push_back(std::string(to_string(item.kind)) + "=" + render_fixed2(item.strength));
            const bool ok = roster::accepted(merge, policy);
            member_accepted += ok ? 1 : 0;
            std::string indexed_name;
            for (const auto &candidate : candidates)
                if (candidate.author_id == merge.profile_b)
                    indexed_name = candidate.indexed_name;
            sheet.push_back({member.id, member.display_name, std::string(to_string(member.profile_status)),
                             merge.profile_a.str(), merge.profile_b.str(), indexed_name, render_fixed2(merge.score),
                             ok ? "yes" : "no", join(evidence, ";")});
        }
        proposals += merges.size();
        accepted_count += member_accepted;
        table.push_back({member.id, std::string(to_string(member.profile_status)), std::to_string(merges.size()),
                         std::to_string(member_accepted)});
    }

    std::string body = csv_line({"member_id", "member", "status", "anchor", "candidate", "indexed_name", "score",
                                 "suggested", "evidence"});
    for (const auto &row : sheet)
        body += csv_line(row);
    fs::path out_path = options.out.empty() ? ctx.workspace / "worksheets" / (department->id + ".csv")
                                            : fs::path(options.out);
    if (out_path.has_parent_path())
        fs::create_directories(out_path.parent_path());
    std::ofstream(out_path, std::ios::binary) << body;

    print_summary(ctx.out, {{"command", "resolve"},
                            {"department_id", department->id},
                            {"members", members.size()},
                            {"candidates", proposals},
                            {"suggested_merges", accepted_count},
                            {"worksheet", out_path.string()},
                            {"requests_sent", gateway->requests_sent()}});
    print_table(ctx.out, {"member", "status", "candidates", "suggested"}, table);
    return kSuccess;
}

struct FetchOptions {
    std::string window;
};

int cmd_fetch(const Context &ctx, const FetchOptions &options) {
    auto current = require_current(ctx);
    if (current.members.empty())
        throw ValidationError("registry is empty; run ingest first");
    const auto window = YearWindow::parse(options.window);
    auto gateway = make_gateway(ctx);

    struct Job {
        std::string department_id;
        std::set<AuthorId> authors;
    };
    std::map<std::string, Job> by_department;
    for (const auto &member : current.members)
        for (const auto &id : member.author_ids) {
            auto &job = by_department[member.department_id];
            job.department_id = member.department_id;
            job.authors.insert(id);
        }
    std::vector<Job> jobs;
    for (auto &[id, job] : by_department)
        jobs.push_back(std::move(job));

    std::vector<std::optional<provider::FetchResult>> results(jobs.size());
    std::atomic<std::size_t> next_job{0};
    std::mutex failure_mutex;
    std::exception_ptr failure;

    InterruptGuard guard;
    const auto workers = std::min<std::size_t>(
        jobs.size(), positive(ctx.config.get_int("fetch.parallelism", 4), "fetch.parallelism"));
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w)
        threads.emplace_back([&] {
            while (true) {
                {
                    const std::lock_guard lock(failure_mutex);
                    if (failure)
                        return;
                }
                const auto index = next_job.fetch_add(1);
                if (index >= jobs.size())
                    return;
                try {
                    InterruptGuard::check();
                    results[index] = gateway->fetch_publications(jobs[index].authors, window);
                } catch (...) {
                    const std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    return;
                }
            }
        });
    for (auto &thread : threads)
        thread.join();
    InterruptGuard::check();
    if (failure)
        std::rethrow_exception(failure);

    std::map<std::string, Publication> merged;
    std::vector<provider::FetchReceipt> receipts;
    std::int64_t pages = 0;
    std::int64_t hits = 0;
    std::vector<std::vector<std::string>> table;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const auto &result = *results[i];
        for (const auto &publication : result.publications) {
            const auto [it, inserted] = merged.emplace(publication.doc_id, publication);
            if (!inserted && publication.citation_count > it->second.citation_count)
                it->second = publication;
        }
        receipts.push_back(result.receipt);
        pages += result.receipt.pages_fetched;
        hits += result.receipt.cache_hits;
        table.push_back({jobs[i].department_id, std::to_string(jobs[i].authors.size()),
                         std::to_string(result.receipt.retrieved_doc_count),
                         std::to_string(result.receipt.pages_fetched)});
    }
    std::vector<Publication> publications;
    for (auto &[id, publication] : merged)
        publications.push_back(std::move(publication));

    store::Snapshot next = current;
    store::canonicalize(current);
    next.window = window;
    next.publications = std::move(publications);
    store::canonicalize(next);
    const bool unchanged = current.window == next.window && current.publications == next.publications;
    std::string id;
    if (unchanged) {
        id = current.snapshot_id;
        ctx.store().set_head(id);
    } else {
        next.provenance = std::move(receipts);
        next.metrics.clear();
        id = commit(ctx, next);
    }

    print_summary(ctx.out, {{"command", "fetch"},
                            {"snapshot_id", id},
                            {"provider", gateway->provider_name()},
                            {"window", window.str()},
                            {"changed", !unchanged},
                            {"departments_fetched", jobs.size()},
                            {"publications", next.publications.size()},
                            {"pages_fetched", pages},
                            {"cache_hits", hits},
                            {"requests_sent", gateway->requests_sent()}});
    print_table(ctx.out, {"department", "author_ids", "documents", "pages"}, table);
    return kSuccess;
}

struct ComputeOptions {
    std::string doc_types;
};

int cmd_compute(const Context &ctx, const ComputeOptions &options) {
    auto current = require_current(ctx);
    if (!current.window)
        throw PreconditionError("no publications fetched yet; run fetch first");
    store::Snapshot next = current;
    const auto doc_types = options.doc_types.empty() ? ctx.config.get_or("metrics.doc_types", "") : options.doc_types;
    next.doc_type_allow_list = comma_list(doc_types);

    InterruptGuard guard;
    const auto output = store::recompute_metrics(next);
    InterruptGuard::check();
    next.metrics = output.metrics;
    const auto id = commit(ctx, next);

    for (const auto &warning : output.warnings)
        ctx.err << "warning: " << warning << "\n";
    std::int64_t duplicates = 0;
    for (const auto &report : output.reports)
        duplicates += report.duplicates_removed;
    print_summary(ctx.out, {{"command", "compute"},
                            {"snapshot_id", id},
                            {"window", next.window->str()},
                            {"departments", output.metrics.size()},
                            {"duplicates_removed", duplicates},
                            {"warnings", output.warnings.size()}});

    std::vector<std::vector<std::string>> rows;
    for (const auto &m : output.metrics)
        rows.push_back({m.department_id, std::to_string(m.trs_total), std::to_string(m.trs_without_profile),
                        std::to_string(m.paper_count), std::to_string(m.citation_count),
                        render_fixed2(m.papers_per_trs()), render_fixed2(m.citations_per_trs()),
                        render_fixed2(m.citations_per_paper())});
    print_table(ctx.out,
                {"department", "trs", "no_profile", "papers", "citations", "papers/trs", "citations/trs",
                 "citations/paper"},
                rows);
    return kSuccess;
}

struct RankOptions {
    std::string institution;
    std::string query;
    std::string departments;
    std::string exclude;
    std::string metric = "citations_per_trs";
    std::string direction = "desc";
    std::optional<std::size_t> top;
};

int cmd_rank(const Context &ctx, const RankOptions &options) {
    const auto snapshot = require_current(ctx);
    const int selectors =
        !options.institution.empty() + !options.query.empty() + !options.departments.empty();
    if (selectors != 1)
        throw ValidationError("rank needs exactly one of --institution, --query, --departments");
    if (snapshot.metrics.empty())
        throw PreconditionError("no metrics in snapshot; run compute first");

    const ranking::Comparator comparator(snapshot.institutions, snapshot.departments, snapshot.metrics);
    const auto metric = ranking::parse_metric(options.metric);
    const auto direction = ranking::parse_direction(options.direction);
    ranking::RankingTable table;
    if (!options.institution.empty()) {
        table = comparator.rank_institution(options.institution, metric, options.top, direction);
    } else if (!options.query.empty()) {
        const auto excluded = comma_list(options.exclude);
        table = comparator.rank_thematic(comma_list(options.query), {excluded.begin(), excluded.end()}, metric,
                                         options.top, direction);
    } else {
        table = comparator.compare_adhoc(comma_list(options.departments), metric, direction);
    }

    ctx.out << ranking::to_json(table).dump() << "\n";
    std::vector<std::vector<std::string>> rows;
    for (const auto &row : table.rows)
        rows.push_back({std::to_string(row.rank), row.institution_abbreviation, row.department_name,
                        std::to_string(row.metrics.trs_total), std::to_string(row.metrics.paper_count),
                        std::to_string(row.metrics.citation_count), render_fixed2(row.metrics.papers_per_trs()),
                        render_fixed2(row.metrics.citations_per_trs()),
                        render_fixed2(row.metrics.citations_per_paper())});
    print_table(ctx.out,
                {"rank", "institution", "department", "trs", "papers", "citations", "papers/trs", "citations/trs",
                 "citations/paper"},
                rows);
    return kSuccess;
}

struct ExportOptions {
    std::string format = "csv";
    std::string out;
};

int cmd_export(const Context &ctx, const ExportOptions &options) {
    const auto snapshot = require_current(ctx);
    const auto format = store::parse_export_format(options.format);
    const auto body = store::export_full_table(snapshot, format);
    if (options.out.empty())
        throw ValidationError("export needs --out <path>");

    const fs::path out_path(options.out);
    if (out_path.has_parent_path())
        fs::create_directories(out_path.parent_path());
    const fs::path temp = out_path.string() + ".tmp";
    {
        std::ofstream stream(temp, std::ios::binary);
        stream << body;
        if (!stream)
            throw ValidationError("cannot write " + temp.string());
    }
    fs::rename(temp, out_path);

    const std::size_t rows = snapshot.metrics.size();
    print_summary(ctx.out, {{"command", "export"},
                            {"snapshot_id", snapshot.snapshot_id},
                            {"format", options.format},
                            {"rows", rows},
                            {"out", out_path.string()}});
    print_table(ctx.out, {"format", "rows", "bytes", "path"},
                {{options.format, std::to_string(rows), std::to_string(body.size()), out_path.string()}});
    return kSuccess;
}

struct ServeOptions {
    std::string addr;
    std::string static_dir;
};

int cmd_serve(const Context &ctx, const ServeOptions &options) {
    const auto snapshot = require_current(ctx);
    const auto addr = options.addr.empty() ? ctx.config.get_or("api.addr", "127.0.0.1:8080") : options.addr;
    const auto colon = addr.rfind(':');
    if (colon == std::string::npos)
        throw ValidationError("--addr must be host:port, got '" + addr + "'");
    const auto host = addr.substr(0, colon);
    int port = 0;
    try {
        port = std::stoi(addr.substr(colon + 1));
    } catch (const std::exception &) {
        throw ValidationError("invalid port in '" + addr + "'");
    }
    if (port <= 0 || port > 65535)
        throw ValidationError("invalid port in '" + addr + "'");

    const api::Service service(snapshot, ctx.config.get_or("api.cors_origin", "*"));
    print_summary(ctx.out, {{"command", "serve"}, {"snapshot_id", snapshot.snapshot_id}, {"addr", addr}});
    print_table(ctx.out, {"snapshot", "departments", "addr"},
                {{snapshot.snapshot_id.substr(0, 12), std::to_string(snapshot.metrics.size()), addr}});
    ctx.out.flush();
    service.serve(host, port,
                  options.static_dir.empty() ? std::nullopt : std::optional<std::string>(options.static_dir));
    return kSuccess;
}

struct MergeOptions {
    std::string member;
    std::string from;
    std::string into;
};

int cmd_merge(const Context &ctx, const MergeOptions &options) {
    const auto current = require_current(ctx);
    auto registry = registry_of(current);
    fs::create_directories(ctx.workspace);
    roster::AuditLog audit(ctx.workspace / "audit.jsonl", *ctx.environment.clock);
    const auto member =
        registry.apply_merge(options.member, AuthorId::parse(options.from), AuthorId::parse(options.into), &audit);
    store::Snapshot next = current;
    next.members = registry.members();
    const auto id = commit(ctx, next);

    print_summary(ctx.out, {{"command", "merge"},
                            {"snapshot_id", id},
                            {"member_id", member.id},
                            {"merged_pairs", member.merged_pairs.size()}});
    std::vector<std::vector<std::string>> rows;
    for (const auto &[a, b] : member.merged_pairs)
        rows.push_back({member.id, a.str(), b.str()});
    print_table(ctx.out, {"member", "from", "into"}, rows);
    return kSuccess;
}

int cmd_snapshots(const Context &ctx) {
    const auto store = ctx.store();
    const auto head = store.head();
    const auto ids = store.list();
    print_summary(ctx.out, {{"command", "snapshots"}, {"head", head ? json(*head) : json(nullptr)}, {"count", ids.size()}});
    std::vector<std::vector<std::string>> rows;
    for (const auto &id : ids) {
        const auto snapshot = store.load(id);
        rows.push_back({id, snapshot.created_at, snapshot.window ? snapshot.window->str() : "-",
                        std::to_string(snapshot.metrics.size()), head && *head == id ? "*" : ""});
    }
    print_table(ctx.out, {"snapshot", "created_at", "window", "metrics", "head"}, rows);
    return kSuccess;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err, const Environment &environment) {
    CLI::App app{"Department-level bibliometric statistics pipeline", "deptstats"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    app.add_option("--workspace", global.workspace, "Workspace directory (snapshots, cache, audit log)");
    app.add_option("--config", global.config_path, "Config file (default: ./deptstats.toml when present)");
    app.add_option("--provider", global.provider, "Citation provider: scopus or fixture");
    app.add_option("--fixture-dir", global.fixture_dir, "Record directory for the fixture provider");
    app.add_option("--snapshot", global.snapshot, "Snapshot id or prefix to read instead of HEAD");
    app.add_flag("--no-cache", global.no_cache, "Bypass the response cache");

    IngestOptions ingest;
    auto *ingest_cmd = app.add_subcommand("ingest", "Load a faculty roster into the registry");
    ingest_cmd->add_option("--roster", ingest.roster, "Roster CSV")->required();
    ingest_cmd->add_option("--institutions", ingest.institutions, "Institution list CSV");
    ingest_cmd->add_option("--tags", ingest.tags, "Thematic tags CSV");

    ResolveOptions resolve;
    auto *resolve_cmd = app.add_subcommand("resolve", "Search profiles and write a merge review worksheet");
    resolve_cmd->add_option("--department", resolve.department, "Department id or name")->required();
    resolve_cmd->add_option("--out", resolve.out, "Worksheet path");

    FetchOptions fetch;
    auto *fetch_cmd = app.add_subcommand("fetch", "Retrieve publications for every resolved member");
    fetch_cmd->add_option("--window", fetch.window, "Publication years, start:end")->required();

    ComputeOptions compute;
    auto *compute_cmd = app.add_subcommand("compute", "Compute department metrics");
    compute_cmd->add_option("--doc-types", compute.doc_types, "Comma-separated document-type allow-list");

    RankOptions rank;
    std::size_t top = 0;
    auto *rank_cmd = app.add_subcommand("rank", "Rank departments");
    rank_cmd->add_option("--institution", rank.institution, "Institution abbreviation or id");
    rank_cmd->add_option("--query", rank.query, "Comma-separated thematic terms");
    rank_cmd->add_option("--departments", rank.departments, "Comma-separated department ids (2 to 5)");
    rank_cmd->add_option("--exclude", rank.exclude, "Comma-separated department ids to drop");
    rank_cmd->add_option("--metric", rank.metric, "Ranking metric");
    rank_cmd->add_option("--direction", rank.direction, "desc or asc");
    auto *top_opt = rank_cmd->add_option("--top", top, "Keep the first k rows");

    ExportOptions exporting;
    auto *export_cmd = app.add_subcommand("export", "Write the full results table");
    export_cmd->add_option("--format", exporting.format, "csv or json");
    export_cmd->add_option("--out", exporting.out, "Output path")->required();

    ServeOptions serve;
    auto *serve_cmd = app.add_subcommand("serve", "Serve the read-only HTTP API");
    serve_cmd->add_option("--addr", serve.addr, "host:port");
    serve_cmd->add_option("--static", serve.static_dir, "Explorer UI bundle directory");

    MergeOptions merge;
    auto *merge_cmd = app.add_subcommand("merge", "Record that two author profiles are the same person");
    merge_cmd->add_option("--member", merge.member, "Member id")->required();
    merge_cmd->add_option("--from", merge.from, "Duplicate profile, provider:id")->required();
    merge_cmd->add_option("--into", merge.into, "Surviving profile, provider:id")->required();

    auto *snapshots_cmd = app.add_subcommand("snapshots", "List stored snapshots");

    std::vector<std::string> argv_storage{"deptstats"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char *> argv;
    for (const auto &arg : argv_storage)
        argv.push_back(arg.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kValidationError;
    }

    try {
        Config config;
        std::string config_path = global.config_path;
        if (config_path.empty() && fs::exists("deptstats.toml"))
            config_path = "deptstats.toml";
        if (!config_path.empty())
            config = Config::load(config_path);

        Context ctx{config, {}, {}, {}, {}, !global.no_cache, environment, out, err};
        if (!ctx.environment.clock)
            ctx.environment.clock = std::make_shared<provider::SystemClock>();
        ctx.workspace = global.workspace.empty() ? config.get_or("workspace", "deptstats-workspace") : global.workspace;
        ctx.provider = global.provider.empty() ? config.get_or("provider", "scopus") : global.provider;
        if (!global.fixture_dir.empty())
            ctx.fixture_dir = global.fixture_dir;
        else if (const auto dir = config.get("fixture_dir"))
            ctx.fixture_dir = *dir;
        if (!global.snapshot.empty())
            ctx.snapshot_ref = global.snapshot;

        if (*ingest_cmd)
            return cmd_ingest(ctx, ingest);
        if (*resolve_cmd)
            return cmd_resolve(ctx, resolve);
        if (*fetch_cmd)
            return cmd_fetch(ctx, fetch);
        if (*compute_cmd)
            return cmd_compute(ctx, compute);
        if (*rank_cmd) {
            if (top_opt->count() > 0)
                rank.top = top;
            return cmd_rank(ctx, rank);
        }
        if (*export_cmd)
            return cmd_export(ctx, exporting);
        if (*serve_cmd)
            return cmd_serve(ctx, serve);
        if (*merge_cmd)
            return cmd_merge(ctx, merge);
        if (*snapshots_cmd)
            return cmd_snapshots(ctx);
        return kValidationError;
    } catch (const InterruptedError &e) {
        err << "deptstats: " << e.what() << "\n";
        return kInterrupted;
    } catch (const TransportError &e) {
        err << "deptstats: transport error: " << e.what() << "\n";
        return kTransportError;
    } catch (const std::exception &e) {
        err << "deptstats: " << e.what() << "\n";
        return kValidationError;
    }
}

} // namespace deptstats::cli
