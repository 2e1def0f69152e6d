#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "deptstats/core/errors.hpp"
#include "deptstats/core/model.hpp"
#include "deptstats/provider/clock.hpp"
#include "deptstats/provider/rate_limiter.hpp"
#include "deptstats/provider/response_cache.hpp"

namespace deptstats::provider {

struct ProviderConfig {
    std::string base_endpoint;
    std::string credential;
    std::size_t rate_limit_requests = 9;
    std::chrono::milliseconds rate_limit_window{1000};
    std::size_t page_size = 25;
    std::size_t max_retries = 3;
    std::chrono::milliseconds backoff_base{500};
    std::chrono::milliseconds backoff_cap{30000};
    // Scopus rejects very long boolean queries; larger author sets are split.
    std::size_t authors_per_query = 25;
    std::size_t max_search_results = 50;

    void validate() const;
};

struct AuthorProfileRecord {
    AuthorId author_id;
    std::string indexed_name;
    std::vector<std::string> name_variants;
    std::vector<std::string> affiliation_history;
    std::int64_t document_count = 0;
    std::vector<std::string> subject_areas;

    bool operator==(const AuthorProfileRecord &) const = default;
};

void to_json(nlohmann::json &j, const AuthorProfileRecord &record);
void from_json(const nlohmann::json &j, AuthorProfileRecord &record);

struct FetchReceipt {
    std::vector<AuthorId> requested_author_ids;
    std::int64_t retrieved_doc_count = 0;
    std::int64_t pages_fetched = 0;
    std::int64_t cache_hits = 0;
    std::string fetched_at;
    bool complete = true;

    bool operator==(const FetchReceipt &) const = default;
};

void to_json(nlohmann::json &j, const FetchReceipt &receipt);
void from_json(const nlohmann::json &j, FetchReceipt &receipt);

struct FetchResult {
    // One entry per doc_id, sorted by doc_id.
    std::vector<Publication> publications;
    FetchReceipt receipt;
};

// A page failed after all retries. Carries what was retrieved so far, with
// receipt.complete == false; callers must not persist it as a full snapshot.
class IncompleteFetchError : public TransportError {
public:
    IncompleteFetchError(const std::string &what, FetchResult partial, int status)
        : TransportError(what, status), partial_(std::move(partial)) { }
    const FetchResult &partial() const { return partial_; }

private:
    FetchResult partial_;
};

// One page of a provider listing in canonical form: items are
// AuthorProfileRecord or Publication JSON objects.
struct Page {
    std::size_t total = 0;
    nlohmann::json items = nlohmann::json::array();
};

// Raw access to one citation database. Implementations translate the
// provider's wire format into canonical records and its failures into the
// library's error types: TransportError for network/429/5xx,
// ConfigurationError for rejected credentials, NotFoundError for unknown
// ids. Retrying, caching and rate limiting are the Gateway's job.
class ProviderBackend {
public:
    virtual ~ProviderBackend() = default;
    virtual std::string name() const = 0;
    virtual Page search_authors(const std::string &name_query, const std::optional<std::string> &affiliation_hint,
                                std::size_t start, std::size_t count) = 0;
    virtual nlohmann::json author_profile(const AuthorId &id) = 0;
    // In-window publications with at least one of the given authors, in a
    // stable provider order.
    virtual Page publications(const std::vector<AuthorId> &authors, const YearWindow &window, std::size_t start,
                              std::size_t count) = 0;
};

class Gateway {
public:
    Gateway(std::shared_ptr<ProviderBackend> backend, ProviderConfig config,
            std::shared_ptr<Clock> clock = std::make_shared<SystemClock>(),
            std::shared_ptr<ResponseCache> cache = nullptr, std::uint64_t jitter_seed = std::random_device{}(),
            bool record_trace = false);

    // Candidate profiles ordered by provider relevance; empty when nothing
    // matches. Throws ValidationError on an empty query.
    std::vector<AuthorProfileRecord> search_authors(std::string_view name_query,
                                                    const std::optional<std::string> &affiliation_hint = std::nullopt);

    // Union of in-window publications of the given authors, exactly once per
    // doc_id. All pages are consumed.
    FetchResult fetch_publications(const std::set<AuthorId> &authors, const YearWindow &window);

    // Throws NotFoundError for unknown (e.g. merged-away) ids.
    AuthorProfileRecord get_author_profile(const AuthorId &id);

    const RateLimiter &rate_limiter() const { return limiter_; }
    std::size_t requests_sent() const;
    const std::string provider_name() const { return backend_->name(); }

private:
    template <typename Call>
    auto with_retries(Call &&call);
    Page cached_page(const CacheKey &key, const std::function<Page()> &load, bool &hit);
    std::chrono::milliseconds backoff_delay(std::size_t attempt);

    std::shared_ptr<ProviderBackend> backend_;
    ProviderConfig config_;
    std::shared_ptr<Clock> clock_;
    std::shared_ptr<ResponseCache> cache_;
    RateLimiter limiter_;
    mutable std::mutex stats_mutex_;
    std::mt19937_64 jitter_;
    std::size_t requests_sent_ = 0;
};

} // namespace deptstats::provider
