#include "deptstats/provider/gateway.hpp"

#include <algorithm>
#include <map>

#include "deptstats/core/json_codec.hpp"
#include "deptstats/core/text.hpp"

namespace deptstats::provider {

void ProviderConfig::validate() const {
    if (page_size < 1)
        throw ConfigurationError("page_size must be at least 1");
    if (rate_limit_requests < 1)
        throw ConfigurationError("rate limit must allow at least one request");
    if (rate_limit_window.count() <= 0)
        throw ConfigurationError("rate limit window must be positive");
    if (authors_per_query < 1)
        throw ConfigurationError("authors_per_query must be at least 1");
}

void to_json(nlohmann::json &j, const AuthorProfileRecord &record) {
    j = nlohmann::json{{"author_id", record.author_id},
                       {"indexed_name", record.indexed_name},
                       {"name_variants", record.name_variants},
                       {"affiliation_history", record.affiliation_history},
                       {"document_count", record.document_count},
                       {"subject_areas", record.subject_areas}};
}

void from_json(const nlohmann::json &j, AuthorProfileRecord &record) {
    record.author_id = j.at("author_id").get<AuthorId>();
    record.indexed_name = j.value("indexed_name", std::string());
    record.name_variants = j.value("name_variants", std::vector<std::string>{});
    record.affiliation_history = j.value("affiliation_history", std::vector<std::string>{});
    record.document_count = j.value("document_count", std::int64_t{0});
    record.subject_areas = j.value("subject_areas", std::vector<std::string>{});
    if (record.document_count < 0)
        throw ValidationError("profile " + record.author_id.str() + " has a negative document_count");
}

void to_json(nlohmann::json &j, const FetchReceipt &receipt) {
    j = nlohmann::json{{"requested_author_ids", receipt.requested_author_ids},
                       {"retrieved_doc_count", receipt.retrieved_doc_count},
                       {"pages_fetched", receipt.pages_fetched},
                       {"cache_hits", receipt.cache_hits},
                       {"fetched_at", receipt.fetched_at},
                       {"complete", receipt.complete}};
}

void from_json(const nlohmann::json &j, FetchReceipt &receipt) {
    receipt.requested_author_ids = j.at("requested_author_ids").get<std::vector<AuthorId>>();
    receipt.retrieved_doc_count = j.at("retrieved_doc_count").get<std::int64_t>();
    receipt.pages_fetched = j.at("pages_fetched").get<std::int64_t>();
    receipt.cache_hits = j.value("cache_hits", std::int64_t{0});
    receipt.fetched_at = j.value("fetched_at", std::string());
    receipt.complete = j.value("complete", true);
}

namespace {

nlohmann::json page_to_json(const Page &page) {
    return nlohmann::json{{"total", page.total}, {"items", page.items}};
}

Page page_from_json(const nlohmann::json &j) {
    return Page{j.at("total").get<std::size_t>(), j.at("items")};
}

std::string join_ids(const std::vector<AuthorId> &ids) {
    std::vector<std::string> parts;
    parts.reserve(ids.size());
    for (const auto &id : ids)
        parts.push_back(id.str());
    return join(parts, "|");
}

} // namespace

Gateway::Gateway(std::shared_ptr<ProviderBackend> backend, ProviderConfig config, std::shared_ptr<Clock> clock,
                 std::shared_ptr<ResponseCache> cache, std::uint64_t jitter_seed, bool record_trace)
    : backend_(std::move(backend)), config_(std::move(config)), clock_(std::move(clock)), cache_(std::move(cache)),
      limiter_((config_.validate(), config_.rate_limit_requests), config_.rate_limit_window, *clock_, record_trace),
      jitter_(jitter_seed) { }

std::size_t Gateway::requests_sent() const {
    std::lock_guard lock(stats_mutex_);
    return requests_sent_;
}

std::chrono::milliseconds Gateway::backoff_delay(std::size_t attempt) {
    // Full jitter: uniform in [0, min(cap, base * 2^attempt)].
    const auto shift = std::min<std::size_t>(attempt, 30);
    const auto ceiling = std::min<std::int64_t>(config_.backoff_cap.count(),
                                                config_.backoff_base.count() * (std::int64_t{1} << shift));
    std::lock_guard lock(stats_mutex_);
    std::uniform_int_distribution<std::int64_t> pick(0, std::max<std::int64_t>(ceiling, 0));
    return std::chrono::milliseconds(pick(jitter_));
}

template <typename Call>
auto Gateway::with_retries(Call &&call) {
    for (std::size_t attempt = 0;; ++attempt) {
        limiter_.acquire();
        {
            std::lock_guard lock(stats_mutex_);
            ++requests_sent_;
        }
        try {
            return call();
        } catch (const TransportError &) {
            if (attempt >= config_.max_retries)
                throw;
        }
        clock_->sleep_for(backoff_delay(attempt));
    }
}

Page Gateway::cached_page(const CacheKey &key, const std::function<Page()> &load, bool &hit) {
    hit = false;
    if (cache_) {
        if (const auto body = cache_->get(key)) {
            hit = true;
            return page_from_json(nlohmann::json::parse(*body));
        }
    }
    Page page = with_retries(load);
    if (cache_)
        cache_->put(key, page_to_json(page).dump());
    return page;
}

std::vector<AuthorProfileRecord> Gateway::search_authors(std::string_view name_query,
                                                         const std::optional<std::string> &affiliation_hint) {
    const std::string query(trim(name_query));
    if (query.empty())
        throw ValidationError("author search needs a non-empty name");

    std::vector<AuthorProfileRecord> records;
    std::set<AuthorId> seen;
    for (std::size_t page_index = 0;; ++page_index) {
        const std::size_t start = page_index * config_.page_size;
        CacheKey key{backend_->name(), "search_authors", {{"query", fold(query)}}, page_index};
        if (affiliation_hint)
            key.params["affiliation"] = fold(*affiliation_hint);
        bool hit = false;
        const Page page = cached_page(
            key, [&] { return backend_->search_authors(query, affiliation_hint, start, config_.page_size); }, hit);
        for (const auto &item : page.items) {
            auto record = item.get<AuthorProfileRecord>();
            if (seen.insert(record.author_id).second)
                records.push_back(std::move(record));
        }
        if (page.items.empty() || start + page.items.size() >= page.total ||
            records.size() >= config_.max_search_results)
            break;
    }
    if (records.size() > config_.max_search_results)
        records.resize(config_.max_search_results);
    return records;
}

FetchResult Gateway::fetch_publications(const std::set<AuthorId> &authors, const YearWindow &window) {
    if (authors.empty())
        throw ValidationError("fetch_publications needs at least one author id");

    FetchResult result;
    result.receipt.requested_author_ids.assign(authors.begin(), authors.end());
    std::map<std::string, Publication> by_doc;

    const auto finish = [&] {
        result.publications.clear();
        for (auto &[doc_id, publication] : by_doc)
            result.publications.push_back(publication);
        result.receipt.retrieved_doc_count = static_cast<std::int64_t>(result.publications.size());
        result.receipt.fetched_at = format_utc(clock_->now());
    };

    const auto &ids = result.receipt.requested_author_ids;
    for (std::size_t batch_start = 0; batch_start < ids.size(); batch_start += config_.authors_per_query) {
        const std::vector<AuthorId> batch(
            ids.begin() + static_cast<std::ptrdiff_t>(batch_start),
            ids.begin() + static_cast<std::ptrdiff_t>(std::min(ids.size(), batch_start + config_.authors_per_query)));
        std::size_t total = 0;
        for (std::size_t page_index = 0;; ++page_index) {
            const std::size_t start = page_index * config_.page_size;
            const CacheKey key{backend_->name(),
                               "publications",
                               {{"authors", join_ids(batch)}, {"window", window.str()},
                                {"page_size", std::to_string(config_.page_size)}},
                               page_index};
            bool hit = false;
            Page page;
            try {
                page = cached_page(
                    key, [&] { return backend_->publications(batch, window, start, config_.page_size); }, hit);
            } catch (const TransportError &error) {
                result.receipt.complete = false;
                finish();
                throw IncompleteFetchError(std::string("publication page ") + std::to_string(page_index) +
                                               " failed after retries: " + error.what(),
                                           std::move(result), error.status());
            }
            ++result.receipt.pages_fetched;
            if (hit)
                ++result.receipt.cache_hits;
            if (page_index == 0)
                total = page.total;
            for (const auto &item : page.items) {
                auto publication = item.get<Publication>();
                if (!window.contains(publication.year))
                    continue;
                auto [it, inserted] = by_doc.try_emplace(publication.doc_id, publication);
                if (!inserted && publication.citation_count > it->second.citation_count)
                    it->second.citation_count = publication.citation_count;
            }
            if (page.items.empty() || start + page.items.size() >= total)
                break;
        }
    }
    finish();
    return result;
}

AuthorProfileRecord Gateway::get_author_profile(const AuthorId &id) {
    if (id.provider.empty() || id.value.empty())
        throw ValidationError("malformed author id '" + id.str() + "'");
    const CacheKey key{backend_->name(), "author_profile", {{"id", id.str()}}, 0};
    if (cache_) {
        if (const auto body = cache_->get(key))
            return nlohmann::json::parse(*body).get<AuthorProfileRecord>();
    }
    const nlohmann::json profile = with_retries([&] { return backend_->author_profile(id); });
    if (cache_)
        cache_->put(key, profile.dump());
    return profile.get<AuthorProfileRecord>();
}

} // namespace deptstats::provider
