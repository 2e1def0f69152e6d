#pragma once

#include <chrono>
#include <string>

#include "deptstats/provider/gateway.hpp"

namespace deptstats::provider {

// Elsevier Scopus APIs:
//   search_authors -> GET /content/search/author?query=AUTHLASTNAME(..) AND AUTHFIRST(..) AND AFFIL(..)
//   author_profile -> GET /content/author/author_id/{id}?view=ENHANCED
//   publications   -> GET /content/search/scopus?query=(AU-ID(..) OR ..) AND PUBYEAR > s-1 AND PUBYEAR < e+1
//                     &view=COMPLETE
// The key travels in the X-ELS-APIKey header. Author ids use provider "scopus".
class ScopusBackend final : public ProviderBackend {
public:
    explicit ScopusBackend(const ProviderConfig &config, std::chrono::seconds timeout = std::chrono::seconds(30));

    std::string name() const override { return "scopus"; }
    Page search_authors(const std::string &name_query, const std::optional<std::string> &affiliation_hint,
                        std::size_t start, std::size_t count) override;
    nlohmann::json author_profile(const AuthorId &id) override;
    Page publications(const std::vector<AuthorId> &authors, const YearWindow &window, std::size_t start,
                      std::size_t count) override;

    static constexpr const char *kDefaultEndpoint = "https://api.elsevier.com";

private:
    nlohmann::json get_json(const std::string &path, const std::vector<std::pair<std::string, std::string>> &query);

    std::string endpoint_;
    std::string credential_;
    std::chrono::seconds timeout_;
};

// Field mapping from Scopus response bodies to canonical records; exposed
// for testing against captured responses.
namespace scopus {

std::string author_search_query(const std::string &name_query, const std::optional<std::string> &affiliation_hint);
std::string document_search_query(const std::vector<AuthorId> &authors, const YearWindow &window);
Page map_author_search(const nlohmann::json &body);
nlohmann::json map_author_retrieval(const nlohmann::json &body);
// single_author is used when the response omits per-document author lists.
Page map_document_search(const nlohmann::json &body, const std::optional<AuthorId> &single_author);

} // namespace scopus

} // namespace deptstats::provider
