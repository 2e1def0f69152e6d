#pragma once

#include <filesystem>
#include <vector>

#include "deptstats/provider/gateway.hpp"

namespace deptstats::provider {

// Deterministic provider over static records. A fixture directory holds one
// JSON document per *.json file (searched recursively); documents with a
// "doc_id" field are publications, documents with an "author_id" field are
// author profiles.
//
// Search matches when the folded query is a substring of the indexed name
// or any name variant; an affiliation hint must additionally be a substring
// of some affiliation. Results are ordered by author id; publications by
// doc_id.
class FixtureBackend final : public ProviderBackend {
public:
    explicit FixtureBackend(const std::filesystem::path &directory);
    FixtureBackend(std::vector<AuthorProfileRecord> profiles, std::vector<Publication> publications);

    std::string name() const override { return "fixture"; }
    Page search_authors(const std::string &name_query, const std::optional<std::string> &affiliation_hint,
                        std::size_t start, std::size_t count) override;
    nlohmann::json author_profile(const AuthorId &id) override;
    Page publications(const std::vector<AuthorId> &authors, const YearWindow &window, std::size_t start,
                      std::size_t count) override;

    const std::vector<AuthorProfileRecord> &profiles() const { return profiles_; }
    const std::vector<Publication> &all_publications() const { return publications_; }

private:
    void sort_records();

    std::vector<AuthorProfileRecord> profiles_;
    std::vector<Publication> publications_;
};

} // namespace deptstats::provider
