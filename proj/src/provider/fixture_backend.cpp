#include "deptstats/provider/fixture_backend.hpp"

#include <algorithm>
#include <set>

#include "deptstats/core/json_codec.hpp"
#include "deptstats/core/text.hpp"

namespace deptstats::provider {

namespace fs = std::filesystem;

namespace {

template <typename T>
Page slice(const std::vector<T> &matches, std::size_t start, std::size_t count) {
    Page page;
    page.total = matches.size();
    for (std::size_t i = start; i < matches.size() && i < start + count; ++i)
        page.items.push_back(matches[i]);
    return page;
}

bool any_contains(const std::vector<std::string> &haystacks, const std::string &folded_needle) {
    return std::any_of(haystacks.begin(), haystacks.end(),
                       [&](const std::string &h) { return fold(h).find(folded_needle) != std::string::npos; });
}

} // namespace

FixtureBackend::FixtureBackend(const fs::path &directory) {
    if (!fs::is_directory(directory))
        throw NotFoundError("fixture directory '" + directory.string() + "' does not exist");
    std::vector<fs::path> files;
    for (const auto &entry : fs::recursive_directory_iterator(directory))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto &file : files) {
        nlohmann::json document;
        try {
            document = nlohmann::json::parse(read_file(file.string()));
        } catch (const nlohmann::json::exception &error) {
            throw ValidationError("fixture file " + file.string() + ": " + error.what());
        }
        if (document.contains("doc_id"))
            publications_.push_back(document.get<Publication>());
        else if (document.contains("author_id"))
            profiles_.push_back(document.get<AuthorProfileRecord>());
        else
            throw ValidationError("fixture file " + file.string() + " is neither a profile nor a publication");
    }
    sort_records();
}

FixtureBackend::FixtureBackend(std::vector<AuthorProfileRecord> profiles, std::vector<Publication> publications)
    : profiles_(std::move(profiles)), publications_(std::move(publications)) {
    sort_records();
}

void FixtureBackend::sort_records() {
    std::sort(profiles_.begin(), profiles_.end(),
              [](const auto &a, const auto &b) { return a.author_id < b.author_id; });
    std::sort(publications_.begin(), publications_.end(),
              [](const auto &a, const auto &b) { return a.doc_id < b.doc_id; });
}

Page FixtureBackend::search_authors(const std::string &name_query, const std::optional<std::string> &affiliation_hint,
                                    std::size_t start, std::size_t count) {
    const std::string needle = fold(name_query);
    const std::string affiliation = affiliation_hint ? fold(*affiliation_hint) : std::string();
    std::vector<AuthorProfileRecord> matches;
    for (const auto &profile : profiles_) {
        const bool name_match = fold(profile.indexed_name).find(needle) != std::string::npos ||
                                any_contains(profile.name_variants, needle);
        if (!name_match)
            continue;
        if (affiliation_hint && !any_contains(profile.affiliation_history, affiliation))
            continue;
        matches.push_back(profile);
    }
    return slice(matches, start, count);
}

nlohmann::json FixtureBackend::author_profile(const AuthorId &id) {
    const auto it = std::find_if(profiles_.begin(), profiles_.end(),
                                 [&](const AuthorProfileRecord &p) { return p.author_id == id; });
    if (it == profiles_.end())
        throw NotFoundError("author profile " + id.str() + " not found");
    return *it;
}

Page FixtureBackend::publications(const std::vector<AuthorId> &authors, const YearWindow &window, std::size_t start,
                                  std::size_t count) {
    const std::set<AuthorId> wanted(authors.begin(), authors.end());
    std::vector<Publication> matches;
    for (const auto &publication : publications_) {
        if (!window.contains(publication.year))
            continue;
        const bool by_requested = std::any_of(publication.author_ids.begin(), publication.author_ids.end(),
                                              [&](const AuthorId &a) { return wanted.contains(a); });
        if (by_requested)
            matches.push_back(publication);
    }
    return slice(matches, start, count);
}

} // namespace deptstats::provider
