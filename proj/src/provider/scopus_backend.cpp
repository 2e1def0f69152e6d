#include "deptstats/provider/scopus_backend.hpp"

#include <httplib.h>

#include "deptstats/core/json_codec.hpp"
#include "deptstats/core/text.hpp"

namespace deptstats::provider {

namespace scopus {

namespace {

// Scopus wraps single elements in an object and lists in an array.
std::vector<nlohmann::json> as_list(const nlohmann::json &value) {
    if (value.is_array())
        return std::vector<nlohmann::json>(value.begin(), value.end());
    if (value.is_null())
        return {};
    return {value};
}

std::string text_of(const nlohmann::json &value) {
    if (value.is_string())
        return value.get<std::string>();
    if (value.is_number_integer())
        return std::to_string(value.get<std::int64_t>());
    if (value.is_object() && value.contains("$"))
        return text_of(value.at("$"));
    return {};
}

std::string field(const nlohmann::json &object, const char *key) {
    if (!object.is_object())
        return {};
    const auto it = object.find(key);
    return it == object.end() ? std::string() : text_of(*it);
}

std::int64_t number(const nlohmann::json &object, const char *key) {
    const std::string text = field(object, key);
    if (text.empty())
        return 0;
    try {
        return std::stoll(text);
    } catch (const std::logic_error &) {
        throw ValidationError(std::string("scopus field ") + key + " is not a number: '" + text + "'");
    }
}

std::string strip_prefix(const std::string &identifier) {
    const auto colon = identifier.find(':');
    return colon == std::string::npos ? identifier : identifier.substr(colon + 1);
}

std::string name_of(const nlohmann::json &name) {
    if (const auto indexed = field(name, "indexed-name"); !indexed.empty())
        return indexed;
    const std::string surname = field(name, "surname");
    std::string given = field(name, "initials");
    if (given.empty())
        given = field(name, "given-name");
    return given.empty() ? surname : surname + ", " + given;
}

std::string quote_term(std::string term) {
    std::string cleaned;
    for (const char c : term)
        if (c != '(' && c != ')' && c != '"')
            cleaned.push_back(c);
    return std::string(trim(cleaned));
}

std::size_t total_results(const nlohmann::json &results) {
    return static_cast<std::size_t>(number(results, "opensearch:totalResults"));
}

} // namespace

std::string author_search_query(const std::string &name_query, const std::optional<std::string> &affiliation_hint) {
    std::string query;
    if (const auto comma = name_query.find(','); comma != std::string::npos) {
        query = "AUTHLASTNAME(" + quote_term(name_query.substr(0, comma)) + ")";
        const std::string first = quote_term(name_query.substr(comma + 1));
        if (!first.empty())
            query += " AND AUTHFIRST(" + first + ")";
    } else if (const auto trimmed = std::string(trim(name_query)); trimmed.find(' ') != std::string::npos) {
        // Roster names are written "Given Family".
        const auto space = trimmed.rfind(' ');
        query = "AUTHLASTNAME(" + quote_term(trimmed.substr(space + 1)) + ") AND AUTHFIRST(" +
                quote_term(trimmed.substr(0, space)) + ")";
    } else {
        query = "AUTHLASTNAME(" + quote_term(name_query) + ")";
    }
    if (affiliation_hint && !trim(*affiliation_hint).empty())
        query += " AND AFFIL(" + quote_term(*affiliation_hint) + ")";
    return query;
}

std::string document_search_query(const std::vector<AuthorId> &authors, const YearWindow &window) {
    std::vector<std::string> terms;
    for (const auto &id : authors)
        terms.push_back("AU-ID(" + id.value + ")");
    return "(" + join(terms, " OR ") + ") AND PUBYEAR > " + std::to_string(window.start_year() - 1) +
           " AND PUBYEAR < " + std::to_string(window.end_year() + 1);
}

Page map_author_search(const nlohmann::json &body) {
    const auto &results = body.at("search-results");
    Page page;
    page.total = total_results(results);
    for (const auto &entry : as_list(results.value("entry", nlohmann::json()))) {
        if (entry.contains("error"))
            continue;
        AuthorProfileRecord record;
        record.author_id = AuthorId{"scopus", strip_prefix(field(entry, "dc:identifier"))};
        const auto preferred = entry.value("preferred-name", nlohmann::json::object());
        record.indexed_name = name_of(preferred);
        record.name_variants.push_back(record.indexed_name);
        for (const auto &variant : as_list(entry.value("name-variant", nlohmann::json()))) {
            const std::string name = name_of(variant);
            if (!name.empty() && std::find(record.name_variants.begin(), record.name_variants.end(), name) ==
                                     record.name_variants.end())
                record.name_variants.push_back(name);
        }
        const auto affiliation = entry.value("affiliation-current", nlohmann::json::object());
        if (const auto name = field(affiliation, "affiliation-name"); !name.empty())
            record.affiliation_history.push_back(name);
        record.document_count = number(entry, "document-count");
        for (const auto &area : as_list(entry.value("subject-area", nlohmann::json())))
            if (const auto name = text_of(area); !name.empty())
                record.subject_areas.push_back(name);
        page.items.push_back(record);
    }
    return page;
}

nlohmann::json map_author_retrieval(const nlohmann::json &body) {
    const auto responses = as_list(body.at("author-retrieval-response"));
    if (responses.empty())
        throw NotFoundError("empty author retrieval response");
    const auto &response = responses.front();
    const auto coredata = response.value("coredata", nlohmann::json::object());
    const auto profile = response.value("author-profile", nlohmann::json::object());

    AuthorProfileRecord record;
    record.author_id = AuthorId{"scopus", strip_prefix(field(coredata, "dc:identifier"))};
    record.indexed_name = name_of(profile.value("preferred-name", nlohmann::json::object()));
    record.name_variants.push_back(record.indexed_name);
    for (const auto &variant : as_list(profile.value("name-variant", nlohmann::json()))) {
        const std::string name = name_of(variant);
        if (!name.empty() &&
            std::find(record.name_variants.begin(), record.name_variants.end(), name) == record.name_variants.end())
            record.name_variants.push_back(name);
    }
    const auto history = profile.value("affiliation-history", nlohmann::json::object());
    for (const auto &affiliation : as_list(history.value("affiliation", nlohmann::json()))) {
        const auto doc = affiliation.value("ip-doc", nlohmann::json::object());
        std::string name = field(doc, "afdispname");
        if (name.empty())
            name = field(doc, "preferred-name");
        if (!name.empty() && std::find(record.affiliation_history.begin(), record.affiliation_history.end(), name) ==
                                 record.affiliation_history.end())
            record.affiliation_history.push_back(name);
    }
    record.document_count = number(coredata, "document-count");
    const auto areas = response.value("subject-areas", nlohmann::json::object());
    for (const auto &area : as_list(areas.value("subject-area", nlohmann::json())))
        if (const auto name = text_of(area); !name.empty())
            record.subject_areas.push_back(name);
    return record;
}

Page map_document_search(const nlohmann::json &body, const std::optional<AuthorId> &single_author) {
    const auto &results = body.at("search-results");
    Page page;
    page.total = total_results(results);
    for (const auto &entry : as_list(results.value("entry", nlohmann::json()))) {
        if (entry.contains("error"))
            continue;
        Publication publication;
        publication.doc_id = strip_prefix(field(entry, "dc:identifier"));
        if (publication.doc_id.empty())
            publication.doc_id = field(entry, "eid");
        publication.title = field(entry, "dc:title");
        const std::string cover_date = field(entry, "prism:coverDate");
        if (cover_date.size() < 4)
            throw ValidationError("scopus document " + publication.doc_id + " has no cover date");
        publication.year = std::stoi(cover_date.substr(0, 4));
        publication.citation_count = number(entry, "citedby-count");
        if (const auto source = field(entry, "prism:publicationName"); !source.empty())
            publication.source_title = source;
        if (const auto type = field(entry, "subtypeDescription"); !type.empty())
            publication.doc_type = type;
        for (const auto &author : as_list(entry.value("author", nlohmann::json()))) {
            const std::string id = field(author, "authid");
            if (!id.empty())
                publication.author_ids.push_back(AuthorId{"scopus", id});
        }
        if (publication.author_ids.empty()) {
            if (!single_author)
                throw ConfigurationError("scopus response lacks author lists (view=COMPLETE not entitled); "
                                         "set authors_per_query = 1");
            publication.author_ids.push_back(*single_author);
        }
        page.items.push_back(publication);
    }
    return page;
}

} // namespace scopus

ScopusBackend::ScopusBackend(const ProviderConfig &config, std::chrono::seconds timeout)
    : endpoint_(config.base_endpoint.empty() ? kDefaultEndpoint : config.base_endpoint),
      credential_(config.credential), timeout_(timeout) {
    if (credential_.empty())
        throw ConfigurationError("scopus provider needs an API key (BIBLIO_API_KEY)");
    while (!endpoint_.empty() && endpoint_.back() == '/')
        endpoint_.pop_back();
}

nlohmann::json ScopusBackend::get_json(const std::string &path,
                                       const std::vector<std::pair<std::string, std::string>> &query) {
    httplib::Client client(endpoint_);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_follow_location(true);

    httplib::Params params;
    for (const auto &[key, value] : query)
        params.emplace(key, value);
    const httplib::Headers headers{{"X-ELS-APIKey", credential_}, {"Accept", "application/json"}};
    const auto response = client.Get(path, params, headers);
    if (!response)
        throw TransportError("request to " + endpoint_ + path + " failed: " + httplib::to_string(response.error()));

    const int status = response->status;
    if (status == 401 || status == 403)
        throw ConfigurationError("scopus rejected the credential (HTTP " + std::to_string(status) + ")");
    if (status == 404)
        throw NotFoundError("scopus: " + path + " not found");
    if (status == 429 || status >= 500)
        throw TransportError("scopus returned HTTP " + std::to_string(status), status);
    if (status != 200)
        throw ValidationError("scopus returned HTTP " + std::to_string(status) + ": " + response->body);
    try {
        return nlohmann::json::parse(response->body);
    } catch (const nlohmann::json::exception &error) {
        throw TransportError(std::string("scopus returned malformed JSON: ") + error.what(), status);
    }
}

Page ScopusBackend::search_authors(const std::string &name_query, const std::optional<std::string> &affiliation_hint,
                                   std::size_t start, std::size_t count) {
    return scopus::map_author_search(get_json("/content/search/author",
                                              {{"query", scopus::author_search_query(name_query, affiliation_hint)},
                                               {"start", std::to_string(start)},
                                               {"count", std::to_string(count)}}));
}

nlohmann::json ScopusBackend::author_profile(const AuthorId &id) {
    return scopus::map_author_retrieval(
        get_json("/content/author/author_id/" + id.value, {{"view", "ENHANCED"}}));
}

Page ScopusBackend::publications(const std::vector<AuthorId> &authors, const YearWindow &window, std::size_t start,
                                 std::size_t count) {
    const auto single = authors.size() == 1 ? std::optional<AuthorId>(authors.front()) : std::nullopt;
    return scopus::map_document_search(get_json("/content/search/scopus",
                                                {{"query", scopus::document_search_query(authors, window)},
                                                 {"view", "COMPLETE"},
                                                 {"start", std::to_string(start)},
                                                 {"count", std::to_string(count)}}),
                                       single);
}

} // namespace deptstats::provider
