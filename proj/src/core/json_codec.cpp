#include "deptstats/core/json_codec.hpp"

#include "deptstats/core/errors.hpp"

namespace deptstats {

namespace {

template <typename T>
std::optional<T> optional_field(const nlohmann::json &j, const char *key) {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null())
        return std::nullopt;
    return it->get<T>();
}

template <typename T>
void put_optional(nlohmann::json &j, const char *key, const std::optional<T> &value) {
    if (value)
        j[key] = *value;
}

} // namespace

void to_json(nlohmann::json &j, const AuthorId &id) {
    j = id.str();
}

void from_json(const nlohmann::json &j, AuthorId &id) {
    id = AuthorId::parse(j.get<std::string>());
}

void to_json(nlohmann::json &j, const YearWindow &window) {
    j = nlohmann::json{{"start_year", window.start_year()}, {"end_year", window.end_year()}};
}

YearWindow window_from_json(const nlohmann::json &j) {
    return YearWindow(j.at("start_year").get<int>(), j.at("end_year").get<int>());
}

void to_json(nlohmann::json &j, const Institution &institution) {
    j = nlohmann::json{{"id", institution.id},
                       {"name", institution.name},
                       {"abbreviation", institution.abbreviation},
                       {"trs_count", institution.trs_count}};
}

void from_json(const nlohmann::json &j, Institution &institution) {
    institution.id = j.at("id").get<std::string>();
    institution.name = j.at("name").get<std::string>();
    institution.abbreviation = j.at("abbreviation").get<std::string>();
    institution.trs_count = j.value("trs_count", std::int64_t{0});
}

void to_json(nlohmann::json &j, const Department &department) {
    j = nlohmann::json{{"id", department.id},
                       {"institution_id", department.institution_id},
                       {"name", department.name},
                       {"unit_kind", to_string(department.unit_kind)},
                       {"thematic_tags", department.thematic_tags}};
}

void from_json(const nlohmann::json &j, Department &department) {
    department.id = j.at("id").get<std::string>();
    department.institution_id = j.at("institution_id").get<std::string>();
    department.name = j.at("name").get<std::string>();
    department.unit_kind = parse_unit_kind(j.value("unit_kind", std::string("Department")));
    department.thematic_tags = j.value("thematic_tags", std::set<std::string>{});
}

void to_json(nlohmann::json &j, const FacultyMember &member) {
    nlohmann::json merged = nlohmann::json::array();
    for (const auto &[a, b] : member.merged_pairs)
        merged.push_back(nlohmann::json::array({a.str(), b.str()}));
    j = nlohmann::json{{"id", member.id},
                       {"department_id", member.department_id},
                       {"display_name", member.display_name},
                       {"rank", to_string(member.rank)},
                       {"author_ids", member.author_ids},
                       {"profile_status", to_string(member.profile_status)},
                       {"merged_pairs", merged}};
}

void from_json(const nlohmann::json &j, FacultyMember &member) {
    member.id = j.at("id").get<std::string>();
    member.department_id = j.at("department_id").get<std::string>();
    member.display_name = j.at("display_name").get<std::string>();
    member.rank = parse_rank(j.at("rank").get<std::string>());
    member.author_ids = j.value("author_ids", std::vector<AuthorId>{});
    member.profile_status = parse_profile_status(j.at("profile_status").get<std::string>());
    member.merged_pairs.clear();
    if (const auto it = j.find("merged_pairs"); it != j.end()) {
        for (const auto &pair : *it)
            member.merged_pairs.emplace(pair.at(0).get<AuthorId>(), pair.at(1).get<AuthorId>());
    }
}

void to_json(nlohmann::json &j, const Publication &publication) {
    j = nlohmann::json{{"doc_id", publication.doc_id},
                       {"title", publication.title},
                       {"year", publication.year},
                       {"citation_count", publication.citation_count},
                       {"author_ids", publication.author_ids}};
    put_optional(j, "source_title", publication.source_title);
    put_optional(j, "doc_type", publication.doc_type);
    if (!publication.subject_areas.empty())
        j["subject_areas"] = publication.subject_areas;
}

void from_json(const nlohmann::json &j, Publication &publication) {
    publication.doc_id = j.at("doc_id").get<std::string>();
    publication.title = j.value("title", std::string());
    publication.year = j.at("year").get<int>();
    publication.citation_count = j.at("citation_count").get<std::int64_t>();
    publication.author_ids = j.at("author_ids").get<std::vector<AuthorId>>();
    publication.source_title = optional_field<std::string>(j, "source_title");
    publication.doc_type = optional_field<std::string>(j, "doc_type");
    publication.subject_areas = j.value("subject_areas", std::vector<std::string>{});
}

void to_json(nlohmann::json &j, const DepartmentMetrics &metrics) {
    j = nlohmann::json{{"department_id", metrics.department_id},
                       {"window", metrics.window},
                       {"trs_total", metrics.trs_total},
                       {"trs_without_profile", metrics.trs_without_profile},
                       {"paper_count", metrics.paper_count},
                       {"citation_count", metrics.citation_count},
                       {"papers_per_trs", ratio_json(metrics.papers_per_trs())},
                       {"citations_per_trs", ratio_json(metrics.citations_per_trs())},
                       {"citations_per_paper", ratio_json(metrics.citations_per_paper())}};
}

void from_json(const nlohmann::json &j, DepartmentMetrics &metrics) {
    metrics.department_id = j.at("department_id").get<std::string>();
    metrics.window = window_from_json(j.at("window"));
    metrics.trs_total = j.at("trs_total").get<std::int64_t>();
    metrics.trs_without_profile = j.at("trs_without_profile").get<std::int64_t>();
    metrics.paper_count = j.at("paper_count").get<std::int64_t>();
    metrics.citation_count = j.at("citation_count").get<std::int64_t>();
    if (metrics.trs_total <= 0)
        throw CorruptionError("stored metrics for " + metrics.department_id + " have trs_total <= 0");
}

nlohmann::json ratio_json(const Ratio &value) {
    return nlohmann::json{
        {"value", render_fixed2(value)}, {"numerator", value.numerator()}, {"denominator", value.denominator()}};
}

} // namespace deptstats
