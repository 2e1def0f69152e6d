#include "deptstats/api/service.hpp"

#include <algorithm>
#include <charconv>

#include <httplib.h>

#include "deptstats/core/errors.hpp"
#include "deptstats/core/json_codec.hpp"
#include "deptstats/core/text.hpp"

namespace deptstats::api {

namespace {

Response json_response(int status, const nlohmann::json &body) {
    return Response{status, body.dump() + "\n"};
}

Response error_response(int status, const std::string &message) {
    return json_response(status, {{"error", message}});
}

std::optional<std::string> param(const Query &query, const std::string &name) {
    const auto it = query.find(name);
    if (it == query.end())
        return std::nullopt;
    return it->second;
}

std::vector<std::string> list_param(const Query &query, const std::string &name) {
    std::vector<std::string> values;
    for (auto [it, end] = query.equal_range(name); it != end; ++it)
        for (const auto &part : split(it->second, ','))
            if (const auto value = trim(part); !value.empty())
                values.emplace_back(value);
    return values;
}

ranking::Metric metric_param(const Query &query) {
    const auto value = param(query, "metric");
    return value && !value->empty() ? ranking::parse_metric(*value) : ranking::Metric::CitationsPerTrs;
}

ranking::Direction direction_param(const Query &query) {
    const auto value = param(query, "direction");
    return value && !value->empty() ? ranking::parse_direction(*value) : ranking::Direction::Descending;
}

std::optional<std::size_t> top_param(const Query &query) {
    const auto value = param(query, "top");
    if (!value || value->empty())
        return std::nullopt;
    std::size_t top = 0;
    const auto [ptr, ec] = std::from_chars(value->data(), value->data() + value->size(), top);
    if (ec != std::errc() || ptr != value->data() + value->size())
        throw ValidationError("top must be a non-negative integer, got '" + *value + "'");
    return top;
}

} // namespace

Service::Service(store::Snapshot snapshot, std::string cors_origin)
    : snapshot_(std::move(snapshot)),
      comparator_(snapshot_.institutions, snapshot_.departments, snapshot_.metrics),
      cors_origin_(std::move(cors_origin)) { }

Response Service::handle(const std::string &method, const std::string &path, const Query &query) const {
    if (method != "GET" && method != "HEAD")
        return error_response(405, "read-only service: only GET is supported");
    try {
        return route(path, query);
    } catch (const NotFoundError &error) {
        return error_response(404, error.what());
    } catch (const ValidationError &error) {
        return error_response(400, error.what());
    } catch (const PreconditionError &error) {
        return error_response(400, error.what());
    } catch (const Error &error) {
        return error_response(500, error.what());
    }
}

Response Service::route(const std::string &path, const Query &query) const {
    const auto segments = [&] {
        std::vector<std::string> parts;
        for (const auto &part : split(path, '/'))
            if (!part.empty())
                parts.push_back(part);
        return parts;
    }();
    if (segments.empty() || segments[0] != "api")
        throw NotFoundError("no route for " + path);

    if (segments.size() == 2 && segments[1] == "institutions") {
        nlohmann::json list = nlohmann::json::array();
        for (const auto &institution : snapshot_.institutions)
            list.push_back(institution);
        return json_response(200, list);
    }
    if (segments.size() == 4 && segments[1] == "institutions" && segments[3] == "ranking") {
        return json_response(200, ranking::to_json(comparator_.rank_institution(
                                      segments[2], metric_param(query), top_param(query), direction_param(query))));
    }
    if (segments.size() == 2 && segments[1] == "thematic") {
        const auto terms = list_param(query, "q");
        const auto excluded = list_param(query, "exclude");
        return json_response(200, ranking::to_json(comparator_.rank_thematic(
                                      terms, std::set<std::string>(excluded.begin(), excluded.end()),
                                      metric_param(query), top_param(query), direction_param(query))));
    }
    if (segments.size() == 2 && segments[1] == "compare") {
        return json_response(200, ranking::to_json(comparator_.compare_adhoc(list_param(query, "ids"),
                                                                             metric_param(query),
                                                                             direction_param(query))));
    }
    if (segments.size() == 2 && segments[1] == "departments") {
        nlohmann::json list = nlohmann::json::array();
        for (const auto &department : snapshot_.departments) {
            nlohmann::json entry = department;
            const Institution *owner = comparator_.institution(department.institution_id);
            entry["institution"] = owner ? owner->abbreviation : "";
            entry["has_metrics"] = comparator_.metrics(department.id) != nullptr;
            list.push_back(entry);
        }
        return json_response(200, list);
    }
    if (segments.size() == 3 && segments[1] == "departments") {
        const Department *department = comparator_.department(segments[2]);
        if (!department)
            throw NotFoundError("unknown department '" + segments[2] + "'");
        const DepartmentMetrics *metrics = comparator_.metrics(department->id);
        const auto not_found = std::count_if(snapshot_.members.begin(), snapshot_.members.end(), [&](const auto &m) {
            return m.department_id == department->id && m.profile_status == ProfileStatus::NotFound;
        });
        const Institution *owner = comparator_.institution(department->institution_id);
        return json_response(200, {{"department", *department},
                                   {"institution", owner ? owner->abbreviation : ""},
                                   {"metrics", metrics ? nlohmann::json(*metrics) : nlohmann::json(nullptr)},
                                   {"missing_profiles", metrics ? metrics->trs_without_profile : 0},
                                   {"not_found_profiles", not_found}});
    }
    if (segments.size() == 2 && segments[1] == "meta") {
        std::optional<std::string> fetched_at;
        for (const auto &receipt : snapshot_.provenance)
            if (!fetched_at || receipt.fetched_at > *fetched_at)
                fetched_at = receipt.fetched_at;
        return json_response(
            200, {{"snapshot_id", snapshot_.snapshot_id},
                  {"created_at", snapshot_.created_at},
                  {"window", snapshot_.window ? nlohmann::json(*snapshot_.window) : nlohmann::json(nullptr)},
                  {"fetched_at", fetched_at ? nlohmann::json(*fetched_at) : nlohmann::json(nullptr)}});
    }
    throw NotFoundError("no route for " + path);
}

void Service::mount(httplib::Server &server, const std::optional<std::string> &static_dir) const {
    const auto handler = [this](const httplib::Request &request, httplib::Response &response) {
        Query query;
        for (const auto &[key, value] : request.params)
            query.emplace(key, value);
        const Response result = handle(request.method, request.path, query);
        response.status = result.status;
        response.set_content(result.body, result.content_type);
        response.set_header("Access-Control-Allow-Origin", cors_origin_);
    };
    server.Get(R"(/api/.*)", handler);
    server.Options(R"(/api/.*)", [this](const httplib::Request &, httplib::Response &response) {
        response.status = 204;
        response.set_header("Access-Control-Allow-Origin", cors_origin_);
        response.set_header("Access-Control-Allow-Methods", "GET, OPTIONS");
        response.set_header("Access-Control-Allow-Headers", "Content-Type");
    });
    if (static_dir && !server.set_mount_point("/", *static_dir))
        throw ValidationError("static directory '" + *static_dir + "' does not exist");
}

void Service::serve(const std::string &host, int port, const std::optional<std::string> &static_dir) const {
    httplib::Server server;
    mount(server, static_dir);
    if (!server.listen(host, port))
        throw TransportError("cannot listen on " + host + ":" + std::to_string(port));
}

} // namespace deptstats::api
