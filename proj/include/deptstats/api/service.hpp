#pragma once

#include <map>
#include <optional>
#include <string>

#include "deptstats/ranking/comparator.hpp"
#include "deptstats/store/snapshot_store.hpp"

namespace httplib {
class Server;
}

namespace deptstats::api {

struct Response {
    int status = 200;
    std::string body;
    std::string content_type = "application/json; charset=utf-8";
};

using Query = std::multimap<std::string, std::string>;

// Read-only JSON API over one loaded snapshot:
//
//   GET /api/institutions
//   GET /api/institutions/{id}/ranking?metric=&direction=&top=
//   GET /api/thematic?q=&exclude=&metric=&direction=&top=
//   GET /api/compare?ids=&metric=&direction=
//   GET /api/departments
//   GET /api/departments/{id}
//   GET /api/meta
//
// List parameters (q, exclude, ids) are comma-separated. Errors are
// {"error": message} with 400 (validation) or 404 (unknown id/route).
// Bodies depend only on (snapshot, request), so identical requests get
// identical bytes.
class Service {
public:
    explicit Service(store::Snapshot snapshot, std::string cors_origin = "*");

    Response handle(const std::string &method, const std::string &path, const Query &query) const;

    // Registers the routes on an httplib server; optional static_dir is
    // mounted at "/" for the explorer UI bundle.
    void mount(httplib::Server &server, const std::optional<std::string> &static_dir = std::nullopt) const;

    // Blocks serving host:port until the server is stopped.
    void serve(const std::string &host, int port, const std::optional<std::string> &static_dir = std::nullopt) const;

    const store::Snapshot &snapshot() const { return snapshot_; }
    const std::string &cors_origin() const { return cors_origin_; }

private:
    Response route(const std::string &path, const Query &query) const;

    store::Snapshot snapshot_;
    ranking::Comparator comparator_;
    std::string cors_origin_;
};

} // namespace deptstats::api
