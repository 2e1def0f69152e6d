#pragma once

#include <atomic>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "deptstats/core/model.hpp"

namespace deptstats::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("deptstats-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ignored;
        std::filesystem::remove_all(path_, ignored);
    }
    TempDir(const TempDir &) = delete;
    TempDir &operator=(const TempDir &) = delete;
    const std::filesystem::path &path() const { return path_; }
    std::string str() const { return path_.string(); }

private:
    std::filesystem::path path_;
};

inline AuthorId aid(const std::string &value) { return AuthorId{"fixture", value}; }

inline Publication pub(const std::string &doc_id, int year, std::int64_t citations, std::vector<AuthorId> authors) {
    Publication p;
    p.doc_id = doc_id;
    p.title = "Title of " + doc_id;
    p.year = year;
    p.citation_count = citations;
    p.author_ids = std::move(authors);
    return p;
}

inline FacultyMember member(const std::string &id, const std::string &department_id, std::vector<AuthorId> ids,
                            ProfileStatus status = ProfileStatus::Resolved) {
    FacultyMember m;
    m.id = id;
    m.department_id = department_id;
    m.display_name = id;
    m.author_ids = std::move(ids);
    m.profile_status = m.author_ids.empty() && status == ProfileStatus::Resolved ? ProfileStatus::PendingReview
                                                                                 : status;
    return m;
}

inline Department department(const std::string &id, const std::string &institution_id, const std::string &name) {
    Department d;
    d.id = id;
    d.institution_id = institution_id;
    d.name = name;
    d.unit_kind = infer_unit_kind(name);
    return d;
}

inline const std::string kFixtureDir = DEPTSTATS_FIXTURE_DIR;
inline const std::string kTestDataDir = DEPTSTATS_TEST_DATA_DIR;

} // namespace deptstats::testing
