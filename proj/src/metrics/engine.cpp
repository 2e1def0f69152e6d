#include "deptstats/metrics/engine.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "deptstats/core/errors.hpp"

namespace deptstats::metrics {

DedupResult dedup_department(const std::map<std::string, std::vector<Publication>> &per_member,
                             const std::string &department_id) {
    DedupResult result;
    result.report.department_id = department_id;
    std::map<std::string, Publication> unique;
    for (const auto &[member_id, publications] : per_member) {
        std::set<std::string> member_docs;
        for (const auto &publication : publications) {
            if (member_docs.insert(publication.doc_id).second)
                ++result.report.raw_doc_instances;
            auto [it, inserted] = unique.try_emplace(publication.doc_id, publication);
            if (!inserted && it->second.citation_count != publication.citation_count) {
                result.warnings.push_back("doc " + publication.doc_id + " has citation counts " +
                                          std::to_string(it->second.citation_count) + " and " +
                                          std::to_string(publication.citation_count) + "; keeping the maximum");
                it->second.citation_count = std::max(it->second.citation_count, publication.citation_count);
            }
        }
    }
    result.publications.reserve(unique.size());
    for (auto &[doc_id, publication] : unique)
        result.publications.push_back(std::move(publication));
    result.report.unique_docs = static_cast<std::int64_t>(result.publications.size());
    result.report.duplicates_removed = result.report.raw_doc_instances - result.report.unique_docs;
    return result;
}

std::vector<Publication> window_filter(std::span<const Publication> publications, const YearWindow &window) {
    std::vector<Publication> kept;
    std::copy_if(publications.begin(), publications.end(), std::back_inserter(kept),
                 [&](const Publication &p) { return window.contains(p.year); });
    std::stable_sort(kept.begin(), kept.end(), [](const Publication &a, const Publication &b) {
        return std::tie(a.year, a.doc_id) < std::tie(b.year, b.doc_id);
    });
    return kept;
}

DepartmentMetrics compute_metrics(const Department &department, std::span<const FacultyMember> members,
                                  std::span<const Publication> deduplicated, const YearWindow &window) {
    if (members.empty())
        throw DomainError("empty department");
    DepartmentMetrics metrics;
    metrics.department_id = department.id;
    metrics.window = window;
    metrics.trs_total = static_cast<std::int64_t>(members.size());
    metrics.trs_without_profile = std::count_if(members.begin(), members.end(),
                                                [](const FacultyMember &m) { return m.author_ids.empty(); });
    for (const auto &publication : deduplicated) {
        if (!window.contains(publication.year))
            throw PreconditionError("publication " + publication.doc_id + " (" + std::to_string(publication.year) +
                                    ") is outside the window " + window.str());
        ++metrics.paper_count;
        metrics.citation_count += publication.citation_count;
    }
    return metrics;
}

namespace {

struct DepartmentJob {
    const Department *department = nullptr;
    std::vector<const FacultyMember *> members;
};

struct JobOutput {
    std::optional<DepartmentMetrics> metrics;
    DedupReport report;
    std::vector<std::string> warnings;
};

JobOutput run_job(const DepartmentJob &job, std::span<const Publication> publications,
                  const std::map<AuthorId, std::vector<std::size_t>> &by_author,
                  const std::set<std::pair<std::string, std::string>> &excluded, const YearWindow &window,
                  const MetricsConfig &config) {
    JobOutput output;
    std::map<std::string, std::vector<Publication>> per_member;
    std::vector<FacultyMember> members;
    for (const auto *member : job.members) {
        members.push_back(*member);
        std::set<std::size_t> indices;
        for (const auto &author : member->author_ids)
            if (const auto it = by_author.find(author); it != by_author.end())
                indices.insert(it->second.begin(), it->second.end());
        std::vector<Publication> own;
        for (const auto index : indices) {
            const Publication &publication = publications[index];
            if (excluded.contains({member->id, publication.doc_id}))
                continue;
            if (!config.doc_type_allow_list.empty() &&
                (!publication.doc_type || !config.doc_type_allow_list.contains(*publication.doc_type)))
                continue;
            own.push_back(publication);
        }
        per_member[member->id] = window_filter(own, window);
    }
    DedupResult dedup = dedup_department(per_member, job.department->id);
    output.report = dedup.report;
    output.warnings = std::move(dedup.warnings);
    output.metrics = compute_metrics(*job.department, members, dedup.publications, window);
    return output;
}

} // namespace

ComputeOutput compute_all(std::span<const Department> departments, std::span<const FacultyMember> members,
                          std::span<const Publication> publications, std::span<const DocOverride> overrides,
                          const YearWindow &window, const MetricsConfig &config) {
    std::map<AuthorId, std::vector<std::size_t>> by_author;
    for (std::size_t i = 0; i < publications.size(); ++i)
        for (const auto &author : publications[i].author_ids)
            by_author[author].push_back(i);
    std::set<std::pair<std::string, std::string>> excluded;
    for (const auto &record : overrides)
        excluded.emplace(record.member_id, record.doc_id);

    std::vector<DepartmentJob> jobs;
    std::map<std::string, std::size_t> job_of;
    for (const auto &department : departments) {
        job_of.emplace(department.id, jobs.size());
        jobs.push_back(DepartmentJob{&department, {}});
    }
    for (const auto &member : members) {
        const auto it = job_of.find(member.department_id);
        if (it == job_of.end())
            throw PreconditionError("member " + member.id + " references unknown department " + member.department_id);
        jobs[it->second].members.push_back(&member);
    }

    std::vector<JobOutput> outputs(jobs.size());
    std::atomic<std::size_t> next{0};
    std::mutex failure_mutex;
    std::exception_ptr failure;
    const auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            if (jobs[i].members.empty())
                continue;
            try {
                outputs[i] = run_job(jobs[i], publications, by_author, excluded, window, config);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };
    const std::size_t thread_count =
        std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(jobs.size(), 1));
    {
        std::vector<std::jthread> threads;
        for (std::size_t t = 1; t < thread_count; ++t)
            threads.emplace_back(worker);
        worker();
    }
    if (failure)
        std::rethrow_exception(failure);

    ComputeOutput result;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (!outputs[i].metrics) {
            result.warnings.push_back("department " + jobs[i].department->id + " has no members; skipped");
            continue;
        }
        result.metrics.push_back(*outputs[i].metrics);
        result.reports.push_back(outputs[i].report);
        result.warnings.insert(result.warnings.end(), outputs[i].warnings.begin(), outputs[i].warnings.end());
    }
    std::sort(result.metrics.begin(), result.metrics.end(),
              [](const auto &a, const auto &b) { return a.department_id < b.department_id; });
    std::sort(result.reports.begin(), result.reports.end(),
              [](const auto &a, const auto &b) { return a.department_id < b.department_id; });
    return result;
}

} // namespace deptstats::metrics
