#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "deptstats/core/errors.hpp"
#include "deptstats/metrics/engine.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace deptstats;
using namespace deptstats::metrics;
using deptstats::testing::aid;
using deptstats::testing::department;
using deptstats::testing::member;
using deptstats::testing::pub;

namespace {

const YearWindow kWindow(2017, 2021);

struct Example {
    Department dept = department("d", "i", "Department of Mathematics");
    std::vector<FacultyMember> members{member("f1", "d", {aid("1")}), member("f2", "d", {aid("2")})};
    std::vector<Publication> pubs{pub("A", 2018, 10, {aid("1")}), pub("B", 2019, 4, {aid("1"), aid("2")}),
                                  pub("C", 2020, 6, {aid("2")})};
};

} // namespace

TEST(Dedup, OracleEquivalenceOverThousandSeeds) {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto c = oracle::random_dedup_case(seed);
        const auto result = dedup_department(c.per_member, "d");
        ASSERT_EQ(result.publications, oracle::union_oracle(c.per_member)) << "seed " << seed;
        ASSERT_EQ(result.report.raw_doc_instances, oracle::raw_instances_oracle(c.per_member)) << "seed " << seed;
        ASSERT_EQ(result.report.unique_docs, static_cast<std::int64_t>(result.publications.size()));
        ASSERT_EQ(result.report.duplicates_removed, result.report.raw_doc_instances - result.report.unique_docs);
    }
}

TEST(Dedup, CoauthoredPaperCountsOnce) {
    const Example e;
    const std::map<std::string, std::vector<Publication>> per_member{{"f1", {e.pubs[0], e.pubs[1]}},
                                                                     {"f2", {e.pubs[1], e.pubs[2]}}};
    const auto result = dedup_department(per_member, "d");
    EXPECT_EQ(result.publications.size(), 3u);
    EXPECT_EQ(result.report.raw_doc_instances, 4);
    EXPECT_EQ(result.report.duplicates_removed, 1);
    EXPECT_TRUE(result.warnings.empty());
}

TEST(Dedup, ConflictingCitationCountsKeepMaximumAndWarn) {
    const std::map<std::string, std::vector<Publication>> per_member{{"a", {pub("X", 2018, 3, {aid("1")})}},
                                                                     {"b", {pub("X", 2018, 8, {aid("2")})}}};
    const auto result = dedup_department(per_member);
    ASSERT_EQ(result.publications.size(), 1u);
    EXPECT_EQ(result.publications[0].citation_count, 8);
    EXPECT_EQ(result.warnings.size(), 1u);
}

TEST(Dedup, PermutationInvariant) {
    std::mt19937_64 rng(3);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto c = oracle::random_dedup_case(seed);
        const auto expected = dedup_department(c.per_member);
        for (auto &[member_id, list] : c.per_member)
            std::shuffle(list.begin(), list.end(), rng);
        // Member order is fixed by the map; relabel members in reverse.
        std::map<std::string, std::vector<Publication>> relabelled;
        std::size_t i = c.per_member.size();
        for (auto &[member_id, list] : c.per_member)
            relabelled["z" + std::to_string(i--)] = list;
        ASSERT_EQ(dedup_department(relabelled).publications, expected.publications);
    }
}

TEST(Window, BoundariesAreInclusive) {
    const std::vector<Publication> pubs{pub("a", 2016, 1, {aid("1")}), pub("b", 2017, 1, {aid("1")}),
                                        pub("c", 2021, 1, {aid("1")}), pub("d", 2022, 1, {aid("1")})};
    const auto kept = window_filter(pubs, kWindow);
    ASSERT_EQ(kept.size(), 2u);
    EXPECT_EQ(kept[0].doc_id, "b");
    EXPECT_EQ(kept[1].doc_id, "c");
}

TEST(Window, OrderedByYearThenDocId) {
    const std::vector<Publication> pubs{pub("z", 2018, 1, {aid("1")}), pub("a", 2019, 1, {aid("1")}),
                                        pub("b", 2018, 1, {aid("1")})};
    const auto kept = window_filter(pubs, kWindow);
    EXPECT_EQ((std::vector<std::string>{kept[0].doc_id, kept[1].doc_id, kept[2].doc_id}),
              (std::vector<std::string>{"b", "z", "a"}));
}

TEST(Compute, WorkedExample) {
    const Example e;
    const auto m = compute_metrics(e.dept, e.members, e.pubs, kWindow);
    EXPECT_EQ(m.trs_total, 2);
    EXPECT_EQ(m.paper_count, 3);
    EXPECT_EQ(m.citation_count, 20);
    EXPECT_EQ(m.papers_per_trs(), Ratio(3, 2));
    EXPECT_EQ(m.citations_per_trs(), Ratio(10));
    EXPECT_EQ(m.citations_per_paper(), Ratio(20, 3));
}

TEST(Compute, MembersWithoutProfileCountInDenominator) {
    Example e;
    e.members.push_back(member("f3", "d", {}, ProfileStatus::NotFound));
    const auto m = compute_metrics(e.dept, e.members, e.pubs, kWindow);
    EXPECT_EQ(m.trs_total, 3);
    EXPECT_EQ(m.trs_without_profile, 1);
    EXPECT_EQ(m.citations_per_trs(), Ratio(20, 3));
}

TEST(Compute, ErrorsOnEmptyDepartmentAndStrayYears) {
    const Example e;
    try {
        compute_metrics(e.dept, {}, e.pubs, kWindow);
        FAIL();
    } catch (const DomainError &error) {
        EXPECT_STREQ(error.what(), "empty department");
    }
    const std::vector<Publication> stray{pub("old", 2016, 1, {aid("1")})};
    EXPECT_THROW(compute_metrics(e.dept, e.members, stray, kWindow), PreconditionError);
}

TEST(Compute, MonotoneInPublications) {
    std::mt19937_64 rng(11);
    const Example e;
    for (int round = 0; round < 200; ++round) {
        std::vector<Publication> pubs;
        const int n = static_cast<int>(rng() % 20);
        for (int i = 0; i < n; ++i)
            pubs.push_back(pub("p" + std::to_string(i), 2017 + static_cast<int>(rng() % 5),
                               static_cast<std::int64_t>(rng() % 50), {aid("1")}));
        const auto before = compute_metrics(e.dept, e.members, pubs, kWindow);
        pubs.push_back(pub("extra", 2019, static_cast<std::int64_t>(rng() % 50), {aid("2")}));
        const auto after = compute_metrics(e.dept, e.members, pubs, kWindow);
        ASSERT_GE(after.paper_count, before.paper_count);
        ASSERT_GE(after.citation_count, before.citation_count);
        ASSERT_GE(after.papers_per_trs(), before.papers_per_trs());
        ASSERT_GE(after.citations_per_trs(), before.citations_per_trs());
    }
}

TEST(Compute, ScalingCitationsScalesCitationRatios) {
    const Example e;
    auto scaled = e.pubs;
    for (auto &p : scaled)
        p.citation_count *= 7;
    const auto base = compute_metrics(e.dept, e.members, e.pubs, kWindow);
    const auto big = compute_metrics(e.dept, e.members, scaled, kWindow);
    EXPECT_EQ(big.citations_per_trs(), base.citations_per_trs() * 7);
    EXPECT_EQ(big.citations_per_paper(), base.citations_per_paper() * 7);
    EXPECT_EQ(big.papers_per_trs(), base.papers_per_trs());
}

TEST(ComputeAll, AttributesDedupsAndFilters) {
    const Example e;
    auto pubs = e.pubs;
    pubs.push_back(pub("early", 2016, 100, {aid("1")}));
    pubs.push_back(pub("late", 2022, 100, {aid("2")}));
    pubs.push_back(pub("foreign", 2019, 100, {aid("99")}));
    const std::vector<Department> depts{e.dept, department("empty", "i", "Department of Nothing")};
    const auto out = compute_all(depts, e.members, pubs, {}, kWindow);
    ASSERT_EQ(out.metrics.size(), 1u);
    EXPECT_EQ(out.metrics[0].paper_count, 3);
    EXPECT_EQ(out.metrics[0].citation_count, 20);
    ASSERT_EQ(out.warnings.size(), 1u);
    EXPECT_NE(out.warnings[0].find("empty"), std::string::npos);
    ASSERT_EQ(out.reports.size(), 1u);
    EXPECT_EQ(out.reports[0].duplicates_removed, 1);
}

TEST(ComputeAll, OverridesDropDocsForOneMemberOnly) {
    const Example e;
    // B is co-authored: excluding it for f1 keeps it through f2.
    const std::vector<DocOverride> keep_b{{"f1", "B", "not his"}};
    auto out = compute_all(std::span(&e.dept, 1), e.members, e.pubs, keep_b, kWindow);
    EXPECT_EQ(out.metrics[0].paper_count, 3);
    const std::vector<DocOverride> drop_a{{"f1", "A", "namesake"}};
    out = compute_all(std::span(&e.dept, 1), e.members, e.pubs, drop_a, kWindow);
    EXPECT_EQ(out.metrics[0].paper_count, 2);
    EXPECT_EQ(out.metrics[0].citation_count, 10);
}

TEST(ComputeAll, DocTypeAllowList) {
    Example e;
    e.pubs[0].doc_type = "Article";
    e.pubs[1].doc_type = "Review";
    MetricsConfig config;
    config.doc_type_allow_list = {"Article"};
    const auto out = compute_all(std::span(&e.dept, 1), e.members, e.pubs, {}, kWindow, config);
    EXPECT_EQ(out.metrics[0].paper_count, 1);
    EXPECT_EQ(out.metrics[0].citation_count, 10);
}

TEST(ComputeAll, ParallelResultMatchesSequentialComputation) {
    std::mt19937_64 rng(5);
    std::vector<Department> depts;
    std::vector<FacultyMember> members;
    std::vector<Publication> pubs;
    for (int d = 0; d < 40; ++d) {
        depts.push_back(department("d" + std::to_string(d), "i", "Dept " + std::to_string(d)));
        for (int m = 0; m < 4; ++m)
            members.push_back(member("d" + std::to_string(d) + "/m" + std::to_string(m), depts.back().id,
                                     {aid(std::to_string(d * 10 + m))}));
    }
    for (int p = 0; p < 2000; ++p)
        pubs.push_back(pub("p" + std::to_string(p), 2015 + static_cast<int>(rng() % 9),
                           static_cast<std::int64_t>(rng() % 30),
                           {aid(std::to_string(rng() % 400)), aid(std::to_string(rng() % 400))}));
    const auto parallel = compute_all(depts, members, pubs, {}, kWindow);
    ASSERT_EQ(parallel.metrics.size(), depts.size());
    for (const auto &m : parallel.metrics) {
        std::vector<FacultyMember> own;
        std::set<AuthorId> ids;
        for (const auto &fm : members)
            if (fm.department_id == m.department_id) {
                own.push_back(fm);
                ids.insert(fm.author_ids.begin(), fm.author_ids.end());
            }
        std::vector<Publication> mine;
        for (const auto &p : pubs)
            if (kWindow.contains(p.year) &&
                std::any_of(p.author_ids.begin(), p.author_ids.end(), [&](const AuthorId &a) { return ids.count(a); }))
                mine.push_back(p);
        const auto expected =
            compute_metrics(*std::find_if(depts.begin(), depts.end(), [&](auto &d) { return d.id == m.department_id; }),
                            own, mine, kWindow);
        ASSERT_EQ(m, expected) << m.department_id;
    }
}

TEST(ComputeAll, UnknownDepartmentReferenceIsPrecondition) {
    const Example e;
    const std::vector<FacultyMember> members{member("x", "nowhere", {aid("1")})};
    EXPECT_THROW(compute_all(std::span(&e.dept, 1), members, e.pubs, {}, kWindow), PreconditionError);
}
