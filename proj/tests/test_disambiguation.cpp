#include <gtest/gtest.h>

#include "deptstats/core/errors.hpp"
#include "deptstats/roster/disambiguation.hpp"
#include "support.hpp"

using namespace deptstats;
using namespace deptstats::roster;
using deptstats::testing::aid;
using deptstats::testing::pub;

namespace {

provider::AuthorProfileRecord profile(const std::string &id, const std::string &name,
                                      std::vector<std::string> affiliations, std::vector<std::string> subjects = {}) {
    provider::AuthorProfileRecord record;
    record.author_id = aid(id);
    record.indexed_name = name;
    record.name_variants = {name};
    record.affiliation_history = std::move(affiliations);
    record.subject_areas = std::move(subjects);
    return record;
}

Publication with_subjects(Publication p, std::vector<std::string> subjects) {
    p.subject_areas = std::move(subjects);
    return p;
}

} // namespace

TEST(ProposeMerges, IdenticalNameAndThreeSharedCoauthorsPassesThreshold) {
    const auto member = deptstats::testing::member("m", "d", {aid("A")});
    const auto anchor = profile("A", "Papadopoulos, G.", {"Aristotle University of Thessaloniki"});
    const std::vector candidates{profile("B", "Papadopoulos, G.", {"Aristotle University of Thessaloniki"})};
    const std::vector<Publication> pubs{
        pub("p1", 2018, 0, {aid("A"), aid("x"), aid("y")}), pub("p2", 2019, 0, {aid("A"), aid("z")}),
        pub("p3", 2018, 0, {aid("B"), aid("x")}), pub("p4", 2020, 0, {aid("B"), aid("y"), aid("z")})};

    const auto proposals = propose_merges(member, anchor, candidates, build_coauthor_index(pubs));
    ASSERT_EQ(proposals.size(), 1u);
    // 0.35 name + 0.25 affiliation + 0.30 co-authors (3 of 3)
    EXPECT_EQ(proposals[0].score, Ratio(90, 100));
    EXPECT_GT(proposals[0].score, Ratio(8, 10));
    EXPECT_TRUE(accepted(proposals[0], MergePolicy{}));
    EXPECT_EQ(proposals[0].evidence.size(), 3u);
}

TEST(ProposeMerges, NameOnlyStaysBelowThreshold) {
    const auto member = deptstats::testing::member("m", "d", {aid("A")});
    const auto anchor = profile("A", "Papadopoulos, G.", {"Aristotle University"}, {"MATH"});
    const std::vector candidates{profile("B", "papadopoulos g", {"University of Patras"}, {"MATH"})};
    const auto proposals = propose_merges(member, anchor, candidates, {});
    ASSERT_EQ(proposals.size(), 1u);
    EXPECT_EQ(proposals[0].score, Ratio(45, 100));
    EXPECT_FALSE(accepted(proposals[0], MergePolicy{}));
}

TEST(ProposeMerges, ThresholdIsInclusive) {
    const auto member = deptstats::testing::member("m", "d", {aid("A")});
    const auto anchor = profile("A", "Alpha, A.", {"AUTH"}, {"MATH"});
    const std::vector candidates{profile("B", "Alpha, A.", {"AUTH"}, {"MATH"})};
    MergePolicy policy;
    policy.accept_threshold = Ratio(70, 100); // name + affiliation + subject = 0.70
    const auto proposals = propose_merges(member, anchor, candidates, {}, policy);
    ASSERT_EQ(proposals.size(), 1u);
    EXPECT_EQ(proposals[0].score, Ratio(70, 100));
    EXPECT_TRUE(accepted(proposals[0], policy));
}

TEST(ProposeMerges, SkipsAnchorDuplicatesAndRecordedMerges) {
    auto member = deptstats::testing::member("m", "d", {aid("A"), aid("C")});
    member.merged_pairs.insert({aid("A"), aid("C")});
    const auto anchor = profile("A", "Alpha, A.", {});
    const std::vector candidates{profile("A", "Alpha, A.", {}), profile("C", "Alpha, A.", {}),
                                 profile("B", "Alpha, A.", {}), profile("B", "Alpha, A.", {}),
                                 profile("D", "Delta, D.", {})};
    const auto proposals = propose_merges(member, anchor, candidates, {});
    ASSERT_EQ(proposals.size(), 2u);
    EXPECT_EQ(proposals[0].profile_b, aid("B"));
    EXPECT_EQ(proposals[1].profile_b, aid("D"));
    EXPECT_EQ(proposals[1].score, Ratio(0));
}

TEST(ProposeMerges, OrderIsScoreThenId) {
    const auto member = deptstats::testing::member("m", "d", {aid("A")});
    const auto anchor = profile("A", "Alpha, A.", {"AUTH"});
    const std::vector candidates{profile("Z", "Alpha, A.", {}), profile("Y", "Alpha, A.", {"AUTH"}),
                                 profile("X", "Alpha, A.", {})};
    const auto proposals = propose_merges(member, anchor, candidates, {});
    ASSERT_EQ(proposals.size(), 3u);
    EXPECT_EQ(proposals[0].profile_b, aid("Y"));
    EXPECT_EQ(proposals[1].profile_b, aid("X"));
    EXPECT_EQ(proposals[2].profile_b, aid("Z"));
}

TEST(ProposeMerges, AnchorMustBelongToMember) {
    const auto member = deptstats::testing::member("m", "d", {aid("A")});
    const auto stranger = profile("Q", "Q", {});
    EXPECT_THROW(propose_merges(member, stranger, {}, {}), PreconditionError);
}

TEST(Contamination, EconomicsProfileWithTwoMedicinePapers) {
    const auto member = deptstats::testing::member("m", "d", {aid("E")});
    const std::vector<Publication> pubs{
        with_subjects(pub("e1", 2018, 1, {aid("E"), aid("c1")}), {"ECON"}),
        with_subjects(pub("e2", 2019, 1, {aid("E"), aid("c2")}), {"ECON"}),
        with_subjects(pub("e3", 2020, 1, {aid("E"), aid("c1"), aid("c3")}), {"ECON", "SOCI"}),
        with_subjects(pub("m1", 2020, 9, {aid("E"), aid("doc1"), aid("doc2")}), {"MEDI"}),
        with_subjects(pub("m2", 2021, 9, {aid("E"), aid("doc3")}), {"MEDI"}),
    };
    const auto flags = flag_contamination(member, pubs);
    ASSERT_EQ(flags.size(), 2u);
    EXPECT_EQ(flags[0].suspect_doc_ids, std::vector<std::string>{"m1"});
    EXPECT_EQ(flags[1].suspect_doc_ids, std::vector<std::string>{"m2"});
    for (const auto &flag : flags) {
        EXPECT_EQ(flag.reason, ContaminationReason::SubjectAreaOutlier);
        EXPECT_EQ(flag.author_id, aid("E"));
    }
}

TEST(Contamination, SharedCoauthorClearsTheDoc) {
    const auto member = deptstats::testing::member("m", "d", {aid("E")});
    const std::vector<Publication> pubs{
        with_subjects(pub("e1", 2018, 1, {aid("E"), aid("c1")}), {"ECON"}),
        with_subjects(pub("e2", 2019, 1, {aid("E"), aid("c2")}), {"ECON"}),
        with_subjects(pub("m1", 2020, 9, {aid("E"), aid("c1")}), {"MEDI"}),
    };
    EXPECT_TRUE(flag_contamination(member, pubs).empty());
}

TEST(Contamination, SinglePaperProfileHasNoFlags) {
    const auto member = deptstats::testing::member("m", "d", {aid("E")});
    const std::vector<Publication> pubs{with_subjects(pub("m1", 2020, 9, {aid("E"), aid("x")}), {"MEDI"})};
    EXPECT_TRUE(flag_contamination(member, pubs).empty());
}

TEST(Contamination, DocsWithoutSubjectsUseCoauthors) {
    const auto member = deptstats::testing::member("m", "d", {aid("E")});
    const std::vector<Publication> pubs{
        with_subjects(pub("e1", 2018, 1, {aid("E"), aid("c1")}), {"ECON"}),
        with_subjects(pub("e2", 2019, 1, {aid("E"), aid("c1")}), {"ECON"}),
        pub("u1", 2020, 9, {aid("E"), aid("stranger")}),
        pub("u2", 2020, 9, {aid("E"), aid("c1")}),
    };
    const auto flags = flag_contamination(member, pubs);
    ASSERT_EQ(flags.size(), 1u);
    EXPECT_EQ(flags[0].suspect_doc_ids, std::vector<std::string>{"u1"});
    EXPECT_EQ(flags[0].reason, ContaminationReason::CoauthorDisjoint);
}

TEST(CoauthorIndexTest, SymmetricAndExcludesSelf) {
    const std::vector<Publication> pubs{pub("p", 2018, 0, {aid("a"), aid("b"), aid("c")})};
    const auto index = build_coauthor_index(pubs);
    EXPECT_EQ(index.at(aid("a")), (std::set<AuthorId>{aid("b"), aid("c")}));
    EXPECT_EQ(index.at(aid("c")), (std::set<AuthorId>{aid("a"), aid("b")}));
}
