#include <gtest/gtest.h>

#include "deptstats/core/errors.hpp"
#include "deptstats/roster/registry.hpp"
#include "support.hpp"

using namespace deptstats;
using namespace deptstats::roster;

namespace {

const std::vector<InstitutionRecord> kInstitutions{
    {"AUTH", "Aristotle University of Thessaloniki"},
    {"NKUA", "National and Kapodistrian University of Athens"},
};

const char *kRoster = "institution,department,member,rank,author_ids\n"
                      "AUTH,School of Physics,Georgios Papadopoulos,Professor,fixture:1|fixture:2\n"
                      "AUTH,School of Physics,Eleni Stavrou,Lecturer,-\n"
                      "AUTH,School of Mathematics,Maria Georgiou,Associate Professor,\n"
                      "NKUA,Department of Physics,\"Papadopoulos, Georgios\",Assistant Professor,fixture:3\n";

} // namespace

TEST(RosterParse, ValidFile) {
    const auto file = RosterFile::parse(kRoster);
    ASSERT_EQ(file.rows.size(), 4u);
    EXPECT_EQ(file.rows[0].author_ids.size(), 2u);
    EXPECT_EQ(file.rows[0].line, 2u);
    EXPECT_TRUE(file.rows[1].reviewed_not_found);
    EXPECT_TRUE(file.rows[2].author_ids.empty());
    EXPECT_FALSE(file.rows[2].reviewed_not_found);
    EXPECT_EQ(file.rows[2].rank, AcademicRank::AssociateProfessor);
    EXPECT_EQ(file.rows[3].member_display_name, "Papadopoulos, Georgios");
}

TEST(RosterParse, ErrorsCarryLineNumbers) {
    const auto expect_line = [](const std::string &text, std::size_t line) {
        try {
            RosterFile::parse(text);
            ADD_FAILURE() << "expected RosterError for: " << text;
        } catch (const RosterError &error) {
            EXPECT_EQ(error.line(), line) << error.what();
        }
    };
    const std::string header = "institution,department,member,rank,author_ids\n";
    expect_line(header + "AUTH,Physics,A,Professor,fixture:1\nAUTH,Physics,B,Dean,\n", 3);
    expect_line(header + "AUTH,Physics,A,Professor,notanid\n", 2);
    expect_line(header + "AUTH,Physics,A,Professor\n", 2);
    expect_line(header + "AUTH,,A,Professor,\n", 2);
    expect_line("inst,dept\nAUTH,Physics\n", 1);
}

TEST(RegistryIngest, CreatesEntitiesAndCounts) {
    Registry registry;
    const auto delta = registry.ingest(RosterFile::parse(kRoster), kInstitutions);
    EXPECT_EQ(delta.institutions_created.size(), 2u);
    EXPECT_EQ(delta.departments_created.size(), 3u);
    EXPECT_EQ(delta.members_created.size(), 4u);
    EXPECT_EQ(delta.member_counts.at("AUTH"), 3);
    EXPECT_EQ(delta.member_counts.at("NKUA"), 1);

    const auto *auth = registry.find_institution("AUTH");
    ASSERT_NE(auth, nullptr);
    EXPECT_EQ(auth->id, "auth");
    EXPECT_EQ(auth->trs_count, 3);
    const auto *physics = registry.find_department("auth-school-of-physics");
    ASSERT_NE(physics, nullptr);
    EXPECT_EQ(physics->unit_kind, UnitKind::School);

    const auto *member = registry.find_member_by_author(AuthorId::parse("fixture:2"));
    ASSERT_NE(member, nullptr);
    EXPECT_EQ(member->id, "auth-school-of-physics/georgios-papadopoulos");
    EXPECT_EQ(member->profile_status, ProfileStatus::Resolved);
    EXPECT_EQ(registry.find_member("auth-school-of-physics/eleni-stavrou")->profile_status, ProfileStatus::NotFound);
    EXPECT_EQ(registry.find_member("auth-school-of-mathematics/maria-georgiou")->profile_status,
              ProfileStatus::PendingReview);
}

TEST(RegistryIngest, IsIdempotent) {
    Registry registry;
    registry.ingest(RosterFile::parse(kRoster), kInstitutions);
    const auto members = registry.members();
    const auto departments = registry.departments();
    const auto again = registry.ingest(RosterFile::parse(kRoster), kInstitutions);
    EXPECT_TRUE(again.empty());
    EXPECT_EQ(registry.members(), members);
    EXPECT_EQ(registry.departments(), departments);
}

TEST(RegistryIngest, UpdatesExistingMembers) {
    Registry registry;
    registry.ingest(RosterFile::parse(kRoster), kInstitutions);
    const auto delta = registry.ingest(
        RosterFile::parse("institution,department,member,rank,author_ids\n"
                          "AUTH,School of Mathematics,Maria Georgiou,Professor,fixture:9\n"),
        kInstitutions);
    ASSERT_EQ(delta.members_updated.size(), 1u);
    EXPECT_TRUE(delta.members_created.empty());
    const auto *member = registry.find_member("auth-school-of-mathematics/maria-georgiou");
    EXPECT_EQ(member->rank, AcademicRank::Professor);
    EXPECT_EQ(member->profile_status, ProfileStatus::Resolved);
    EXPECT_EQ(registry.members().size(), 4u);
}

TEST(RegistryIngest, AuthorIdClaimedTwiceIsRejectedAtomically) {
    Registry registry;
    registry.ingest(RosterFile::parse(kRoster), kInstitutions);
    const auto before = registry.members();
    try {
        registry.ingest(RosterFile::parse("institution,department,member,rank,author_ids\n"
                                          "NKUA,Department of Physics,New Person,Lecturer,fixture:7\n"
                                          "NKUA,Department of Physics,Other Person,Lecturer,fixture:1\n"),
                        kInstitutions);
        FAIL() << "expected RosterError";
    } catch (const RosterError &error) {
        EXPECT_EQ(error.line(), 3u);
    }
    EXPECT_EQ(registry.members(), before);
}

TEST(RegistryIngest, UnknownAbbreviationAndDuplicateRows) {
    Registry registry;
    EXPECT_THROW(registry.ingest(RosterFile::parse("institution,department,member,rank,author_ids\n"
                                                   "XYZ,Physics,A,Professor,\n"),
                                 kInstitutions),
                 RosterError);
    EXPECT_THROW(registry.ingest(RosterFile::parse("institution,department,member,rank,author_ids\n"
                                                   "AUTH,Physics,A,Professor,\n"
                                                   "AUTH,Physics,A,Lecturer,\n"),
                                 kInstitutions),
                 RosterError);
    EXPECT_TRUE(registry.empty());
}

TEST(RegistryIngest, EmptyRosterWarns) {
    Registry registry;
    const auto delta = registry.ingest(RosterFile::parse("institution,department,member,rank,author_ids\n"),
                                       kInstitutions);
    ASSERT_EQ(delta.warnings.size(), 1u);
    EXPECT_TRUE(registry.empty());
}

TEST(RegistryIngest, SameDepartmentNameInTwoInstitutionsStaysDistinct) {
    Registry registry;
    registry.ingest(RosterFile::parse("institution,department,member,rank,author_ids\n"
                                      "AUTH,Department of Physics,A,Professor,\n"
                                      "NKUA,Department of Physics,B,Professor,\n"),
                    kInstitutions);
    EXPECT_EQ(registry.find_departments_by_name("department of physics").size(), 2u);
}

TEST(RegistryTags, AppliesAndCountsChanges) {
    Registry registry;
    registry.ingest(RosterFile::parse(kRoster), kInstitutions);
    const auto tags = parse_tag_file("institution,department,tags\nAUTH,School of Physics,physics|astronomy\n");
    EXPECT_EQ(registry.apply_tags(tags), 1u);
    EXPECT_EQ(registry.apply_tags(tags), 0u);
    EXPECT_EQ(registry.find_department("auth-school-of-physics")->thematic_tags,
              (std::set<std::string>{"astronomy", "physics"}));
    EXPECT_THROW(registry.apply_tags(parse_tag_file("institution,department,tags\nAUTH,Nope,x\n")), RosterError);
}

TEST(RegistryMerge, IdempotentWithSingleAuditEntry) {
    deptstats::testing::TempDir dir;
    provider::ManualClock clock;
    AuditLog audit(dir.path() / "audit.jsonl", clock);
    Registry registry;
    registry.ingest(RosterFile::parse(kRoster), kInstitutions);
    const std::string id = "auth-school-of-physics/georgios-papadopoulos";
    const auto a = AuthorId::parse("fixture:2");
    const auto b = AuthorId::parse("fixture:1");

    const auto once = registry.apply_merge(id, a, b, &audit);
    const auto twice = registry.apply_merge(id, a, b, &audit);
    EXPECT_EQ(once, twice);
    ASSERT_EQ(once.merged_pairs.size(), 1u);
    EXPECT_EQ(*once.merged_pairs.begin(), std::pair(b, a));

    const auto entries = audit.entries();
    ASSERT_EQ(entries.size(), 1u);
    EXPECT_EQ(entries[0].at("operation"), "apply_merge");
    EXPECT_TRUE(entries[0].contains("timestamp"));
    EXPECT_TRUE(entries[0].at("before").at("merged_pairs").empty());
    EXPECT_EQ(entries[0].at("after").at("merged_pairs").size(), 1u);
}

TEST(RegistryMerge, UnattachedIdIsRejected) {
    Registry registry;
    registry.ingest(RosterFile::parse(kRoster), kInstitutions);
    EXPECT_THROW(registry.apply_merge("auth-school-of-physics/georgios-papadopoulos", AuthorId::parse("fixture:1"),
                                      AuthorId::parse("fixture:3")),
                 ValidationError);
    EXPECT_THROW(registry.apply_merge("nobody", AuthorId::parse("fixture:1"), AuthorId::parse("fixture:2")),
                 NotFoundError);
}

TEST(RegistryRebuild, RejectsCorruptCollections) {
    auto institution = Institution{"auth", "Aristotle University", "AUTH", 0};
    auto dept = deptstats::testing::department("auth-physics", "auth", "Physics");
    auto a = deptstats::testing::member("auth-physics/a", "auth-physics", {AuthorId::parse("fixture:1")});
    auto b = deptstats::testing::member("auth-physics/b", "auth-physics", {AuthorId::parse("fixture:1")});
    EXPECT_THROW(Registry({institution}, {dept}, {a, b}), CorruptionError);
    auto orphan = deptstats::testing::member("x/c", "missing", {});
    EXPECT_THROW(Registry({institution}, {dept}, {orphan}), CorruptionError);
    EXPECT_NO_THROW(Registry({institution}, {dept}, {a}));
}
