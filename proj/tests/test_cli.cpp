#include <gtest/gtest.h>

#include <fstream>

#include "deptstats/core/json_codec.hpp"
#include "deptstats/store/snapshot_store.hpp"
#include "pipeline.hpp"

using namespace deptstats;
using deptstats::testing::kFixtureDir;
using deptstats::testing::run_cli;
using deptstats::testing::run_fixture;
using deptstats::testing::run_fixture_pipeline;
using deptstats::testing::TempDir;

namespace {

std::string slurp(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write(const std::filesystem::path &path, const std::string &body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << body;
}

std::string head_of(const TempDir &workspace) {
    return store::SnapshotStore(workspace.path() / "snapshots").head().value_or("");
}

nlohmann::json summary(const std::string &out) { return nlohmann::json::parse(out.substr(0, out.find('\n'))); }

int run_with_env(const std::vector<std::string> &args, std::map<std::string, std::string> env, std::string *err) {
    cli::Environment environment;
    environment.getenv = [env](const std::string &key) -> std::optional<std::string> {
        const auto it = env.find(key);
        return it == env.end() ? std::nullopt : std::optional(it->second);
    };
    std::ostringstream out;
    std::ostringstream error;
    const int code = cli::run(args, out, error, environment);
    if (err)
        *err = error.str();
    return code;
}

} // namespace

TEST(CliPipeline, FixtureRunReproducesGoldenExport) {
    TempDir workspace;
    const auto compute = run_fixture_pipeline(workspace.str());
    ASSERT_EQ(compute.code, 0) << compute.err;
    EXPECT_EQ(summary(compute.out).at("command"), "compute");

    const auto target = workspace.path() / "results.csv";
    const auto exported = run_fixture(workspace.str(), {"export", "--format", "csv", "--out", target.string()});
    ASSERT_EQ(exported.code, 0) << exported.err;
    EXPECT_EQ(slurp(target), slurp(kFixtureDir + "/golden_export.csv"));

    const auto json_target = workspace.path() / "results.json";
    ASSERT_EQ(run_fixture(workspace.str(), {"export", "--format", "json", "--out", json_target.string()}).code, 0);
    const auto document = nlohmann::json::parse(slurp(json_target));
    EXPECT_EQ(document.at("rows").size(), 57u);
}

TEST(CliPipeline, RerunningEveryStepKeepsTheSnapshotId) {
    TempDir workspace;
    ASSERT_EQ(run_fixture_pipeline(workspace.str()).code, 0);
    const auto first = head_of(workspace);
    ASSERT_FALSE(first.empty());
    const auto again = run_fixture_pipeline(workspace.str());
    ASSERT_EQ(again.code, 0) << again.err;
    EXPECT_EQ(head_of(workspace), first);

    const auto listed = run_fixture(workspace.str(), {"snapshots"});
    ASSERT_EQ(listed.code, 0);
    EXPECT_EQ(summary(listed.out).at("head"), first);
}

TEST(CliPipeline, RankTopFiveAndSelectors) {
    TempDir workspace;
    ASSERT_EQ(run_fixture_pipeline(workspace.str()).code, 0);
    const auto ranked = run_fixture(workspace.str(), {"rank", "--query", "mathematics", "--top", "5"});
    ASSERT_EQ(ranked.code, 0) << ranked.err;
    const auto table = summary(ranked.out);
    EXPECT_EQ(table.at("rows").size(), 5u);
    EXPECT_NE(ranked.out.find("citations/trs"), std::string::npos);

    EXPECT_EQ(run_fixture(workspace.str(), {"rank"}).code, 1);
    EXPECT_EQ(run_fixture(workspace.str(), {"rank", "--institution", "AUTH", "--query", "math"}).code, 1);
    EXPECT_EQ(run_fixture(workspace.str(), {"rank", "--institution", "AUTH", "--metric", "h_index"}).code, 1);

    std::vector<std::string> ids;
    const auto everything = summary(run_fixture(workspace.str(), {"rank", "--query", "a"}).out);
    for (const auto &row : everything.at("rows"))
        ids.push_back(row.at("department_id"));
    ASSERT_GE(ids.size(), 6u);
    std::string five = ids[0];
    for (std::size_t i = 1; i < 5; ++i)
        five += "," + ids[i];
    EXPECT_EQ(run_fixture(workspace.str(), {"rank", "--departments", five}).code, 0);
    const auto six = run_fixture(workspace.str(), {"rank", "--departments", five + "," + ids[5]});
    EXPECT_EQ(six.code, 1);
    EXPECT_NE(six.err.find("five"), std::string::npos);
}

TEST(CliPipeline, ResolveWritesWorksheetAndMergeIsAudited) {
    TempDir workspace;
    ASSERT_EQ(run_fixture_pipeline(workspace.str()).code, 0);
    const auto worksheet = workspace.path() / "math.csv";
    const auto resolved =
        run_fixture(workspace.str(), {"resolve", "--department", "auth-school-of-mathematics", "--out",
                                      worksheet.string()});
    ASSERT_EQ(resolved.code, 0) << resolved.err;
    EXPECT_TRUE(slurp(worksheet).starts_with("member_id,member,status,anchor,candidate"));

    const auto snapshot = store::SnapshotStore(workspace.path() / "snapshots").load(head_of(workspace));
    const FacultyMember *target = nullptr;
    for (const auto &m : snapshot.members)
        if (m.author_ids.size() >= 2) {
            target = &m;
            break;
        }
    if (target) {
        const auto merged = run_fixture(workspace.str(), {"merge", "--member", target->id, "--from",
                                                          target->author_ids[1].str(), "--into",
                                                          target->author_ids[0].str()});
        ASSERT_EQ(merged.code, 0) << merged.err;
        EXPECT_TRUE(std::filesystem::exists(workspace.path() / "audit.jsonl"));
    }
    EXPECT_EQ(run_fixture(workspace.str(), {"merge", "--member", "nobody", "--from", "fixture:1", "--into",
                                            "fixture:2"})
                  .code,
              1);
}

TEST(CliErrors, CommandsBeforeIngestFailWithValidationCode) {
    TempDir workspace;
    EXPECT_EQ(run_fixture(workspace.str(), {"fetch", "--window", "2017:2021"}).code, 1);
    EXPECT_EQ(run_fixture(workspace.str(), {"compute"}).code, 1);
    EXPECT_EQ(run_fixture(workspace.str(), {"rank", "--institution", "AUTH"}).code, 1);
    EXPECT_EQ(run_fixture(workspace.str(), {"export", "--out", (workspace.path() / "x.csv").string()}).code, 1);
    EXPECT_FALSE(std::filesystem::exists(workspace.path() / "x.csv"));
}

TEST(CliErrors, BadArgumentsAndInputs) {
    TempDir workspace;
    EXPECT_EQ(run_cli({}).code, 1);
    EXPECT_EQ(run_cli({"frobnicate"}).code, 1);
    EXPECT_EQ(run_cli({"--help"}).code, 0);
    EXPECT_EQ(run_fixture(workspace.str(), {"ingest"}).code, 1);
    EXPECT_EQ(run_fixture(workspace.str(), {"ingest", "--roster", "/no/such/roster.csv"}).code, 1);

    const auto roster = workspace.path() / "roster.csv";
    write(roster, "institution,department,member,rank,author_ids\nAUTH,Physics,A,Dean,\n");
    const auto bad = run_fixture(workspace.str(), {"ingest", "--roster", roster.string(), "--institutions",
                                                   kFixtureDir + "/institutions.csv"});
    EXPECT_EQ(bad.code, 1);
    EXPECT_NE(bad.err.find("2"), std::string::npos) << bad.err;

    write(roster, "institution,department,member,rank,author_ids\n");
    ASSERT_EQ(run_fixture(workspace.str(), {"ingest", "--roster", roster.string(), "--institutions",
                                            kFixtureDir + "/institutions.csv"})
                  .code,
              0);
    EXPECT_EQ(run_fixture(workspace.str(), {"fetch", "--window", "2017:2021"}).code, 1);
    EXPECT_EQ(run_fixture(workspace.str(), {"fetch", "--window", "2021:2017"}).code, 1);
}

TEST(CliErrors, ScopusWithoutKeyIsAConfigurationError) {
    TempDir workspace;
    const auto base = std::vector<std::string>{"--workspace", workspace.str()};
    auto ingest = base;
    ingest.insert(ingest.end(), {"ingest", "--roster", kFixtureDir + "/roster.csv", "--institutions",
                                 kFixtureDir + "/institutions.csv"});
    ASSERT_EQ(run_with_env(ingest, {}, nullptr), 0);
    auto fetch = base;
    fetch.insert(fetch.end(), {"--provider", "scopus", "fetch", "--window", "2017:2021"});
    std::string err;
    EXPECT_EQ(run_with_env(fetch, {}, &err), 1);
    EXPECT_NE(err.find("BIBLIO_API_KEY"), std::string::npos);
}

TEST(CliErrors, UnreachableProviderIsATransportError) {
    TempDir workspace;
    const auto roster = workspace.path() / "roster.csv";
    write(roster, "institution,department,member,rank,author_ids\nAUTH,Physics,A,Professor,scopus:123\n");
    const auto config = workspace.path() / "deptstats.toml";
    write(config, "[scopus]\nbase_endpoint = \"http://127.0.0.1:1\"\nmax_retries = 1\nbackoff_base_ms = 1\n"
                  "backoff_cap_ms = 2\n");
    const std::vector<std::string> base{"--workspace", workspace.str(), "--config", config.string(), "--no-cache"};
    auto ingest = base;
    ingest.insert(ingest.end(),
                  {"ingest", "--roster", roster.string(), "--institutions", kFixtureDir + "/institutions.csv"});
    ASSERT_EQ(run_with_env(ingest, {}, nullptr), 0);
    auto fetch = base;
    fetch.insert(fetch.end(), {"--provider", "scopus", "fetch", "--window", "2017:2021"});
    const auto before = head_of(workspace);
    std::string err;
    EXPECT_EQ(run_with_env(fetch, {{"BIBLIO_API_KEY", "test-key"}}, &err), 2) << err;
    EXPECT_EQ(head_of(workspace), before);
}
