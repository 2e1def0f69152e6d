#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "deptstats/cli/cli.hpp"
#include "support.hpp"

namespace deptstats::testing {

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

inline CliResult run_cli(const std::vector<std::string> &args) {
    std::ostringstream out;
    std::ostringstream err;
    CliResult result;
    result.code = cli::run(args, out, err);
    result.out = out.str();
    result.err = err.str();
    return result;
}

// Global options that point the CLI at the bundled fixture corpus.
inline std::vector<std::string> fixture_args(const std::string &workspace) {
    return {"--workspace", workspace, "--provider", "fixture", "--fixture-dir", kFixtureDir + "/records"};
}

inline CliResult run_fixture(const std::string &workspace, std::vector<std::string> command) {
    auto args = fixture_args(workspace);
    args.insert(args.end(), command.begin(), command.end());
    return run_cli(args);
}

// ingest + fetch 2017:2021 + compute over the fixture corpus. Returns the
// first failing step, or the compute result.
inline CliResult run_fixture_pipeline(const std::string &workspace) {
    const std::vector<std::vector<std::string>> steps{
        {"ingest", "--roster", kFixtureDir + "/roster.csv", "--institutions", kFixtureDir + "/institutions.csv",
         "--tags", kFixtureDir + "/tags.csv"},
        {"fetch", "--window", "2017:2021"},
        {"compute"},
    };
    CliResult last;
    for (const auto &step : steps) {
        last = run_fixture(workspace, step);
        if (last.code != 0)
            return last;
    }
    return last;
}

} // namespace deptstats::testing
