#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "deptstats/provider/clock.hpp"

namespace deptstats::cli {

enum ExitCode : int { kSuccess = 0, kValidationError = 1, kTransportError = 2, kInterrupted = 130 };

// Process-level dependencies, replaceable in tests.
struct Environment {
    std::function<std::optional<std::string>(const std::string &)> getenv;
    std::shared_ptr<provider::Clock> clock;

    static Environment system();
};

// Runs one command line (args excludes the program name). Every command
// prints a one-line JSON summary followed by a human-readable table.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err,
        const Environment &environment = Environment::system());

} // namespace deptstats::cli
