#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace deptstats {

// Base of every error raised by the library. The CLI maps the concrete
// subclass to an exit code, the HTTP service to a status code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A computation was asked for on data that cannot support it
// ("no faculty", "empty department").
class DomainError : public Error {
public:
    using Error::Error;
};

// Caller-supplied arguments are invalid.
class ValidationError : public Error {
public:
    using Error::Error;
};

// A precondition on stored state does not hold (e.g. metrics not computed).
class PreconditionError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

// Network-level failure, HTTP 429 or 5xx. Retryable.
class TransportError : public Error {
public:
    TransportError(const std::string &what, int status = 0) : Error(what), status_(status) { }
    int status() const { return status_; }

private:
    int status_;
};

// Credential rejected or provider misconfigured. Never retried.
class ConfigurationError : public Error {
public:
    using Error::Error;
};

class CorruptionError : public Error {
public:
    using Error::Error;
};

// A roster row failed validation.
class RosterError : public ValidationError {
public:
    RosterError(std::size_t line, const std::string &message)
        : ValidationError("line " + std::to_string(line) + ": " + message), line_(line) { }
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

} // namespace deptstats
