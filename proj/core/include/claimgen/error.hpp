#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace claimgen {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input files. Messages carry line numbers where available.
struct ParseError : Error {
    using Error::Error;
};

// Violated configuration. Collects every violation before throwing so a
// single run reports all of them at once.
struct ConfigError : Error {
    explicit ConfigError(std::vector<std::string> violations_)
        : Error(join(violations_)), violations(std::move(violations_)) {}
    explicit ConfigError(const std::string& one)
        : ConfigError(std::vector<std::string>{one}) {}

    std::vector<std::string> violations;

private:
    static std::string join(const std::vector<std::string>& vs) {
        std::string msg = "invalid configuration:";
        for (const auto& v : vs) {
            msg += "\n  - ";
            msg += v;
        }
        return msg;
    }
};

// Failure inside a language-model backend, surfaced with the backend message.
struct BackendError : Error {
    using Error::Error;
};

struct ScorerError : Error {
    using Error::Error;
};

} // namespace claimgen
