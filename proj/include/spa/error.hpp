#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spa {

enum class ErrorCategory {
    InvalidArgument,  // bad parameter values or incompatible options
    InvalidData,      // data violates a model invariant
    Parse,            // malformed input file
    Ascertainment,    // case-control sampling did not converge
};

std::string_view to_string(ErrorCategory category);

/// Single exception type for every recoverable failure in the library.
/// The category drives the CLI exit code.
class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

[[noreturn]] inline void fail(ErrorCategory category, const std::string& message) {
    throw Error(category, message);
}

inline void require(bool condition, ErrorCategory category, const char* message) {
    if (!condition) {
        throw Error(category, message);
    }
}

inline void require(bool condition, ErrorCategory category, const std::string& message) {
    if (!condition) {
        throw Error(category, message);
    }
}

}  // namespace spa
