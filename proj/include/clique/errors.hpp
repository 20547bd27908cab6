#pragma once

#include <stdexcept>
#include <string>

namespace clique {

/// Raised when user-supplied input (arguments, file contents, configuration)
/// violates a precondition. The CLI maps this to exit code 1; everything else
/// that escapes is a runtime failure (exit code 2).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace clique
