// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace drastic {

// Every error carries the name of the module that raised it; what() is
// "<module>: <message>".
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& message)
        : std::runtime_error(module + ": " + message), module_(std::move(module)) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

// Raised when a well-formed request has an empty answer: mode_solver
// Infeasible and rvd_store NoRows derive from this. The CLI maps it to exit 2.
class EmptyResult : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::string module, const std::string& message, std::size_t row = 0)
        : Error(std::move(module), row ? "row " + std::to_string(row) + ": " + message : message),
          row_(row) {}

    // 1-based line number in the source file, 0 when not line-specific.
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

} // namespace drastic
