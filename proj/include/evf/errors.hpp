#pragma once

#include <stdexcept>
#include <string>

namespace evf {

/// Malformed instance or certificate text.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// An operation was called with arguments violating its documented precondition.
struct PreconditionError : std::invalid_argument {
    explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

/// A runtime self-check failed. Either an internal bug or an input that does
/// not satisfy the solver's structural assumptions (e.g. odd-cycle symmetry).
struct CheckFailure : std::logic_error {
    explicit CheckFailure(const std::string& what) : std::logic_error(what) {}
};

} // namespace evf
