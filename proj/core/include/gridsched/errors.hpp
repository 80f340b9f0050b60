#pragma once

#include <stdexcept>
#include <string>

namespace gridsched {

// Bad or inconsistent input data (exit code 1 at the CLI).
struct InputError : std::runtime_error {
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

struct TopologyError : InputError {
    explicit TopologyError(const std::string& what) : InputError(what) {}
};

struct ReferenceError : InputError {
    explicit ReferenceError(const std::string& what) : InputError(what) {}
};

struct EnvelopeError : InputError {
    explicit EnvelopeError(const std::string& what) : InputError(what) {}
};

// Power flow failed to converge (exit code 2 at the CLI).
struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Ledger or energy books do not balance (exit code 3 at the CLI).
struct AccountingError : std::runtime_error {
    explicit AccountingError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gridsched
