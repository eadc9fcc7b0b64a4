#pragma once

#include <stdexcept>
#include <string>

namespace entroposep {

/// Input violates a structural invariant (non-Hermitian, non-unit trace, ...).
class validation_error : public std::invalid_argument {
public:
    explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

/// The call itself is malformed (missing dims, mismatched sizes, bad flags).
class usage_error : public std::invalid_argument {
public:
    explicit usage_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Mathematically valid input outside the domain an operation supports.
class domain_error : public std::domain_error {
public:
    explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

/// Arguments exceed the floating-point range the evaluator guards.
class range_error : public std::range_error {
public:
    explicit range_error(const std::string& what) : std::range_error(what) {}
};

/// A non-finite value surfaced during a numerical computation.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative solver exhausted its budget; carries the last residual.
class iteration_error : public std::runtime_error {
public:
    iteration_error(const std::string& what, double last_residual)
        : std::runtime_error(what), last_residual(last_residual) {}
    double last_residual;
};

/// A sampler's acceptance rate collapsed below the usable floor.
class efficiency_error : public std::runtime_error {
public:
    explicit efficiency_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace entroposep
