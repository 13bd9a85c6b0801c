#pragma once

#include <stdexcept>
#include <string>

namespace epitail {

/// Thrown when a request would materialize more branches than the
/// enumeration path supports (2^n components, capped at n = 30).
/// Callers should fall back to the binomial or sampling path.
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Thrown when an infinite product or series has no finite limit
/// for the given parameters.
class DivergenceError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Thrown when a quadrature rule fails its node-doubling stability
/// check. Carries the largest node count that was attempted.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, int nodes_reached)
        : std::runtime_error(what), nodes_reached_(nodes_reached) {}

    int nodes_reached() const noexcept { return nodes_reached_; }

private:
    int nodes_reached_;
};

}  // namespace epitail
