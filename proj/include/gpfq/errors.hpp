#pragma once

#include <stdexcept>
#include <string>

namespace gpfq {

// q is not of the form p^k for a prime p.
struct NotPrimePower : std::invalid_argument {
    explicit NotPrimePower(const std::string& what) : std::invalid_argument(what) {}
};

// Multiplicative inverse or division requested for the zero element.
struct DivisionByZero : std::domain_error {
    explicit DivisionByZero(const std::string& what) : std::domain_error(what) {}
};

// Two objects with different (q, d) ambients were combined.
struct MixedAmbient : std::invalid_argument {
    explicit MixedAmbient(const std::string& what) : std::invalid_argument(what) {}
};

// An enumeration or search exceeded its configured budget.
struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

// A hypergraph operation that needs vertices/edges got none.
struct EmptyHypergraph : std::invalid_argument {
    explicit EmptyHypergraph(const std::string& what) : std::invalid_argument(what) {}
};

// A documented precondition of an operation does not hold.
struct PreconditionFailed : std::logic_error {
    explicit PreconditionFailed(const std::string& what) : std::logic_error(what) {}
};

// An operation restricted to a particular ambient dimension got another one.
struct WrongDimension : std::invalid_argument {
    explicit WrongDimension(const std::string& what) : std::invalid_argument(what) {}
};

// A computation that requires the verified walk identity was handed a graph
// on which the identity check failed.
struct IdentityFailed : PreconditionFailed {
    explicit IdentityFailed(const std::string& what) : PreconditionFailed(what) {}
};

// An iteration hit its round limit before reaching its stopping condition.
struct RoundLimit : std::runtime_error {
    explicit RoundLimit(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gpfq
