#pragma once

#include <stdexcept>
#include <string>

namespace syncbandit {

// Thrown when a dual bisection or iterative solver fails to converge.
struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a constraint set admits no feasible point.
struct InfeasibleError : std::invalid_argument {
    explicit InfeasibleError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace syncbandit
