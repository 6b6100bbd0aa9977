#ifndef CONVAPPROX_ERRORS_HPP
#define CONVAPPROX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace convapprox {

// Shape mismatch between a vector/matrix and what an operation expects.
struct DimensionError : std::runtime_error {
    explicit DimensionError(const std::string& what) : std::runtime_error(what) {}
};

// An argument outside its documented range (N < 1, eta > 1, ...).
struct ParameterError : std::runtime_error {
    explicit ParameterError(const std::string& what) : std::runtime_error(what) {}
};

// An iterative numerical procedure failed to converge.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// A factorization finished but its reconstruction residual exceeds tolerance.
struct ConditioningError : std::runtime_error {
    ConditioningError(const std::string& what, double res)
        : std::runtime_error(what), residual(res) {}
    double residual;
};

// Ridge decomposition residual above tolerance (defective basis).
struct DecompositionError : std::runtime_error {
    explicit DecompositionError(const std::string& what) : std::runtime_error(what) {}
};

// Randomized generation kept failing its verification step.
struct GenerationError : std::runtime_error {
    explicit GenerationError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace convapprox

#endif
