#ifndef FRACMEM_ERRORS_HPP
#define FRACMEM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fracmem {

// Invalid user input (bad dimension, empty mask, out-of-range parameter).
// The CLI maps this to exit code 2.
struct ParameterError : std::runtime_error {
    explicit ParameterError(const std::string& what) : std::runtime_error(what) {}
};

// An iterative solver failed to meet its residual contract.
// The CLI maps this to exit code 3.
struct SolverError : std::runtime_error {
    SolverError(const std::string& what, double best_residual_, int iterations_, int start_id_ = -1)
        : std::runtime_error(what),
          best_residual(best_residual_),
          iterations(iterations_),
          start_id(start_id_) {}

    double best_residual = 0.0;
    int iterations = 0;
    int start_id = -1;  // set when the failure happened inside a multi-start run
};

}  // namespace fracmem

#endif
