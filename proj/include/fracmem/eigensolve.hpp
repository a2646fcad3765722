#ifndef FRACMEM_EIGENSOLVE_HPP
#define FRACMEM_EIGENSOLVE_HPP

#include <vector>

#include "fracmem/gagliardo.hpp"
#include "fracmem/grid.hpp"

namespace fracmem {

struct EigenPair {
    double lambda = 0.0;
    Field vector;          // L2-normalized, sign-normalized (largest entry positive)
    double residual = 0.0; // ||H u - lambda u|| / ||u||
    int iterations = 0;
    bool degenerate = false;  // next Ritz value within 1e-12 relative of lambda
};

struct EigOptions {
    double tol = 1e-10;  // convergence: residual <= tol * max(|lambda|, tiny)
    int max_outer = 10000;
    int dense_cutoff = 32;  // dense eigendecomposition at or below this many cells
    const std::vector<double>* x0 = nullptr;  // warm start, domain order
};

// Smallest eigenpair of H = (C_Ns/2) A / h^dim + alpha diag(chi_D) on the
// active cells. Dense decomposition for tiny problems, preconditioned
// single-vector LOBPCG otherwise.
EigenPair smallest_eigenpair(const QuadraticForm& form, const Mask& D, double alpha,
                             const EigOptions& opts);
EigenPair smallest_eigenpair(const QuadraticForm& form, const Mask& D, double alpha,
                             double tol = 1e-10);

double dirichlet_eigenvalue(const QuadraticForm& form, double tol = 1e-10);

}  // namespace fracmem

#endif
