#ifndef FRACMEM_GAGLIARDO_HPP
#define FRACMEM_GAGLIARDO_HPP

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "fracmem/grid.hpp"
#include "fracmem/kernel_weights.hpp"

namespace fracmem {

struct AssembleOptions {
    bool build_dense = true;  // dense coupling matrix when n <= dense_cap
    int dense_cap = 6000;
    bool parallel = true;  // OpenMP kernels; serial path kept for reference tests
};

// Discrete Gagliardo form for the zero-extension Dirichlet condition:
//   Q(u) = sum_{i<j} 2 w_ij (u_i - u_j)^2 + sum_i t_i u_i^2,
// where w_ij are kernel pair weights between active cells and t_i carries the
// interaction of cell i with the complement, where u vanishes. The complement
// is split at a per-cell radius R_i (inside the enlarged box): complement
// cells within R_i are summed explicitly, the mass beyond R_i enters through
// the analytic radial tail, and active cells beyond R_i are compensated so
// nothing is counted twice. No C_{N,s} factor is applied inside Q.
struct QuadraticForm {
    Grid grid;
    Mask domain;
    FormSpec spec;

    Coord box_lo{0, 0}, box_hi{0, 0};  // enlarged box, inclusive lattice coords
    int span0 = 0, span1 = 0;          // weight table covers offsets in [-span, span]
    std::vector<double> wtab;          // scaled pair weights per offset
    std::vector<double> tail;          // t_i per active cell, domain.cells order
    Eigen::MatrixXd A;                 // u^T A u = Q(u) when has_dense
    bool has_dense = false;
    double hd = 1.0;  // cell volume h^dim

    int n() const { return domain.count(); }
    double w(int d0, int d1) const {
        return wtab[static_cast<std::size_t>(d0 + span0) +
                    static_cast<std::size_t>(2 * span0 + 1) * static_cast<std::size_t>(d1 + span1)];
    }
};

QuadraticForm assemble_form(const Grid& grid, const Mask& domain, const FormSpec& spec,
                            const AssembleOptions& opts = {});

// Q(u); the two evaluation routes (dense matrix / offset streaming) agree to
// rounding and are cross-checked in the tests.
double seminorm_sq(const QuadraticForm& form, const Field& field);
double seminorm_sq_streaming(const QuadraticForm& form, const Field& field, bool parallel = true);

// ((C_Ns/2) Q(u) + alpha * int_D u^2) / int_Omega u^2
double rayleigh_quotient(const QuadraticForm& form, const Field& field, const Mask& D, double alpha);

// positions of subset cells inside domain.cells; throws unless subset ⊆ domain
std::vector<int> positions_in(const Mask& domain, const Mask& subset);

// audit dump: lines "w,i,j,w_ij" for active pairs and "t,i,t_i"
void dump_form_csv(const QuadraticForm& form, std::ostream& os);

namespace detail {
std::vector<double> assemble_tail(const QuadraticForm& form, bool parallel);
}

}  // namespace fracmem

#endif
