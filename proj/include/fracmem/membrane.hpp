#ifndef FRACMEM_MEMBRANE_HPP
#define FRACMEM_MEMBRANE_HPP

#include <cstdint>
#include <vector>

#include "fracmem/eigensolve.hpp"
#include "fracmem/gagliardo.hpp"
#include "fracmem/grid.hpp"

namespace fracmem {

enum class TieRule { Lexicographic };

// The k = round(c/h^dim) cells of smallest u^2; ties broken by cell index.
// For fixed u this minimizes the potential term over all measure-c subsets.
Mask bathtub_subset(const Field& u, double c, TieRule rule = TieRule::Lexicographic);

struct MembraneConfig {
    double alpha = 1.0;
    double c = 0.0;
    int starts = 16;
    std::uint64_t seed = 0;
    double tol = 1e-9;    // stop when a round improves lambda by less
    int max_outer = 60;   // alternation rounds per start
    double eig_tol = 1e-10;
};

struct OptimizationResult {
    double Lambda = 0.0;
    Field u;
    Mask D;
    std::vector<double> trace;  // per-round lambda of the winning start
    int start_id = -1;
    bool converged = false;
    double c_snapped = 0.0;
    std::vector<std::uint8_t> degenerate_flags;  // per start
};

// Alternating eigensolve / bathtub descent from `starts` seeded random initial
// subsets; returns the best run. Starts run in parallel; the merge is a
// deterministic argmin with start-index tie-break.
OptimizationResult optimize(const QuadraticForm& form, const MembraneConfig& config);

// Exact minimum over all measure-c cell subsets (<= 20 active cells).
double brute_force_lambda(const QuadraticForm& form, double alpha, double c);

struct SweepTable {
    std::vector<double> alphas, cs;
    std::vector<double> Lambda;  // row-major: [ai * cs.size() + ci]
    std::vector<std::array<int, 4>> violations;  // {ai, ci, ai2, ci2} with Lambda decreasing
    double slack = 1e-9;
};

SweepTable monotonicity_sweep(const QuadraticForm& form, const std::vector<double>& alphas,
                              const std::vector<double>& cs, const MembraneConfig& base);

}  // namespace fracmem

#endif
