#ifndef FRACMEM_REARRANGE_HPP
#define FRACMEM_REARRANGE_HPP

#include <utility>
#include <vector>

#include "fracmem/gagliardo.hpp"
#include "fracmem/grid.hpp"

namespace fracmem {

// One-dimensional rearrangement profile: piecewise-constant on [0, |Omega|]
// with breakpoints xi (values.size() + 1 of them, spaced by h^dim).
struct RearrangementProfile {
    std::vector<double> xi;
    std::vector<double> values;
};

RearrangementProfile decreasing_rearrangement(const Field& f);
RearrangementProfile increasing_rearrangement(const Field& f);

// Quasi-ball: the k cells of smallest center distance on an origin-centered
// lattice (ties by cell index). Measure is preserved exactly.
Mask symmetrize_mask(const Mask& mask);

// cell positions of `mask` ordered by radial rank (distance, then index)
std::vector<int> radial_rank_order(const Mask& mask);

struct SymmetrizedField {
    Field field;                   // on the quasi-ball
    std::vector<int> rank_order;   // rank r lives at field position rank_order[r]
};

SymmetrizedField schwarz_decreasing(const Field& f);
SymmetrizedField schwarz_increasing(const Field& f);

// {lhs, rhs} with lhs = ∫ f_* g* over the quasi-ball, rhs = ∫ f g. The
// discrete rearrangement inequality guarantees lhs <= rhs.
std::pair<double, double> hardy_littlewood_check(const Field& f, const Field& g);

// Both fields assembled with one FormSpec on one common enclosing grid.
// Reusable across many fields on the same mask.
struct SchwarzContext {
    QuadraticForm form_domain;  // recentred domain
    QuadraticForm form_ball;    // quasi-ball of equal cell count
    std::vector<int> ball_rank_order;
};

SchwarzContext make_schwarz_context(const Mask& mask, const FormSpec& spec,
                                    const AssembleOptions& opts = {});

// {Q(f*), Q(f)} for a field on the context's mask
std::pair<double, double> polya_szego_with(const SchwarzContext& ctx, const Field& f);

// one-shot convenience: builds the context internally
std::pair<double, double> polya_szego_check(const Field& f, const FormSpec& spec);

}  // namespace fracmem

#endif
