#ifndef FRACMEM_INEQUALITIES_HPP
#define FRACMEM_INEQUALITIES_HPP

#include <cstdint>
#include <vector>

#include "fracmem/membrane.hpp"
#include "fracmem/rearrange.hpp"

namespace fracmem {

// ---- Faber-Krahn -------------------------------------------------------------

struct FKReport {
    double Lambda_omega = 0.0;
    double Lambda_ball = 0.0;
    double gap = 0.0;  // Lambda_omega - Lambda_ball
    double h = 0.0;
    double alpha = 0.0;
    double c_snapped = 0.0;
    double s = 0.0;
    std::uint64_t seed = 0;
    // symmetrized-pair replay: RQ(u*, D_*) on the ball vs RQ(u, D) on the domain
    double chain_sym_rq = 0.0;
    double chain_orig_rq = 0.0;
    OptimizationResult opt_omega, opt_ball;
};

FKReport faber_krahn_experiment(const Mask& domain, const FormSpec& spec,
                                const MembraneConfig& config);

// ---- Lieb --------------------------------------------------------------------

struct LiebShiftRecord {
    Coord k{0, 0};
    double overlap = 0.0;   // |Omega_1 ∩ Omega_{2,k}|
    double c_x = 0.0;       // |D_1 ∩ D_{2,k}|
    double lambda1 = 0.0;   // first Dirichlet eigenvalue on the intersection
    double Lambda_cx = 0.0; // Lambda_{Omega_x}(alpha1+alpha2, c_x)
    double Lambda_c = 0.0;  // Lambda_{Omega_x}(alpha, c); NaN when infeasible
    double c_used = 0.0;    // snapped c from the c-rule; NaN when infeasible
    bool evaluated_c = false;
    bool strict = false;    // Lambda_c < Lambda_sum
    double U = 0.0;         // ||u_x||^2
    double W = 0.0;         // (C/2)[u_x]^2 + (a1+a2) ∫_{D∩} u_x^2
};

struct LiebOptions {
    double alpha = 0.0;        // 0 → (alpha1+alpha2)/2
    double c_fraction = 0.5;   // c-rule: c = fraction * c_x, snapped
    std::vector<Coord> shift_set;  // empty → every shift with positive overlap
    int starts = 16;           // for the two domain optimizations
    int per_shift_starts = 4;
    std::uint64_t seed = 0;
    double eig_tol = 1e-9;
    double tol = 1e-9;
};

struct LiebReport {
    OptimizationResult opt1, opt2;
    double Lambda_sum = 0.0;
    double alpha = 0.0;
    double alpha1 = 0.0, alpha2 = 0.0;
    std::vector<LiebShiftRecord> shifts;  // sorted by shift
    std::vector<std::size_t> witnesses;   // indices into `shifts` with strict == true
    // Σ_k (W - Λ U) h^dim over every positive-overlap shift, evaluated through
    // the exact lattice Fubini identities with the pair-only seminorm
    double wu_sum = 0.0;
    double u_sum = 0.0;  // Σ_k U h^dim (equals ||u1||^2 ||u2||^2 exactly)
    double wu_slack = 0.0;
    bool wu_ok = false;
};

LiebReport lieb_experiment(const Mask& omega1, const Mask& omega2, const FormSpec& spec,
                           double alpha1, double alpha2, double c1, double c2,
                           const LiebOptions& opts = {});

// ---- product identity (shift-integrated Gagliardo energy of u1 * shifted u2) --

struct IdentityReport {
    double J1 = 0.0, J2 = 0.0, J3 = 0.0;  // shift-summed decomposition
    double lhs = 0.0;                     // Σ_k [u_x]^2 h^dim, independent evaluation
    double rhs = 0.0;                     // [u1]^2 ||u2||^2 + [u2]^2 ||u1||^2 (pair-only)
    double defect = 0.0;                  // rhs - lhs
    double J2_closed = 0.0;               // autocorrelation closed form for J2
    double semi1_pair = 0.0, semi2_pair = 0.0;
    double norm1_sq = 0.0, norm2_sq = 0.0;
    int offset_cap0 = 0, offset_cap1 = 0;
    int shift_count = 0;
};

// Pair-weight-only seminorms on the shared lattice (no exterior tails), so the
// lattice Fubini identities hold exactly. Fields must be nonnegative and live
// on lattice-compatible grids.
IdentityReport product_identity_check(const Field& u1, const Field& u2, const FormSpec& spec);

}  // namespace fracmem

#endif
