#ifndef FRACMEM_KERNEL_WEIGHTS_HPP
#define FRACMEM_KERNEL_WEIGHTS_HPP

#include <array>

#include "fracmem/errors.hpp"

namespace fracmem {

// Standard singular-integral normalization C_{N,s} = s 4^s Γ((N+2s)/2) / (π^{N/2} Γ(1-s)).
double normalization_constant(int dim, double s);

double unit_ball_volume(int dim);  // 2 in 1-D, pi in 2-D

// Kernel mass of |z|^{-N-2s} over {|z| > R}:  N ω_N R^{-2s} / (2s).
double radial_tail_mass(int dim, double s, double R);

// Kernel mass over the complement of the centered box [-R,R]^N (exact in 1-D,
// semi-analytic in 2-D).
double exterior_box_mass(int dim, double s, double R);

// How pair weights for |d|_inf <= 1 are computed. Touching-cell integrals of
// the raw kernel against piecewise-constant cells diverge for s >= 1/2, so the
// default policy switches to weights derived from piecewise-linear (hat)
// profile differences there; where the piecewise-constant integral is finite
// it is used exactly.
enum class NearFieldPolicy {
    HatSemiAnalytic,  // default: exact cell-correlation where finite, hat-difference otherwise
    Midpoint,         // plain midpoint rule everywhere (comparison / debugging)
};

enum class TailRadiusPolicy {
    Inscribed,      // radial cut at the distance to the nearest enlarged-box face (default)
    Circumscribed,  // radial cut at the distance to the farthest box corner
};

struct FormSpec {
    double s = 0.5;
    double C_Ns = 0.0;  // filled by make_form_spec
    NearFieldPolicy near_policy = NearFieldPolicy::HatSemiAnalytic;
    TailRadiusPolicy tail_policy = TailRadiusPolicy::Inscribed;
};

FormSpec make_form_spec(int dim, double s,
                        NearFieldPolicy near = NearFieldPolicy::HatSemiAnalytic,
                        TailRadiusPolicy tail = TailRadiusPolicy::Inscribed);

// Unit-lattice (h = 1) pair weights per offset; physical weights scale as
// w(d; h) = h^{dim - 2s} * unit(d). Symmetric in sign and axis permutation.
class OffsetWeights {
public:
    OffsetWeights(int dim, double s, NearFieldPolicy policy);

    double unit(int d0, int d1 = 0) const;
    double scale(double h) const;

    int dim() const { return dim_; }
    double s() const { return s_; }

private:
    int dim_;
    double s_;
    NearFieldPolicy policy_;
    double near_edge_ = 0.0;              // class (1,0) / 1-D |d| = 1
    double near_corner_ = 0.0;            // class (1,1), 2-D only
    std::array<double, 49> mid2d_{};      // exact cell-correlation classes, 2 <= max(|d|) <= 6
};

namespace detail {
// exposed for unit tests
double pc_weight_1d(int d, double s);            // exact; finite for d >= 2 or s < 1/2
double hat_weight_1d(double s);                  // |d| = 1, valid for all s in (0,1)
double pc_weight_2d(int a, int b, double s);     // exact cell correlation, a >= b >= 0, a >= 1
double hat_weight_2d(int a, int b, double s);    // hat-difference, near offsets
double power_integral(int k, double a, double b, double s);  // ∫_a^b t^{k-1-2s} dt
}  // namespace detail

}  // namespace fracmem

#endif
