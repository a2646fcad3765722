// Pair-weight quadrature for the fractional kernel |z|^{-N-2s} on a uniform
// lattice. Weights are computed on the unit lattice and rescaled. Offsets that
// touch the kernel singularity are handled semi-analytically: the profile on a
// cell whose corner meets the origin is a per-axis polynomial, and monomials
// against the kernel integrate in closed form radially.

#include "fracmem/kernel_weights.hpp"

#include <cmath>
#include <vector>

namespace fracmem {

double normalization_constant(int dim, double s) {
    if (dim != 1 && dim != 2) throw ParameterError("dimension must be 1 or 2");
    if (!(s > 0.0 && s < 1.0)) throw ParameterError("s must lie strictly inside (0,1)");
    const double n = static_cast<double>(dim);
    const double log_c = std::log(s) + 2.0 * s * std::log(2.0) + std::lgamma((n + 2.0 * s) / 2.0) -
                         (n / 2.0) * std::log(M_PI) - std::lgamma(1.0 - s);
    return std::exp(log_c);
}

double unit_ball_volume(int dim) {
    if (dim == 1) return 2.0;
    if (dim == 2) return M_PI;
    throw ParameterError("dimension must be 1 or 2");
}

double radial_tail_mass(int dim, double s, double R) {
    return dim * unit_ball_volume(dim) * std::pow(R, -2.0 * s) / (2.0 * s);
}

namespace {

// ---- Gauss-Legendre ----------------------------------------------------------

struct GaussRule {
    std::vector<double> node, weight;  // on [-1,1]
};

GaussRule gauss_rule(int n) {
    GaussRule r;
    r.node.resize(n);
    r.weight.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.node[i] = x;
        r.weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

const GaussRule& g16() {
    static const GaussRule r = gauss_rule(16);
    return r;
}
const GaussRule& g24() {
    static const GaussRule r = gauss_rule(24);
    return r;
}

template <class F>
double integrate_1d(const GaussRule& g, double a, double b, F&& f) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.node.size(); ++i)
        acc += g.weight[i] * f(mid + half * g.node[i]);
    return acc * half;
}

template <class F>
double integrate_2d(const GaussRule& g, double ax, double bx, double ay, double by, F&& f) {
    const double mx = 0.5 * (ax + bx), hx = 0.5 * (bx - ax);
    const double my = 0.5 * (ay + by), hy = 0.5 * (by - ay);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.node.size(); ++i) {
        const double x = mx + hx * g.node[i];
        double row = 0.0;
        for (std::size_t j = 0; j < g.node.size(); ++j)
            row += g.weight[j] * f(x, my + hy * g.node[j]);
        acc += g.weight[i] * row;
    }
    return acc * hx * hy;
}

double tri(double t) { return std::max(1.0 - std::abs(t), 0.0); }

// autocorrelation of the unit hat basis function (support [-2,2], piecewise cubic)
double hat_corr(double w) {
    const double t = std::abs(w);
    if (t <= 1.0) return 2.0 / 3.0 - t * t + 0.5 * t * t * t;
    if (t <= 2.0) {
        const double u = 2.0 - t;
        return u * u * u / 6.0;
    }
    return 0.0;
}

double angular_cos_integral(double s) {  // ∫_0^{π/4} cos(θ)^{2s} dθ
    return integrate_1d(g24(), 0.0, M_PI / 4.0,
                        [&](double th) { return std::pow(std::cos(th), 2.0 * s); });
}

// ∫ over [0,1]^2 of z0^i z1^j (z0^2+z1^2)^{-1-s}: radial part in closed form,
// angular part by Gauss. Requires i + j > 2s.
double corner_monomial_integral(int i, int j, double s) {
    const double p = i + j - 2.0 * s;
    if (p <= 0.0) throw ParameterError("divergent corner monomial");
    const auto left = [&](double th) {  // R(θ) = 1/cos θ
        return std::pow(std::cos(th), i - p) * std::pow(std::sin(th), j);
    };
    const auto right = [&](double th) {  // R(θ) = 1/sin θ
        return std::pow(std::cos(th), i) * std::pow(std::sin(th), j - p);
    };
    return (integrate_1d(g24(), 0.0, M_PI / 4.0, left) +
            integrate_1d(g24(), M_PI / 4.0, M_PI / 2.0, right)) /
           p;
}

// Fit a per-axis degree-3 polynomial (16 tensor coefficients) to g on [0,1]^2.
// Exact (up to conditioning) whenever g is such a polynomial.
struct Poly4x4 {
    double c[4][4];
};

Poly4x4 fit_poly(const std::vector<std::vector<double>>& samples, const double nodes[4]) {
    // invert the 4x4 Vandermonde once by Gaussian elimination
    double v[4][8];
    for (int r = 0; r < 4; ++r) {
        double t = 1.0;
        for (int c = 0; c < 4; ++c) {
            v[r][c] = t;
            t *= nodes[r];
        }
        for (int c = 4; c < 8; ++c) v[r][c] = (c - 4 == r) ? 1.0 : 0.0;
    }
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(v[r][col]) > std::abs(v[piv][col])) piv = r;
        for (int c = 0; c < 8; ++c) std::swap(v[col][c], v[piv][c]);
        const double d = v[col][col];
        for (int c = 0; c < 8; ++c) v[col][c] /= d;
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            const double f = v[r][col];
            for (int c = 0; c < 8; ++c) v[r][c] -= f * v[col][c];
        }
    }
    double inv[4][4];
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) inv[r][c] = v[r][c + 4];

    // coeffs = inv * samples * inv^T
    Poly4x4 out{};
    double tmp[4][4];
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            double acc = 0.0;
            for (int k = 0; k < 4; ++k) acc += inv[r][k] * samples[k][c];
            tmp[r][c] = acc;
        }
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            double acc = 0.0;
            for (int k = 0; k < 4; ++k) acc += tmp[r][k] * inv[c][k];
            out.c[r][c] = acc;
        }
    return out;
}

// ∫ over [0,1]^2 of profile(z) |z|^{-2-2s} where the cell corner touches the
// origin and `profile` is polynomial on the cell (degree <= 3 per axis).
// Coefficients of monomials with i + j <= 2s must vanish analytically; they are
// zeroed below a tolerance, and a genuinely non-vanishing one throws.
template <class F>
double integrate_origin_cell(double s, F&& profile) {
    const double nodes[4] = {0.125, 0.375, 0.625, 0.875};
    std::vector<std::vector<double>> samples(4, std::vector<double>(4));
    double scale = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            samples[a][b] = profile(nodes[a], nodes[b]);
            scale = std::max(scale, std::abs(samples[a][b]));
        }
    Poly4x4 poly = fit_poly(samples, nodes);
    double acc = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double& c = poly.c[i][j];
            if (i + j <= 2.0 * s) {
                if (std::abs(c) > 1e-7 * scale)
                    throw ParameterError("cell-touching kernel integral diverges for this s");
                c = 0.0;
                continue;
            }
            if (c != 0.0) acc += c * corner_monomial_integral(i, j, s);
        }
    return acc;
}

// Integral of profile(z) |z|^{-2-2s} over a set of unit lattice cells.
// Cells whose closure contains the origin are reflected into the positive
// quadrant and handled by the semi-analytic corner rule.
template <class F>
double integrate_cells(double s, int lo0, int hi0, int lo1, int hi1, F&& profile) {
    const auto f = [&](double z0, double z1) {
        return profile(z0, z1) * std::pow(z0 * z0 + z1 * z1, -1.0 - s);
    };
    double acc = 0.0;
    for (int i = lo0; i < hi0; ++i) {
        for (int j = lo1; j < hi1; ++j) {
            const bool at_origin = (i == 0 || i == -1) && (j == 0 || j == -1);
            if (!at_origin) {
                acc += integrate_2d(g16(), i, i + 1.0, j, j + 1.0, f);
                continue;
            }
            const double s0 = (i == -1) ? -1.0 : 1.0;
            const double s1 = (j == -1) ? -1.0 : 1.0;
            acc += integrate_origin_cell(s, [&](double u, double v) { return profile(s0 * u, s1 * v); });
        }
    }
    return acc;
}

}  // namespace

double exterior_box_mass(int dim, double s, double R) {
    if (dim == 1) return 2.0 * std::pow(R, -2.0 * s) / (2.0 * s);
    return 8.0 * angular_cos_integral(s) * std::pow(R, -2.0 * s) / (2.0 * s);
}

namespace detail {

double power_integral(int k, double a, double b, double s) {
    const double p = k - 2.0 * s;  // ∫ t^{p-1} dt
    if (std::abs(p) < 1e-12) return std::log(b / a);
    const double bp = std::pow(b, p);
    const double ap = a == 0.0 ? 0.0 : std::pow(a, p);
    return (bp - ap) / p;
}

double pc_weight_1d(int d, double s) {
    // ∫ |t|^{-1-2s} tri(t-d) dt; for d = 1 the lower piece reduces to
    // ∫_0^1 t^{-2s} dt, finite only for s < 1/2.
    if (d == 1 && s >= 0.5) throw ParameterError("touching-cell integral diverges for s >= 1/2");
    const double dd = d;
    double acc = 0.0;
    // [d-1, d]: (t - (d-1)) t^{-1-2s}
    acc += power_integral(1, dd - 1.0, dd, s);
    if (d > 1) acc -= (dd - 1.0) * power_integral(0, dd - 1.0, dd, s);
    // [d, d+1]: ((d+1) - t) t^{-1-2s}
    acc += (dd + 1.0) * power_integral(0, dd, dd + 1.0, s);
    acc -= power_integral(1, dd, dd + 1.0, s);
    return acc;
}

double hat_weight_1d(double s) {
    // w = -M/2 with M = ∫ |t|^{-1-2s} F(t) dt,
    // F(t) = 2 B(1) - B(1+t) - B(1-t), B the hat autocorrelation.
    // F is piecewise cubic and equals the constant 1/3 beyond t = 3.
    static const double pieces[3][6] = {
        // a, b, c0, c1, c2, c3 with F = c0 + c1 t + c2 t^2 + c3 t^3 on [a,b]
        {0.0, 1.0, 0.0, 0.0, -1.0, 2.0 / 3.0},
        {1.0, 2.0, 7.0 / 6.0, -3.5, 2.5, -0.5},
        {2.0, 3.0, -25.0 / 6.0, 4.5, -1.5, 1.0 / 6.0},
    };
    double m = 0.0;
    for (const auto& p : pieces)
        for (int k = 0; k < 4; ++k)
            if (p[2 + k] != 0.0) m += p[2 + k] * power_integral(k, p[0], p[1], s);
    m += (1.0 / 3.0) * std::pow(3.0, -2.0 * s) / (2.0 * s);
    m *= 2.0;  // both signs of t
    return -0.5 * m;
}

double pc_weight_2d(int a, int b, double s) {
    // ∫∫ tri(z0-a) tri(z1-b) |z|^{-2-2s} dz; support [a-1,a+1] x [b-1,b+1]
    const auto profile = [&](double z0, double z1) { return tri(z0 - a) * tri(z1 - b); };
    return integrate_cells(s, a - 1, a + 1, b - 1, b + 1, profile);
}

double hat_weight_2d(int a, int b, double s) {
    // w = -M/2, M = ∫ K(z) [2B(d) - B(d+z) - B(d-z)] dz; the constant far part
    // 2B(d) is integrated analytically outside [-3,3]^2.
    const auto B = [&](double v0, double v1) { return hat_corr(v0) * hat_corr(v1); };
    const double Bd = B(a, b);
    const auto F = [&](double z0, double z1) {
        return 2.0 * Bd - B(a + z0, b + z1) - B(a - z0, b - z1);
    };
    double m = integrate_cells(s, -3, 3, -3, 3, F);
    m += 2.0 * Bd * exterior_box_mass(2, s, 3.0);
    return -0.5 * m;
}

}  // namespace detail

FormSpec make_form_spec(int dim, double s, NearFieldPolicy near, TailRadiusPolicy tail) {
    FormSpec spec;
    spec.s = s;
    spec.C_Ns = normalization_constant(dim, s);  // validates dim and s
    spec.near_policy = near;
    spec.tail_policy = tail;
    return spec;
}

OffsetWeights::OffsetWeights(int dim, double s, NearFieldPolicy policy)
    : dim_(dim), s_(s), policy_(policy) {
    if (dim != 1 && dim != 2) throw ParameterError("dimension must be 1 or 2");
    if (!(s > 0.0 && s < 1.0)) throw ParameterError("s must lie strictly inside (0,1)");
    if (policy_ == NearFieldPolicy::Midpoint) {
        near_edge_ = 1.0;  // |d| = 1
        near_corner_ = dim == 2 ? std::pow(2.0, -1.0 - s) : 0.0;
        return;
    }
    // exact cell correlation where it converges, hat-difference where it does not.
    // In 2-D the full hat-difference edge entry loses positivity near s = 1/2
    // (its far-field mass part dominates), so the edge weight regularizes per
    // axis: 1-D hat-difference along the offset axis, exact unit
    // box-correlation mass transversally.
    const bool hat = s >= 0.5;
    if (dim == 1) {
        near_edge_ = hat ? detail::hat_weight_1d(s) : detail::pc_weight_1d(1, s);
    } else {
        near_edge_ = hat ? detail::hat_weight_1d(s) : detail::pc_weight_2d(1, 0, s);
        near_corner_ = detail::pc_weight_2d(1, 1, s);  // finite for every s in (0,1)
        for (int a = 2; a <= 6; ++a)
            for (int b = 0; b <= a; ++b) mid2d_[a * 7 + b] = detail::pc_weight_2d(a, b, s);
    }
    if (near_edge_ <= 0.0 || (dim == 2 && near_corner_ <= 0.0))
        throw SolverError("near-field weight came out non-positive", near_edge_, 0);
}

double OffsetWeights::scale(double h) const { return std::pow(h, dim_ - 2.0 * s_); }

double OffsetWeights::unit(int d0, int d1) const {
    int a = std::abs(d0), b = std::abs(d1);
    if (b > a) std::swap(a, b);
    if (a == 0) return 0.0;  // no self weight
    if (dim_ == 1) {
        if (a == 1) return near_edge_;
        if (policy_ == NearFieldPolicy::Midpoint)
            return std::pow(static_cast<double>(a), -1.0 - 2.0 * s_);
        return detail::pc_weight_1d(a, s_);
    }
    if (policy_ == NearFieldPolicy::Midpoint)
        return std::pow(static_cast<double>(a) * a + static_cast<double>(b) * b, -1.0 - s_);
    if (a == 1) return b == 0 ? near_edge_ : near_corner_;
    if (a <= 6) return mid2d_[a * 7 + b];
    return std::pow(static_cast<double>(a) * a + static_cast<double>(b) * b, -1.0 - s_);
}

}  // namespace fracmem
