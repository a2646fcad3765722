#include "fracmem/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "fracmem/rng.hpp"

namespace fracmem {

// ---- Faber-Krahn -------------------------------------------------------------

FKReport faber_krahn_experiment(const Mask& domain, const FormSpec& spec,
                                const MembraneConfig& config) {
    SchwarzContext ctx = make_schwarz_context(domain, spec);

    FKReport rep;
    rep.h = domain.grid.h;
    rep.alpha = config.alpha;
    rep.s = spec.s;
    rep.seed = config.seed;

    rep.opt_omega = optimize(ctx.form_domain, config);
    rep.opt_ball = optimize(ctx.form_ball, config);
    rep.c_snapped = rep.opt_omega.c_snapped;
    rep.Lambda_omega = rep.opt_omega.Lambda;
    rep.Lambda_ball = rep.opt_ball.Lambda;
    rep.gap = rep.Lambda_omega - rep.Lambda_ball;

    // replay of the symmetrization chain on the optimal pair (u, D):
    // decreasing-rearranged u against the increasing-rearranged indicator
    const Field& u = rep.opt_omega.u;
    std::vector<double> sorted = u.values;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    std::vector<double> vals(sorted.size());
    for (std::size_t r = 0; r < sorted.size(); ++r) vals[ctx.ball_rank_order[r]] = sorted[r];
    const Field u_star = make_field(ctx.form_ball.domain, std::move(vals));

    const int n = ctx.form_ball.n();
    const int kD = rep.opt_omega.D.count();
    std::vector<int> dstar_cells;
    dstar_cells.reserve(kD);
    for (int r = n - kD; r < n; ++r)
        dstar_cells.push_back(ctx.form_ball.domain.cells[ctx.ball_rank_order[r]]);
    const Mask D_star = mask_from_cells(ctx.form_ball.grid, std::move(dstar_cells));

    rep.chain_sym_rq = rayleigh_quotient(ctx.form_ball, u_star, D_star, config.alpha);
    rep.chain_orig_rq =
        rayleigh_quotient(ctx.form_domain, u, rep.opt_omega.D, config.alpha);
    return rep;
}

// ---- shared lattice machinery for the Lieb diagnostic and the identity check --

namespace {

// dense zero-extended view of a field in a reference lattice frame
struct DenseField {
    Coord lo{0, 0};
    int w0 = 0, w1 = 0;
    std::vector<double> v;

    double at(int y0, int y1) const {
        const int a = y0 - lo[0], b = y1 - lo[1];
        if (a < 0 || a >= w0 || b < 0 || b >= w1) return 0.0;
        return v[static_cast<std::size_t>(a) + static_cast<std::size_t>(w0) * b];
    }
};

DenseField densify(const Field& f, const Coord& frame_shift) {
    Coord lo, hi;
    f.mask.bounding_box(lo, hi);
    DenseField d;
    d.lo = {lo[0] + frame_shift[0], lo[1] + frame_shift[1]};
    d.w0 = hi[0] - lo[0] + 1;
    d.w1 = hi[1] - lo[1] + 1;
    d.v.assign(static_cast<std::size_t>(d.w0) * d.w1, 0.0);
    for (int p = 0; p < f.mask.count(); ++p) {
        const Coord c = f.mask.grid.coord_of(f.mask.cells[p]);
        d.v[static_cast<std::size_t>(c[0] - lo[0]) +
            static_cast<std::size_t>(d.w0) * (c[1] - lo[1])] = f.values[p];
    }
    return d;
}

struct PairTable {
    int r0 = 0, r1 = 0;
    std::vector<double> w;
    double at(int d0, int d1) const {
        return w[static_cast<std::size_t>(d0 + r0) +
                 static_cast<std::size_t>(2 * r0 + 1) * (d1 + r1)];
    }
};

PairTable make_pair_table(int dim, double h, const FormSpec& spec, int r0, int r1) {
    const OffsetWeights weights(dim, spec.s, spec.near_policy);
    const double scale = weights.scale(h);
    PairTable t;
    t.r0 = r0;
    t.r1 = r1;
    t.w.assign(static_cast<std::size_t>(2 * r0 + 1) * (2 * r1 + 1), 0.0);
    for (int d1 = -r1; d1 <= r1; ++d1)
        for (int d0 = -r0; d0 <= r0; ++d0)
            t.w[static_cast<std::size_t>(d0 + r0) +
                static_cast<std::size_t>(2 * r0 + 1) * (d1 + r1)] = scale * weights.unit(d0, d1);
    return t;
}

// Σ_{0<|d|<=r} w(d) Σ_y (u(y+d) - u(y))^2, ordered pairs
double pair_seminorm(const DenseField& u, const PairTable& t) {
    double acc = 0.0;
    for (int d1 = -t.r1; d1 <= t.r1; ++d1) {
        for (int d0 = -t.r0; d0 <= t.r0; ++d0) {
            if (d0 == 0 && d1 == 0) continue;
            const double w = t.at(d0, d1);
            double s = 0.0;
            for (int y1 = u.lo[1] - std::max(d1, 0); y1 <= u.lo[1] + u.w1 - 1 - std::min(d1, 0); ++y1)
                for (int y0 = u.lo[0] - std::max(d0, 0); y0 <= u.lo[0] + u.w0 - 1 - std::min(d0, 0); ++y0) {
                    const double diff = u.at(y0 + d0, y1 + d1) - u.at(y0, y1);
                    s += diff * diff;
                }
            acc += w * s;
        }
    }
    return acc;
}

// autocorrelation hd * Σ_y u(y+d) u(y) per offset
double autocorr(const DenseField& u, double hd, int d0, int d1) {
    double acc = 0.0;
    for (int y1 = u.lo[1]; y1 <= u.lo[1] + u.w1 - 1; ++y1)
        for (int y0 = u.lo[0]; y0 <= u.lo[0] + u.w0 - 1; ++y0)
            acc += u.at(y0, y1) * u.at(y0 + d0, y1 + d1);
    return acc * hd;
}

}  // namespace

// ---- product identity ----------------------------------------------------------

IdentityReport product_identity_check(const Field& u1, const Field& u2, const FormSpec& spec) {
    const Grid& g1 = u1.mask.grid;
    const Coord off21 = lattice_offset(g1, u2.mask.grid);  // validates dim and h
    for (double v : u1.values)
        if (v < 0.0) throw ParameterError("identity check expects nonnegative fields");
    for (double v : u2.values)
        if (v < 0.0) throw ParameterError("identity check expects nonnegative fields");

    const int dim = g1.dim;
    const double hd = g1.cell_volume();

    const DenseField f1 = densify(u1, {0, 0});
    const DenseField f2 = densify(u2, off21);  // frame-1 coordinates

    const int r0 = std::max(f1.w0, f2.w0) + 2;
    const int r1 = dim == 2 ? std::max(f1.w1, f2.w1) + 2 : 0;
    const PairTable table = make_pair_table(dim, g1.h, spec, r0, r1);

    IdentityReport rep;
    rep.offset_cap0 = r0;
    rep.offset_cap1 = r1;
    double n1 = 0.0, n2 = 0.0;
    for (double v : u1.values) n1 += v * v;
    for (double v : u2.values) n2 += v * v;
    rep.norm1_sq = n1 * hd;
    rep.norm2_sq = n2 * hd;
    rep.semi1_pair = pair_seminorm(f1, table);
    rep.semi2_pair = pair_seminorm(f2, table);
    rep.rhs = rep.semi1_pair * rep.norm2_sq + rep.semi2_pair * rep.norm1_sq;

    // shift range: wherever any J term can be nonzero
    const Coord klo{f1.lo[0] - (f2.lo[0] + f2.w0 - 1) - 2 * r0,
                    dim == 2 ? f1.lo[1] - (f2.lo[1] + f2.w1 - 1) - 2 * r1 : 0};
    const Coord khi{f1.lo[0] + f1.w0 - 1 - f2.lo[0] + 2 * r0,
                    dim == 2 ? f1.lo[1] + f1.w1 - 1 - f2.lo[1] + 2 * r1 : 0};
    const int nk0 = khi[0] - klo[0] + 1;
    const int nk1 = khi[1] - klo[1] + 1;
    const long nk = static_cast<long>(nk0) * nk1;
    rep.shift_count = static_cast<int>(nk);

    std::vector<double> J1k(nk, 0.0), J2k(nk, 0.0), J3k(nk, 0.0), Lk(nk, 0.0);
#pragma omp parallel for schedule(dynamic)
    for (long ki = 0; ki < nk; ++ki) {
        const int k0 = klo[0] + static_cast<int>(ki % nk0);
        const int k1 = klo[1] + static_cast<int>(ki / nk0);
        double j1 = 0.0, j2 = 0.0, j3 = 0.0, l = 0.0;
        const int ylo1 = dim == 2 ? f1.lo[1] - r1 : 0;
        const int yhi1 = dim == 2 ? f1.lo[1] + f1.w1 - 1 + r1 : 0;
        for (int d1 = -table.r1; d1 <= table.r1; ++d1) {
            for (int d0 = -table.r0; d0 <= table.r0; ++d0) {
                if (d0 == 0 && d1 == 0) continue;
                const double w = table.at(d0, d1);
                for (int y1 = ylo1; y1 <= yhi1; ++y1) {
                    for (int y0 = f1.lo[0] - r0; y0 <= f1.lo[0] + f1.w0 - 1 + r0; ++y0) {
                        const double a1 = f1.at(y0, y1), b1 = f1.at(y0 + d0, y1 + d1);
                        const double a2 = f2.at(y0 - k0, y1 - k1);
                        const double b2 = f2.at(y0 + d0 - k0, y1 + d1 - k1);
                        if (a1 == 0.0 && b1 == 0.0) continue;
                        const double ta = (b1 - a1) * b2;       // Δu1 · shifted u2
                        const double tb = a1 * (b2 - a2);       // u1 · Δ(shifted u2)
                        j1 += w * ta * ta;
                        j2 += 2.0 * w * ta * tb;
                        j3 += w * tb * tb;
                        const double dx = b1 * b2 - a1 * a2;    // direct product difference
                        l += w * dx * dx;
                    }
                }
            }
        }
        J1k[ki] = j1;
        J2k[ki] = j2;
        J3k[ki] = j3;
        Lk[ki] = l;
    }
    for (long ki = 0; ki < nk; ++ki) {
        rep.J1 += J1k[ki];
        rep.J2 += J2k[ki];
        rep.J3 += J3k[ki];
        rep.lhs += Lk[ki];
    }
    rep.J1 *= hd;
    rep.J2 *= hd;
    rep.J3 *= hd;
    rep.lhs *= hd;
    rep.defect = rep.rhs - rep.lhs;

    // closed form: J2 = -(2/hd) Σ_d w(d) (||u2||^2 - P2(d)) (||u1||^2 - P1(d))
    double j2c = 0.0;
    for (int d1 = -table.r1; d1 <= table.r1; ++d1)
        for (int d0 = -table.r0; d0 <= table.r0; ++d0) {
            if (d0 == 0 && d1 == 0) continue;
            const double w = table.at(d0, d1);
            if (w == 0.0) continue;
            const double p1 = autocorr(f1, hd, d0, d1);
            const double p2 = autocorr(f2, hd, d0, d1);
            j2c += w * (rep.norm2_sq - p2) * (rep.norm1_sq - p1);
        }
    rep.J2_closed = -2.0 * j2c / hd;
    return rep;
}

// ---- Lieb ----------------------------------------------------------------------

namespace {

// values of u_x = u1 * (u2 shifted by k) on the cells of omega_x (in omega_x order)
std::vector<double> product_values(const Mask& omega_x, const Field& u1, const Field& u2,
                                   const Coord& off21, const Coord& k) {
    std::vector<double> vals;
    vals.reserve(omega_x.cells.size());
    const auto pos1 = positions_in(u1.mask, omega_x);
    for (std::size_t i = 0; i < omega_x.cells.size(); ++i) {
        const Coord c = omega_x.grid.coord_of(omega_x.cells[i]);
        const Coord c2{c[0] - k[0] - off21[0],
                       omega_x.grid.dim == 2 ? c[1] - k[1] - off21[1] : 0};
        double v2 = 0.0;
        if (u2.mask.grid.in_range(c2)) {
            const int idx2 = u2.mask.grid.index_of(c2);
            const auto it = std::lower_bound(u2.mask.cells.begin(), u2.mask.cells.end(), idx2);
            if (it != u2.mask.cells.end() && *it == idx2)
                v2 = u2.values[static_cast<std::size_t>(it - u2.mask.cells.begin())];
        }
        vals.push_back(u1.values[pos1[i]] * v2);
    }
    return vals;
}

}  // namespace

LiebReport lieb_experiment(const Mask& omega1, const Mask& omega2, const FormSpec& spec,
                           double alpha1, double alpha2, double c1, double c2,
                           const LiebOptions& opts) {
    if (!(alpha1 > 0.0) || !(alpha2 > 0.0))
        throw ParameterError("alpha1 and alpha2 must be positive");
    const double alpha = opts.alpha > 0.0 ? opts.alpha : 0.5 * (alpha1 + alpha2);
    if (!(alpha < alpha1 + alpha2))
        throw ParameterError("alpha must lie in (0, alpha1+alpha2)");
    if (!(opts.c_fraction > 0.0 && opts.c_fraction < 1.0))
        throw ParameterError("c rule fraction must lie in (0,1)");

    LiebReport rep;
    rep.alpha = alpha;
    rep.alpha1 = alpha1;
    rep.alpha2 = alpha2;

    const FormSpec spec1 = spec;
    AssembleOptions aopts;
    const QuadraticForm form1 = assemble_form(omega1.grid, omega1, spec1, aopts);
    const QuadraticForm form2 = assemble_form(omega2.grid, omega2, spec1, aopts);

    MembraneConfig cfg1;
    cfg1.alpha = alpha1;
    cfg1.c = c1;
    cfg1.starts = opts.starts;
    cfg1.seed = opts.seed;
    cfg1.eig_tol = opts.eig_tol;
    MembraneConfig cfg2 = cfg1;
    cfg2.alpha = alpha2;
    cfg2.c = c2;
    cfg2.seed = opts.seed + 1;
    rep.opt1 = optimize(form1, cfg1);
    rep.opt2 = optimize(form2, cfg2);
    rep.Lambda_sum = rep.opt1.Lambda + rep.opt2.Lambda;

    const Coord off21 = lattice_offset(omega1.grid, omega2.grid);
    const auto overlaps = overlap_volume_map(omega1, omega2);
    if (overlaps.empty()) throw ParameterError("domains admit no overlapping shift");

    std::vector<Coord> shifts;
    if (opts.shift_set.empty()) {
        shifts.reserve(overlaps.size());
        for (const auto& [k, vol] : overlaps) shifts.push_back(k);
    } else {
        for (const Coord& k : opts.shift_set)
            if (overlaps.count(k)) shifts.push_back(k);
        std::sort(shifts.begin(), shifts.end());
        if (shifts.empty()) throw ParameterError("no shift in the set has positive overlap");
    }

    const double hd = omega1.grid.cell_volume();
    rep.shifts.assign(shifts.size(), LiebShiftRecord{});
    std::vector<std::optional<SolverError>> errors(shifts.size());

#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(shifts.size()); ++i) {
        LiebShiftRecord& rec = rep.shifts[static_cast<std::size_t>(i)];
        try {
            const Coord k = shifts[static_cast<std::size_t>(i)];
            rec.k = k;
            const Mask omega_x = intersect_translate(omega1, omega2, k);
            rec.overlap = measure(omega_x);
            const Mask d2x = intersect_translate(rep.opt1.D, rep.opt2.D, k);
            rec.c_x = measure(d2x);

            const QuadraticForm form_x = assemble_form(omega1.grid, omega_x, spec1, aopts);
            rec.lambda1 = dirichlet_eigenvalue(form_x, opts.eig_tol);

            const int n_x = form_x.n();
            const long k_cx = std::llround(rec.c_x / hd);
            MembraneConfig scfg;
            scfg.starts = opts.per_shift_starts;
            scfg.seed = opts.seed + 7919 * static_cast<std::uint64_t>(i + 1);
            scfg.eig_tol = opts.eig_tol;
            scfg.tol = opts.tol;

            if (k_cx <= 0) {
                rec.Lambda_cx = rec.lambda1;  // only the empty support is feasible
            } else if (k_cx >= n_x) {
                rec.Lambda_cx = rec.lambda1 + (alpha1 + alpha2);  // full indicator shift
            } else {
                scfg.alpha = alpha1 + alpha2;
                scfg.c = rec.c_x;
                rec.Lambda_cx = optimize(form_x, scfg).Lambda;
            }

            const long k_c = std::llround(opts.c_fraction * static_cast<double>(k_cx));
            if (k_c >= 1 && k_c < k_cx) {
                rec.c_used = static_cast<double>(k_c) * hd;
                scfg.alpha = alpha;
                scfg.c = rec.c_used;
                scfg.seed += 1;
                rec.Lambda_c = optimize(form_x, scfg).Lambda;
                rec.evaluated_c = true;
                rec.strict = rec.Lambda_c < rep.Lambda_sum;
            } else {
                rec.c_used = std::numeric_limits<double>::quiet_NaN();
                rec.Lambda_c = std::numeric_limits<double>::quiet_NaN();
            }

            // per-shift diagnostics on the product test function
            const auto ux = product_values(omega_x, rep.opt1.u, rep.opt2.u, off21, k);
            double mass = 0.0;
            for (double v : ux) mass += v * v;
            rec.U = mass * hd;
            const Field fx = make_field(omega_x, ux);
            double pot = 0.0;
            const auto dpos = positions_in(omega_x, d2x);
            for (int p : dpos) pot += ux[static_cast<std::size_t>(p)] * ux[static_cast<std::size_t>(p)];
            rec.W = 0.5 * spec1.C_Ns * seminorm_sq(form_x, fx) + (alpha1 + alpha2) * pot * hd;
        } catch (const SolverError& e) {
            errors[static_cast<std::size_t>(i)] =
                SolverError(e.what(), e.best_residual, e.iterations, static_cast<int>(i));
        }
    }
    for (const auto& e : errors)
        if (e) throw *e;

    for (std::size_t i = 0; i < rep.shifts.size(); ++i)
        if (rep.shifts[i].strict) rep.witnesses.push_back(i);

    // shift-summed W - Λ U over ALL positive-overlap shifts, through the exact
    // lattice Fubini identities with the pair-only seminorm (tails only enlarge
    // the domain-side energies, so this bound is conservative)
    {
        const DenseField f1 = densify(rep.opt1.u, {0, 0});
        const DenseField f2 = densify(rep.opt2.u, off21);
        const int r0 = std::max(f1.w0, f2.w0) + 2;
        const int r1 = omega1.grid.dim == 2 ? std::max(f1.w1, f2.w1) + 2 : 0;
        const PairTable table = make_pair_table(omega1.grid.dim, omega1.grid.h, spec1, r0, r1);
        const double semi1 = pair_seminorm(f1, table);
        const double semi2 = pair_seminorm(f2, table);
        double n1 = 0.0, n2 = 0.0;
        for (double v : rep.opt1.u.values) n1 += v * v;
        for (double v : rep.opt2.u.values) n2 += v * v;
        n1 *= hd;
        n2 *= hd;
        double j2 = 0.0;
        for (int d1 = -table.r1; d1 <= table.r1; ++d1)
            for (int d0 = -table.r0; d0 <= table.r0; ++d0) {
                if (d0 == 0 && d1 == 0) continue;
                const double w = table.at(d0, d1);
                if (w == 0.0) continue;
                j2 += w * (n2 - autocorr(f2, hd, d0, d1)) * (n1 - autocorr(f1, hd, d0, d1));
            }
        j2 *= -2.0 / hd;
        const double energy_sum = semi1 * n2 + semi2 * n1 + j2;  // Σ_k [u_x]^2 h^dim

        double q1 = 0.0, q2 = 0.0;
        for (int p : positions_in(form1.domain, rep.opt1.D))
            q1 += rep.opt1.u.values[p] * rep.opt1.u.values[p];
        for (int p : positions_in(form2.domain, rep.opt2.D))
            q2 += rep.opt2.u.values[p] * rep.opt2.u.values[p];
        q1 *= hd;
        q2 *= hd;

        rep.u_sum = n1 * n2;
        rep.wu_sum = 0.5 * spec1.C_Ns * energy_sum + (alpha1 + alpha2) * q1 * q2 -
                     rep.Lambda_sum * rep.u_sum;
        rep.wu_slack = 0.02 * std::abs(rep.Lambda_sum);
        rep.wu_ok = rep.wu_sum <= rep.wu_slack;
    }
    return rep;
}

}  // namespace fracmem
