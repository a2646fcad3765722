#include "fracmem/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fracmem {

namespace {

RearrangementProfile profile_from_sorted(const Field& f, bool decreasing) {
    std::vector<double> vals = f.values;
    std::sort(vals.begin(), vals.end());
    if (decreasing) std::reverse(vals.begin(), vals.end());
    const double hd = f.mask.grid.cell_volume();
    RearrangementProfile prof;
    prof.values = std::move(vals);
    prof.xi.resize(prof.values.size() + 1);
    for (std::size_t i = 0; i < prof.xi.size(); ++i) prof.xi[i] = static_cast<double>(i) * hd;
    return prof;
}

void require_same_mask(const Field& a, const Field& b) {
    const Grid &ga = a.mask.grid, &gb = b.mask.grid;
    const bool same = ga.dim == gb.dim && ga.h == gb.h && ga.shape == gb.shape &&
                      ga.origin == gb.origin && a.mask.cells == b.mask.cells;
    if (!same) throw ParameterError("fields must live on the same mask");
}

}  // namespace

RearrangementProfile decreasing_rearrangement(const Field& f) {
    return profile_from_sorted(f, true);
}

RearrangementProfile increasing_rearrangement(const Field& f) {
    return profile_from_sorted(f, false);
}

std::vector<int> radial_rank_order(const Mask& mask) {
    const Grid& g = mask.grid;
    std::vector<int> order(mask.count());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> r2(mask.count());
    for (int p = 0; p < mask.count(); ++p) {
        const auto x = g.center(g.coord_of(mask.cells[p]));
        r2[p] = x[0] * x[0] + x[1] * x[1];
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (r2[a] != r2[b]) return r2[a] < r2[b];
        return mask.cells[a] < mask.cells[b];
    });
    return order;
}

Mask symmetrize_mask(const Mask& mask) {
    if (mask.empty()) throw ParameterError("cannot symmetrize an empty mask");
    const int k = mask.count();
    const Grid& g = mask.grid;
    int half;
    if (g.dim == 1)
        half = k / 2 + 2;
    else
        half = static_cast<int>(std::ceil(std::sqrt(k / M_PI))) + 3;
    const Grid target = make_grid(g.dim, {-half * g.h, g.dim == 2 ? -half * g.h : 0.0}, g.h,
                                  {2 * half, g.dim == 2 ? 2 * half : 1});

    std::vector<int> all(target.cell_count());
    std::iota(all.begin(), all.end(), 0);
    std::vector<double> r2(all.size());
    for (int idx : all) {
        const auto x = target.center(target.coord_of(idx));
        r2[idx] = x[0] * x[0] + x[1] * x[1];
    }
    std::sort(all.begin(), all.end(), [&](int a, int b) {
        if (r2[a] != r2[b]) return r2[a] < r2[b];
        return a < b;
    });
    all.resize(k);
    return mask_from_cells(target, std::move(all));
}

namespace {

SymmetrizedField schwarz_sorted(const Field& f, bool decreasing) {
    Mask ball = symmetrize_mask(f.mask);
    std::vector<int> order = radial_rank_order(ball);
    std::vector<double> sorted = f.values;
    std::sort(sorted.begin(), sorted.end());
    if (decreasing) std::reverse(sorted.begin(), sorted.end());
    std::vector<double> vals(sorted.size());
    for (std::size_t r = 0; r < order.size(); ++r) vals[order[r]] = sorted[r];
    SymmetrizedField out;
    out.field = make_field(ball, std::move(vals));
    out.rank_order = std::move(order);
    return out;
}

}  // namespace

SymmetrizedField schwarz_decreasing(const Field& f) { return schwarz_sorted(f, true); }
SymmetrizedField schwarz_increasing(const Field& f) { return schwarz_sorted(f, false); }

std::pair<double, double> hardy_littlewood_check(const Field& f, const Field& g) {
    require_same_mask(f, g);
    const double hd = f.mask.grid.cell_volume();
    std::vector<double> fs = f.values, gs = g.values;
    std::sort(fs.begin(), fs.end());                     // f_* : increasing along rank
    std::sort(gs.begin(), gs.end(), std::greater<>());   // g^* : decreasing along rank
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < fs.size(); ++i) lhs += fs[i] * gs[i];
    for (std::size_t i = 0; i < fs.size(); ++i) rhs += f.values[i] * g.values[i];
    return {lhs * hd, rhs * hd};
}

SchwarzContext make_schwarz_context(const Mask& mask, const FormSpec& spec,
                                    const AssembleOptions& opts) {
    if (mask.empty()) throw ParameterError("cannot symmetrize an empty mask");
    const Grid& g = mask.grid;
    Mask ball = symmetrize_mask(mask);

    // recenter the domain cells around their bounding-box center, then place
    // both masks on one origin-centered enclosing grid
    Coord lo, hi;
    mask.bounding_box(lo, hi);
    const Coord cc{(lo[0] + hi[0]) / 2, (lo[1] + hi[1]) / 2};

    int half = 0;
    for (int idx : mask.cells) {
        const Coord c = g.coord_of(idx);
        half = std::max({half, std::abs(c[0] - cc[0]) + 1, std::abs(c[1] - cc[1]) + 1});
    }
    const Grid& bg = ball.grid;
    for (int idx : ball.cells) {
        const Coord c = bg.coord_of(idx);
        half = std::max({half, std::abs(c[0] - bg.shape[0] / 2) + 1,
                         std::abs(c[1] - bg.shape[1] / 2) + 1});
    }
    half += 1;
    const Grid common = make_grid(g.dim, {-half * g.h, g.dim == 2 ? -half * g.h : 0.0}, g.h,
                                  {2 * half, g.dim == 2 ? 2 * half : 1});

    std::vector<int> dom_cells;
    dom_cells.reserve(mask.cells.size());
    for (int idx : mask.cells) {
        const Coord c = g.coord_of(idx);
        dom_cells.push_back(common.index_of(
            {c[0] - cc[0] + half, g.dim == 2 ? c[1] - cc[1] + half : 0}));
    }
    std::vector<int> ball_cells;
    ball_cells.reserve(ball.cells.size());
    for (int idx : ball.cells) {
        const Coord c = bg.coord_of(idx);
        ball_cells.push_back(common.index_of({c[0] - bg.shape[0] / 2 + half,
                                              g.dim == 2 ? c[1] - bg.shape[1] / 2 + half : 0}));
    }

    SchwarzContext ctx;
    Mask dom = mask_from_cells(common, std::move(dom_cells));
    Mask ball_common = mask_from_cells(common, std::move(ball_cells));
    ctx.form_domain = assemble_form(common, dom, spec, opts);
    ctx.form_ball = assemble_form(common, ball_common, spec, opts);
    ctx.ball_rank_order = radial_rank_order(ctx.form_ball.domain);
    return ctx;
}

std::pair<double, double> polya_szego_with(const SchwarzContext& ctx, const Field& f) {
    if (f.values.size() != ctx.form_domain.domain.cells.size())
        throw ParameterError("field does not match the context domain");
    // the recentering map is order-preserving, so values carry over unchanged
    const Field fd = make_field(ctx.form_domain.domain, f.values);
    std::vector<double> sorted = f.values;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    std::vector<double> vals(sorted.size());
    for (std::size_t r = 0; r < sorted.size(); ++r) vals[ctx.ball_rank_order[r]] = sorted[r];
    const Field fstar = make_field(ctx.form_ball.domain, std::move(vals));
    return {seminorm_sq(ctx.form_ball, fstar), seminorm_sq(ctx.form_domain, fd)};
}

std::pair<double, double> polya_szego_check(const Field& f, const FormSpec& spec) {
    const SchwarzContext ctx = make_schwarz_context(f.mask, spec);
    return polya_szego_with(ctx, f);
}

}  // namespace fracmem
