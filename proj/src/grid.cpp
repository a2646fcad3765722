#include "fracmem/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <queue>
#include <utility>

#include "fracmem/rng.hpp"

namespace fracmem {

Grid make_grid(int dim, std::array<double, 2> origin, double h, std::array<int, 2> shape) {
    if (dim != 1 && dim != 2) throw ParameterError("grid dim must be 1 or 2");
    if (!(h > 0.0)) throw ParameterError("grid cell size h must be positive");
    if (shape[0] < 1) throw ParameterError("grid shape must be positive");
    if (dim == 2 && shape[1] < 1) throw ParameterError("grid shape must be positive");
    Grid g;
    g.dim = dim;
    g.origin = origin;
    if (dim == 1) g.origin[1] = 0.0;
    g.h = h;
    g.shape = {shape[0], dim == 2 ? shape[1] : 1};
    return g;
}

bool Mask::contains(int idx) const {
    return std::binary_search(cells.begin(), cells.end(), idx);
}

void Mask::bounding_box(Coord& lo, Coord& hi) const {
    lo = {grid.shape[0], grid.shape[1]};
    hi = {-1, -1};
    for (int idx : cells) {
        const Coord c = grid.coord_of(idx);
        lo[0] = std::min(lo[0], c[0]);
        lo[1] = std::min(lo[1], c[1]);
        hi[0] = std::max(hi[0], c[0]);
        hi[1] = std::max(hi[1], c[1]);
    }
}

Mask mask_from_cells(const Grid& grid, std::vector<int> cells) {
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    for (int idx : cells) {
        if (idx < 0 || idx >= grid.cell_count())
            throw ParameterError("mask cell index out of grid range");
    }
    return Mask{grid, std::move(cells)};
}

double measure(const Mask& mask) {
    return static_cast<double>(mask.cells.size()) * mask.grid.cell_volume();
}

Field make_field(const Mask& mask, std::vector<double> values) {
    if (values.size() != mask.cells.size())
        throw ParameterError("field value count does not match mask cell count");
    return Field{mask, std::move(values)};
}

ShapeSpec ball_spec(std::array<double, 2> center, double radius) {
    ShapeSpec s;
    s.kind = ShapeSpec::Kind::Ball;
    s.center = center;
    s.radius = radius;
    return s;
}

ShapeSpec rect_spec(std::array<double, 2> lo, std::array<double, 2> hi) {
    ShapeSpec s;
    s.kind = ShapeSpec::Kind::Rect;
    s.lo = lo;
    s.hi = hi;
    return s;
}

ShapeSpec union_spec(std::vector<ShapeSpec> parts) {
    ShapeSpec s;
    s.kind = ShapeSpec::Kind::Union;
    s.children = std::move(parts);
    return s;
}

ShapeSpec difference_spec(ShapeSpec a, ShapeSpec b) {
    ShapeSpec s;
    s.kind = ShapeSpec::Kind::Difference;
    s.children.push_back(std::move(a));
    s.children.push_back(std::move(b));
    return s;
}

ShapeSpec blob_spec(std::uint64_t seed, double fill, int smooth) {
    ShapeSpec s;
    s.kind = ShapeSpec::Kind::Blob;
    s.seed = seed;
    s.fill = fill;
    s.smooth = smooth;
    return s;
}

namespace {

std::vector<int> predicate_cells(const Grid& grid, const ShapeSpec& spec) {
    std::vector<int> out;
    for (int idx = 0; idx < grid.cell_count(); ++idx) {
        const auto x = grid.center(grid.coord_of(idx));
        bool inside = false;
        if (spec.kind == ShapeSpec::Kind::Ball) {
            const double dx = x[0] - spec.center[0];
            const double dy = grid.dim == 2 ? x[1] - spec.center[1] : 0.0;
            inside = dx * dx + dy * dy <= spec.radius * spec.radius;
        } else {  // Rect
            inside = x[0] >= spec.lo[0] && x[0] <= spec.hi[0];
            if (grid.dim == 2) inside = inside && x[1] >= spec.lo[1] && x[1] <= spec.hi[1];
        }
        if (inside) out.push_back(idx);
    }
    return out;
}

// keep only the largest 2*dim-connected component (ties: smallest seed index)
std::vector<int> largest_component(const Grid& grid, const std::vector<int>& cells) {
    std::vector<std::uint8_t> in(grid.cell_count(), 0);
    for (int idx : cells) in[idx] = 1;
    std::vector<int> label(grid.cell_count(), -1);
    std::vector<int> best;
    for (int start : cells) {
        if (label[start] >= 0) continue;
        std::vector<int> comp;
        std::queue<int> q;
        q.push(start);
        label[start] = start;
        while (!q.empty()) {
            const int cur = q.front();
            q.pop();
            comp.push_back(cur);
            const Coord c = grid.coord_of(cur);
            const Coord nbrs[4] = {{c[0] - 1, c[1]}, {c[0] + 1, c[1]},
                                   {c[0], c[1] - 1}, {c[0], c[1] + 1}};
            const int n_nbrs = grid.dim == 1 ? 2 : 4;
            for (int k = 0; k < n_nbrs; ++k) {
                if (!grid.in_range(nbrs[k])) continue;
                const int nidx = grid.index_of(nbrs[k]);
                if (in[nidx] && label[nidx] < 0) {
                    label[nidx] = start;
                    q.push(nidx);
                }
            }
        }
        if (comp.size() > best.size()) best = std::move(comp);
    }
    return best;
}

std::vector<int> blob_cells(const Grid& grid, const ShapeSpec& spec) {
    const int n = grid.cell_count();
    std::vector<double> noise(n);
    for (int idx = 0; idx < n; ++idx) {
        noise[idx] = substream(spec.seed, static_cast<std::uint64_t>(idx)).uniform();
    }
    // separable box blur, radius 2, clamped at the boundary
    const int radius = 2;
    std::vector<double> tmp(n);
    for (int pass = 0; pass < spec.smooth; ++pass) {
        for (int axis = 0; axis < grid.dim; ++axis) {
            for (int idx = 0; idx < n; ++idx) {
                const Coord c = grid.coord_of(idx);
                double acc = 0.0;
                int cnt = 0;
                for (int o = -radius; o <= radius; ++o) {
                    Coord nb = c;
                    nb[axis] += o;
                    if (!grid.in_range(nb)) continue;
                    acc += noise[grid.index_of(nb)];
                    ++cnt;
                }
                tmp[idx] = acc / cnt;
            }
            std::swap(noise, tmp);
        }
    }
    std::vector<double> sorted(noise);
    std::sort(sorted.begin(), sorted.end());
    const double fill = std::clamp(spec.fill, 1.0 / n, 1.0);
    const int cut = std::clamp(static_cast<int>(std::floor((1.0 - fill) * n)), 0, n - 1);
    const double threshold = sorted[cut];
    std::vector<int> cells;
    for (int idx = 0; idx < n; ++idx)
        if (noise[idx] >= threshold) cells.push_back(idx);
    return largest_component(grid, cells);
}

}  // namespace

Mask mask_from_shape(const Grid& grid, const ShapeSpec& spec) {
    std::vector<int> cells;
    switch (spec.kind) {
        case ShapeSpec::Kind::Ball:
            if (!(spec.radius > 0.0)) throw ParameterError("ball radius must be positive");
            cells = predicate_cells(grid, spec);
            break;
        case ShapeSpec::Kind::Rect:
            cells = predicate_cells(grid, spec);
            break;
        case ShapeSpec::Kind::Union: {
            if (spec.children.empty()) throw ParameterError("union needs at least one child");
            for (const auto& child : spec.children) {
                auto part = mask_from_shape(grid, child).cells;
                cells.insert(cells.end(), part.begin(), part.end());
            }
            break;
        }
        case ShapeSpec::Kind::Difference: {
            if (spec.children.size() != 2) throw ParameterError("difference needs two children");
            const auto a = mask_from_shape(grid, spec.children[0]);
            std::vector<int> b;
            try {
                b = mask_from_shape(grid, spec.children[1]).cells;
            } catch (const ParameterError&) {
                b.clear();  // empty subtrahend is fine
            }
            std::set_difference(a.cells.begin(), a.cells.end(), b.begin(), b.end(),
                                std::back_inserter(cells));
            break;
        }
        case ShapeSpec::Kind::Blob:
            if (!(spec.fill > 0.0 && spec.fill <= 1.0))
                throw ParameterError("blob fill fraction must be in (0,1]");
            cells = blob_cells(grid, spec);
            break;
    }
    if (cells.empty()) throw ParameterError("shape produced an empty mask");
    return mask_from_cells(grid, std::move(cells));
}

Coord lattice_offset(const Grid& a, const Grid& b) {
    if (a.dim != b.dim) throw ParameterError("grids differ in dimension");
    if (std::abs(a.h - b.h) > 1e-12 * a.h) throw ParameterError("grids differ in cell size");
    Coord off{0, 0};
    for (int axis = 0; axis < a.dim; ++axis) {
        const double raw = (b.origin[axis] - a.origin[axis]) / a.h;
        const double rounded = std::round(raw);
        if (std::abs(raw - rounded) > 1e-9)
            throw ParameterError("grid origins are not aligned to a common lattice");
        off[axis] = static_cast<int>(rounded);
    }
    return off;
}

Mask intersect_translate(const Mask& m1, const Mask& m2, const Coord& shift) {
    const Coord off = lattice_offset(m1.grid, m2.grid);
    std::vector<int> cells;
    for (int idx2 : m2.cells) {
        Coord c = m2.grid.coord_of(idx2);
        c[0] += off[0] + shift[0];
        c[1] += off[1] + (m1.grid.dim == 2 ? shift[1] : 0);
        if (!m1.grid.in_range(c)) continue;
        const int idx1 = m1.grid.index_of(c);
        if (m1.contains(idx1)) cells.push_back(idx1);
    }
    return mask_from_cells(m1.grid, std::move(cells));
}

std::map<Coord, double> overlap_volume_map(const Mask& m1, const Mask& m2) {
    const Coord off = lattice_offset(m1.grid, m2.grid);
    std::map<Coord, double> out;
    if (m1.empty() || m2.empty()) return out;

    std::vector<std::uint8_t> in1(m1.grid.cell_count(), 0);
    for (int idx : m1.cells) in1[idx] = 1;

    Coord lo1, hi1, lo2, hi2;
    m1.bounding_box(lo1, hi1);
    m2.bounding_box(lo2, hi2);
    // frame-1 coordinates of mask-2 cells are coord2 + off
    const double vol = m1.grid.cell_volume();
    const int dim = m1.grid.dim;
    Coord klo{lo1[0] - (hi2[0] + off[0]), lo1[1] - (hi2[1] + off[1])};
    Coord khi{hi1[0] - (lo2[0] + off[0]), hi1[1] - (lo2[1] + off[1])};
    if (dim == 1) klo[1] = khi[1] = 0;

    for (int k1 = klo[1]; k1 <= khi[1]; ++k1) {
        for (int k0 = klo[0]; k0 <= khi[0]; ++k0) {
            long count = 0;
            for (int idx2 : m2.cells) {
                Coord c = m2.grid.coord_of(idx2);
                c[0] += off[0] + k0;
                c[1] += off[1] + k1;
                if (m1.grid.in_range(c) && in1[m1.grid.index_of(c)]) ++count;
            }
            if (count > 0) out[{k0, k1}] = static_cast<double>(count) * vol;
        }
    }
    return out;
}

}  // namespace fracmem
