#ifndef FRACMEM_GRID_HPP
#define FRACMEM_GRID_HPP

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "fracmem/errors.hpp"

namespace fracmem {

using Coord = std::array<int, 2>;  // lattice coordinates; [1] unused in 1-D

// Uniform Cartesian lattice, dimension 1 or 2. Cell (i0,i1) occupies
// origin + [i*h, (i+1)*h) per axis; its center sits at origin + (i+1/2)h.
struct Grid {
    int dim = 1;
    std::array<double, 2> origin{0.0, 0.0};
    double h = 1.0;
    std::array<int, 2> shape{1, 1};  // shape[1] == 1 in 1-D

    int cell_count() const { return shape[0] * shape[1]; }
    double cell_volume() const { return dim == 1 ? h : h * h; }

    int index_of(const Coord& c) const { return c[0] + shape[0] * c[1]; }
    Coord coord_of(int idx) const { return {idx % shape[0], idx / shape[0]}; }

    std::array<double, 2> center(const Coord& c) const {
        return {origin[0] + (c[0] + 0.5) * h,
                dim == 2 ? origin[1] + (c[1] + 0.5) * h : 0.0};
    }
    bool in_range(const Coord& c) const {
        return c[0] >= 0 && c[0] < shape[0] && c[1] >= 0 && c[1] < shape[1];
    }
};

Grid make_grid(int dim, std::array<double, 2> origin, double h, std::array<int, 2> shape);

// Subset of grid cells; the discrete stand-in for a measurable set.
// `cells` holds sorted linear indices, so iteration order is canonical.
struct Mask {
    Grid grid;
    std::vector<int> cells;

    int count() const { return static_cast<int>(cells.size()); }
    bool empty() const { return cells.empty(); }
    bool contains(int idx) const;
    // bounding box in lattice coordinates, inclusive; requires nonempty
    void bounding_box(Coord& lo, Coord& hi) const;
};

Mask mask_from_cells(const Grid& grid, std::vector<int> cells);

double measure(const Mask& mask);

// Scalar values on the active cells of a mask, in mask.cells order;
// implicitly extended by zero outside the mask.
struct Field {
    Mask mask;
    std::vector<double> values;
};

Field make_field(const Mask& mask, std::vector<double> values);

// ---- shape specifications --------------------------------------------------

struct ShapeSpec {
    enum class Kind { Ball, Rect, Union, Difference, Blob };
    Kind kind = Kind::Ball;

    // ball
    std::array<double, 2> center{0.0, 0.0};
    double radius = 0.0;
    // rect
    std::array<double, 2> lo{0.0, 0.0};
    std::array<double, 2> hi{0.0, 0.0};
    // union (n-ary) / difference (children[0] minus children[1])
    std::vector<ShapeSpec> children;
    // blob: thresholded smoothed seeded noise, largest connected component
    std::uint64_t seed = 0;
    double fill = 0.5;   // target fraction of grid cells before the component cut
    int smooth = 2;      // box-blur passes
};

ShapeSpec ball_spec(std::array<double, 2> center, double radius);
ShapeSpec rect_spec(std::array<double, 2> lo, std::array<double, 2> hi);
ShapeSpec union_spec(std::vector<ShapeSpec> parts);
ShapeSpec difference_spec(ShapeSpec a, ShapeSpec b);
ShapeSpec blob_spec(std::uint64_t seed, double fill = 0.5, int smooth = 2);

Mask mask_from_shape(const Grid& grid, const ShapeSpec& spec);

// ---- translations and overlaps ----------------------------------------------

// Lattice offset of grid b relative to grid a, i.e. the integer k with
// origin_b = origin_a + k*h. Throws ParameterError when the grids are not
// lattice-compatible (different dim or h, or a non-integer origin offset).
Coord lattice_offset(const Grid& a, const Grid& b);

// Mask of m1 ∩ (m2 translated by shift cells), expressed on m1's grid.
Mask intersect_translate(const Mask& m1, const Mask& m2, const Coord& shift);

// All lattice shifts with nonzero overlap, mapped to the overlap measure.
std::map<Coord, double> overlap_volume_map(const Mask& m1, const Mask& m2);

}  // namespace fracmem

#endif
