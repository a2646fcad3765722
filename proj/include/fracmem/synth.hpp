#ifndef FRACMEM_SYNTH_HPP
#define FRACMEM_SYNTH_HPP

#include <cstdint>

#include "fracmem/grid.hpp"

namespace fracmem {

// Seeded connected random mask with a cell count in [min_cells, max_cells].
// Grown cell-by-cell from a center seed; deterministic in (dim, seed).
Mask random_connected_mask(int dim, std::uint64_t seed, int min_cells, int max_cells,
                           double h = 0.25);

// Nonnegative smooth field: sum of seeded Gaussian bumps over the mask's box.
Field gaussian_bumps_field(const Mask& mask, std::uint64_t seed, int bumps = 3);

// The classical compactly supported mollifier profile exp(-1/(1-t^2)), t = |x-c|/radius.
double mollifier(double t);

// mollifier bump sampled at cell centers
Field sampled_bump_field(const Mask& mask, std::array<double, 2> center, double radius,
                         double amplitude = 1.0);

}  // namespace fracmem

#endif
