#include "fracmem/gagliardo.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace fracmem {

namespace {

void require_same_mask(const QuadraticForm& form, const Field& field) {
    const Grid& a = form.grid;
    const Grid& b = field.mask.grid;
    const bool same_grid = a.dim == b.dim && a.h == b.h && a.shape == b.shape &&
                           a.origin[0] == b.origin[0] && a.origin[1] == b.origin[1];
    if (!same_grid || field.mask.cells != form.domain.cells)
        throw ParameterError("field does not live on the form's domain");
}

}  // namespace

namespace detail {

std::vector<double> assemble_tail(const QuadraticForm& form, bool parallel) {
    const Grid& grid = form.grid;
    const Mask& domain = form.domain;
    const int dim = grid.dim;
    const double h = grid.h;
    const double s = form.spec.s;
    const int n = domain.count();

    const int bw0 = form.box_hi[0] - form.box_lo[0] + 1;
    const int bw1 = form.box_hi[1] - form.box_lo[1] + 1;
    std::vector<std::uint8_t> active(static_cast<std::size_t>(bw0) * bw1, 0);
    for (int idx : domain.cells) {
        const Coord c = grid.coord_of(idx);
        active[static_cast<std::size_t>(c[0] - form.box_lo[0]) +
               static_cast<std::size_t>(bw0) * (c[1] - form.box_lo[1])] = 1;
    }

    // physical box faces (outer boundary of the enlarged box)
    const double face_lo0 = grid.origin[0] + form.box_lo[0] * h;
    const double face_hi0 = grid.origin[0] + (form.box_hi[0] + 1) * h;
    const double face_lo1 = grid.origin[1] + form.box_lo[1] * h;
    const double face_hi1 = grid.origin[1] + (form.box_hi[1] + 1) * h;

    std::vector<double> t(n, 0.0);
#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < n; ++i) {
        const Coord ci = grid.coord_of(domain.cells[i]);
        const auto xi = grid.center(ci);
        double R;
        if (form.spec.tail_policy == TailRadiusPolicy::Inscribed) {
            R = std::min(xi[0] - face_lo0, face_hi0 - xi[0]);
            if (dim == 2) R = std::min({R, xi[1] - face_lo1, face_hi1 - xi[1]});
        } else {  // Circumscribed: farthest box corner
            const double r0 = std::max(xi[0] - face_lo0, face_hi0 - xi[0]);
            const double r1 = dim == 2 ? std::max(xi[1] - face_lo1, face_hi1 - xi[1]) : 0.0;
            R = std::sqrt(r0 * r0 + r1 * r1);
        }
        const double R2_cells = (R / h) * (R / h);

        double acc = 0.0;
        for (int c1 = form.box_lo[1]; c1 <= form.box_hi[1]; ++c1) {
            const double d1 = c1 - ci[1];
            for (int c0 = form.box_lo[0]; c0 <= form.box_hi[0]; ++c0) {
                const double d0 = c0 - ci[0];
                if (d0 == 0.0 && d1 == 0.0) continue;
                const bool is_active =
                    active[static_cast<std::size_t>(c0 - form.box_lo[0]) +
                           static_cast<std::size_t>(bw0) * (c1 - form.box_lo[1])] != 0;
                const bool inside = d0 * d0 + d1 * d1 <= R2_cells;
                if (is_active == inside) continue;  // pair term or pure radial region
                const double w = form.w(static_cast<int>(d0), static_cast<int>(d1));
                if (inside) acc += w;   // complement cell inside the cut: explicit
                else        acc -= w;   // active cell beyond the cut: repaid to the tail
            }
        }
        acc += form.hd * radial_tail_mass(dim, s, R);
        t[i] = 2.0 * acc;
    }
    return t;
}

}  // namespace detail

QuadraticForm assemble_form(const Grid& grid, const Mask& domain, const FormSpec& spec,
                            const AssembleOptions& opts) {
    if (domain.empty()) throw ParameterError("form domain must be nonempty");
    QuadraticForm form;
    form.grid = grid;
    form.domain = domain;
    form.spec = spec;
    form.hd = grid.cell_volume();

    Coord lo, hi;
    domain.bounding_box(lo, hi);
    const double ext0 = (hi[0] - lo[0] + 1) * grid.h;
    const double ext1 = grid.dim == 2 ? (hi[1] - lo[1] + 1) * grid.h : 0.0;
    const double diam = std::sqrt(ext0 * ext0 + ext1 * ext1);
    const int margin = static_cast<int>(std::ceil(std::max(4.0 * grid.h, 0.5 * diam) / grid.h));
    form.box_lo = {lo[0] - margin, grid.dim == 2 ? lo[1] - margin : 0};
    form.box_hi = {hi[0] + margin, grid.dim == 2 ? hi[1] + margin : 0};

    form.span0 = form.box_hi[0] - form.box_lo[0];
    form.span1 = form.box_hi[1] - form.box_lo[1];

    const OffsetWeights weights(grid.dim, spec.s, spec.near_policy);
    const double scale = weights.scale(grid.h);
    const int n0 = 2 * form.span0 + 1;
    const int n1 = 2 * form.span1 + 1;
    form.wtab.assign(static_cast<std::size_t>(n0) * n1, 0.0);
#pragma omp parallel for schedule(static) if (opts.parallel)
    for (int d1 = -form.span1; d1 <= form.span1; ++d1)
        for (int d0 = -form.span0; d0 <= form.span0; ++d0)
            form.wtab[static_cast<std::size_t>(d0 + form.span0) +
                      static_cast<std::size_t>(n0) * (d1 + form.span1)] =
                scale * weights.unit(d0, d1);

    form.tail = detail::assemble_tail(form, opts.parallel);

    const int n = form.n();
    if (opts.build_dense && n <= opts.dense_cap) {
        form.A.resize(n, n);
        std::vector<Coord> coords(n);
        for (int i = 0; i < n; ++i) coords[i] = grid.coord_of(domain.cells[i]);
#pragma omp parallel for schedule(static) if (opts.parallel)
        for (int i = 0; i < n; ++i) {
            double rowsum = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                const double w =
                    form.w(coords[j][0] - coords[i][0], coords[j][1] - coords[i][1]);
                form.A(j, i) = -2.0 * w;
                rowsum += 2.0 * w;
            }
            form.A(i, i) = form.tail[i] + rowsum;
        }
        form.has_dense = true;
    }
    return form;
}

double seminorm_sq_streaming(const QuadraticForm& form, const Field& field, bool parallel) {
    require_same_mask(form, field);
    const Grid& grid = form.grid;
    Coord lo, hi;
    form.domain.bounding_box(lo, hi);
    const int bw0 = hi[0] - lo[0] + 1;
    const int bw1 = hi[1] - lo[1] + 1;
    std::vector<double> val(static_cast<std::size_t>(bw0) * bw1, 0.0);
    std::vector<std::uint8_t> act(val.size(), 0);
    for (int p = 0; p < form.n(); ++p) {
        const Coord c = grid.coord_of(form.domain.cells[p]);
        const std::size_t q = static_cast<std::size_t>(c[0] - lo[0]) +
                              static_cast<std::size_t>(bw0) * (c[1] - lo[1]);
        val[q] = field.values[p];
        act[q] = 1;
    }

    const int e0 = bw0 - 1, e1 = bw1 - 1;
    const int nd1 = 2 * e1 + 1;
    std::vector<double> per_offset(static_cast<std::size_t>(2 * e0 + 1) * nd1, 0.0);
#pragma omp parallel for schedule(static) if (parallel)
    for (int d1 = -e1; d1 <= e1; ++d1) {
        for (int d0 = -e0; d0 <= e0; ++d0) {
            if (d0 == 0 && d1 == 0) continue;
            const double w = form.w(d0, d1);
            double acc = 0.0;
            const int y1lo = std::max(0, -d1), y1hi = std::min(bw1 - 1, bw1 - 1 - d1);
            const int y0lo = std::max(0, -d0), y0hi = std::min(bw0 - 1, bw0 - 1 - d0);
            for (int y1 = y1lo; y1 <= y1hi; ++y1) {
                const std::size_t row = static_cast<std::size_t>(bw0) * y1;
                const std::size_t row2 = static_cast<std::size_t>(bw0) * (y1 + d1) + d0;
                for (int y0 = y0lo; y0 <= y0hi; ++y0) {
                    if (!(act[row + y0] && act[row2 + y0])) continue;
                    const double diff = val[row2 + y0] - val[row + y0];
                    acc += diff * diff;
                }
            }
            per_offset[static_cast<std::size_t>(d0 + e0) +
                       static_cast<std::size_t>(2 * e0 + 1) * (d1 + e1)] = w * acc;
        }
    }
    double q = 0.0;
    for (double v : per_offset) q += v;  // fixed order, independent of thread count
    for (int p = 0; p < form.n(); ++p) q += form.tail[p] * field.values[p] * field.values[p];
    return q;
}

double seminorm_sq(const QuadraticForm& form, const Field& field) {
    if (!form.has_dense) return seminorm_sq_streaming(form, field);
    require_same_mask(form, field);
    Eigen::Map<const Eigen::VectorXd> u(field.values.data(), form.n());
    return u.dot(form.A * u);
}

std::vector<int> positions_in(const Mask& domain, const Mask& subset) {
    std::vector<int> pos;
    pos.reserve(subset.cells.size());
    std::size_t p = 0;
    for (int cell : subset.cells) {
        while (p < domain.cells.size() && domain.cells[p] < cell) ++p;
        if (p == domain.cells.size() || domain.cells[p] != cell)
            throw ParameterError("subset mask is not contained in the domain");
        pos.push_back(static_cast<int>(p));
    }
    return pos;
}

double rayleigh_quotient(const QuadraticForm& form, const Field& field, const Mask& D,
                         double alpha) {
    require_same_mask(form, field);
    if (alpha < 0.0) throw ParameterError("alpha must be nonnegative");
    const auto pos = positions_in(form.domain, D);
    double mass = 0.0;
    for (double v : field.values) mass += v * v;
    if (mass == 0.0) throw ParameterError("Rayleigh quotient of the zero field");
    double mass_D = 0.0;
    for (int p : pos) mass_D += field.values[p] * field.values[p];
    const double q = seminorm_sq(form, field);
    return (0.5 * form.spec.C_Ns * q + alpha * form.hd * mass_D) / (form.hd * mass);
}

void dump_form_csv(const QuadraticForm& form, std::ostream& os) {
    const int n = form.n();
    std::vector<Coord> coords(n);
    for (int i = 0; i < n; ++i) coords[i] = form.grid.coord_of(form.domain.cells[i]);
    os << "kind,i,j,value\n";
    char buf[64];
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double w = form.w(coords[j][0] - coords[i][0], coords[j][1] - coords[i][1]);
            std::snprintf(buf, sizeof buf, "%.17g", w);
            os << "w," << form.domain.cells[i] << ',' << form.domain.cells[j] << ',' << buf << '\n';
        }
    }
    for (int i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", form.tail[i]);
        os << "t," << form.domain.cells[i] << ",," << buf << '\n';
    }
}

}  // namespace fracmem
