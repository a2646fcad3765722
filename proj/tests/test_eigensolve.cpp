#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "fracmem/eigensolve.hpp"
#include "fracmem/rng.hpp"
#include "fracmem/synth.hpp"

using namespace fracmem;

namespace {

// oracle-side operator assembly straight from the form's public surface
Eigen::MatrixXd dense_operator(const QuadraticForm& form, const Mask& D, double alpha) {
    const int n = form.n();
    std::vector<Coord> coords(n);
    for (int i = 0; i < n; ++i) coords[i] = form.grid.coord_of(form.domain.cells[i]);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
    const double scale = 0.5 * form.spec.C_Ns / form.hd;
    for (int i = 0; i < n; ++i) {
        double rowsum = 0.0;
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double w = form.w(coords[j][0] - coords[i][0], coords[j][1] - coords[i][1]);
            H(i, j) = -2.0 * w * scale;
            rowsum += 2.0 * w;
        }
        H(i, i) = (form.tail[i] + rowsum) * scale;
    }
    for (int p : positions_in(form.domain, D)) H(p, p) += alpha;
    return H;
}

Mask random_sub_mask(const Mask& domain, std::uint64_t seed, int k) {
    Rng rng = substream(seed, 99);
    std::vector<int> cells;
    for (int idx : domain.cells)
        if (rng.uniform() < static_cast<double>(k) / domain.count()) cells.push_back(idx);
    if (cells.empty()) cells.push_back(domain.cells[0]);
    return mask_from_cells(domain.grid, std::move(cells));
}

}  // namespace

TEST_CASE("single-cell domain has the closed-form eigenvalue") {
    const Grid g = make_grid(1, {0.0, 0.0}, 0.2, {7, 1});
    const Mask domain = mask_from_cells(g, {3});
    const auto form = assemble_form(g, domain, make_form_spec(1, 0.5));
    const double alpha = 2.5;
    const auto pair = smallest_eigenpair(form, domain, alpha, 1e-12);
    const double expected = 0.5 * form.spec.C_Ns * form.tail[0] / form.hd + alpha;
    CHECK(pair.lambda == doctest::Approx(expected).epsilon(1e-13));
    CHECK(pair.vector.values[0] == doctest::Approx(1.0 / std::sqrt(form.hd)).epsilon(1e-12));
}

TEST_CASE("alpha with D = Omega shifts the eigenvalue exactly") {
    for (std::uint64_t seed : {1ULL, 2ULL}) {
        const Mask domain = random_connected_mask(2, seed, 8, 14, 0.25);
        const auto form = assemble_form(domain.grid, domain, make_form_spec(2, 0.5));
        const double alpha = 4.25;
        const double l0 = smallest_eigenpair(form, Mask{domain.grid, {}}, 0.0, 1e-12).lambda;
        const double l1 = smallest_eigenpair(form, domain, alpha, 1e-12).lambda;
        CHECK(l1 - l0 == doctest::Approx(alpha).epsilon(1e-11));
    }
}

TEST_CASE("iterative path matches a dense full eigendecomposition") {
    for (std::uint64_t seed : {10ULL, 11ULL, 12ULL}) {
        const int dim = seed % 2 ? 1 : 2;
        const Mask domain = random_connected_mask(dim, seed, 90, 150, 0.1);
        const auto form = assemble_form(domain.grid, domain, make_form_spec(dim, 0.5));
        const Mask D = random_sub_mask(domain, seed, domain.count() / 3);
        const double alpha = 6.0;

        const auto pair = smallest_eigenpair(form, D, alpha, 1e-11);
        CHECK(pair.iterations > 1);  // genuinely iterative at this size

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_operator(form, D, alpha));
        CHECK(pair.lambda == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-8));
    }
}

TEST_CASE("reported eigenpair is self-consistent") {
    const Mask domain = random_connected_mask(2, 21, 60, 90, 0.125);
    const auto form = assemble_form(domain.grid, domain, make_form_spec(2, 0.6));
    const Mask D = random_sub_mask(domain, 4, domain.count() / 4);
    const double tol = 1e-11;
    const auto pair = smallest_eigenpair(form, D, 2.0, tol);

    // residual contract
    CHECK(pair.residual <= tol * std::max(std::abs(pair.lambda), 1e-300) * (1.0 + 1e-9));

    // lambda equals the Rayleigh quotient of its vector
    CHECK(rayleigh_quotient(form, pair.vector, D, 2.0) ==
          doctest::Approx(pair.lambda).epsilon(10 * tol));

    // L2 normalization under cell quadrature
    double mass = 0.0;
    for (double v : pair.vector.values) mass += v * v;
    CHECK(mass * form.hd == doctest::Approx(1.0).epsilon(1e-12));

    // Perron: ground state nonnegative after sign normalization
    double mn = 1e300;
    for (double v : pair.vector.values) mn = std::min(mn, v);
    CHECK(mn >= -1e-10);
}

TEST_CASE("monotonicity in alpha and the indicator sandwich") {
    const Mask domain = random_connected_mask(1, 31, 40, 70, 0.05);
    const auto form = assemble_form(domain.grid, domain, make_form_spec(1, 0.7));
    const Mask D = random_sub_mask(domain, 8, domain.count() / 2);

    const double l1 = smallest_eigenpair(form, D, 1.0, 1e-11).lambda;
    const double l2 = smallest_eigenpair(form, D, 3.0, 1e-11).lambda;
    CHECK(l1 <= l2 + 1e-12);

    const double lam0 = dirichlet_eigenvalue(form, 1e-11);
    const double alpha = 2.0;
    const double lam = smallest_eigenpair(form, D, alpha, 1e-11).lambda;
    CHECK(lam0 <= lam + 1e-10);
    CHECK(lam <= lam0 + alpha + 1e-10);
}

TEST_CASE("dirichlet_eigenvalue is the alpha-zero path, bit for bit") {
    const Mask domain = random_connected_mask(2, 41, 30, 50, 0.2);
    const auto form = assemble_form(domain.grid, domain, make_form_spec(2, 0.5));
    CHECK(dirichlet_eigenvalue(form, 1e-10) ==
          smallest_eigenpair(form, Mask{domain.grid, {}}, 0.0, 1e-10).lambda);
}

TEST_CASE("domain monotonicity of the Dirichlet eigenvalue on nested rectangles") {
    const Grid g = make_grid(2, {0.0, 0.0}, 0.125, {24, 24});
    const Mask big = mask_from_shape(g, rect_spec({0.0, 0.0}, {3.0, 2.0}));
    const Mask small = mask_from_shape(g, rect_spec({0.5, 0.25}, {2.25, 1.5}));
    const FormSpec spec = make_form_spec(2, 0.5);
    const double lam_big = dirichlet_eigenvalue(assemble_form(g, big, spec), 1e-10);
    const double lam_small = dirichlet_eigenvalue(assemble_form(g, small, spec), 1e-10);
    CHECK(lam_small >= lam_big - 1e-10);
}

TEST_CASE("warm starts reproduce the cold answer") {
    const Mask domain = random_connected_mask(1, 77, 80, 120, 0.05);
    const auto form = assemble_form(domain.grid, domain, make_form_spec(1, 0.5));
    const Mask D = random_sub_mask(domain, 5, domain.count() / 3);
    const auto cold = smallest_eigenpair(form, D, 1.5, 1e-11);
    EigOptions opts;
    opts.tol = 1e-11;
    opts.x0 = &cold.vector.values;
    const auto warm = smallest_eigenpair(form, D, 1.5, opts);
    CHECK(warm.lambda == doctest::Approx(cold.lambda).epsilon(1e-10));
    CHECK(warm.iterations <= cold.iterations);
}

TEST_CASE("unreachable tolerance raises a solver error carrying the best residual") {
    const Mask domain = random_connected_mask(1, 13, 60, 90, 0.05);
    const auto form = assemble_form(domain.grid, domain, make_form_spec(1, 0.5));
    EigOptions opts;
    opts.tol = 1e-30;
    opts.max_outer = 5;
    bool thrown = false;
    try {
        smallest_eigenpair(form, Mask{domain.grid, {}}, 0.0, opts);
    } catch (const SolverError& e) {
        thrown = true;
        CHECK(e.best_residual > 0.0);
        CHECK(e.iterations == 5);
    }
    CHECK(thrown);
}

TEST_CASE("invalid inputs are parameter errors") {
    const Mask domain = random_connected_mask(1, 14, 5, 9, 0.5);
    const auto form = assemble_form(domain.grid, domain, make_form_spec(1, 0.5));
    CHECK_THROWS_AS(smallest_eigenpair(form, domain, -1.0, 1e-10), ParameterError);
    CHECK_THROWS_AS(smallest_eigenpair(form, domain, 1.0, -1e-10), ParameterError);
}
