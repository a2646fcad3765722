#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fracmem/gagliardo.hpp"
#include "fracmem/rng.hpp"
#include "fracmem/synth.hpp"

using namespace fracmem;

namespace {

Field random_field(const Mask& mask, std::uint64_t seed) {
    Rng rng = substream(seed, 17);
    std::vector<double> v(mask.cells.size());
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    return make_field(mask, std::move(v));
}

}  // namespace

TEST_CASE("two far-apart cells reproduce the midpoint pair weight") {
    for (int dim : {1, 2}) {
        const double h = 0.01;
        const Grid g = make_grid(dim, {0.0, 0.0}, h, {60, dim == 2 ? 3 : 1});
        const Mask domain = mask_from_cells(g, {0, 50});  // distance 50 h along axis 0
        const FormSpec spec = make_form_spec(dim, 0.5);
        const auto form = assemble_form(g, domain, spec);
        const double d = 50.0 * h;
        const double expected = std::pow(h, 2.0 * dim) * std::pow(d, -dim - 1.0);
        CHECK(form.w(50, 0) == doctest::Approx(expected).epsilon(0.01));
    }
}

TEST_CASE("single-cell domain: pure tail form") {
    const Grid g = make_grid(2, {0.0, 0.0}, 0.1, {9, 9});
    const Mask domain = mask_from_cells(g, {40});  // center cell
    const auto form = assemble_form(g, domain, make_form_spec(2, 0.6));
    REQUIRE(form.tail.size() == 1);
    CHECK(form.tail[0] > 0.0);
    const Field u = make_field(domain, {2.0});
    CHECK(seminorm_sq(form, u) == doctest::Approx(4.0 * form.tail[0]).epsilon(1e-14));
}

TEST_CASE("seminorm basics: zero field, homogeneity, coercivity") {
    const Mask domain = random_connected_mask(2, 3, 20, 40, 0.25);
    const auto form = assemble_form(domain.grid, domain, make_form_spec(2, 0.5));

    Field zero = make_field(domain, std::vector<double>(domain.cells.size(), 0.0));
    CHECK(seminorm_sq(form, zero) == 0.0);

    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        Field u = random_field(domain, seed);
        const double q = seminorm_sq(form, u);
        CHECK(q > 0.0);
        Field cu = u;
        for (auto& x : cu.values) x *= -3.5;
        CHECK(seminorm_sq(form, cu) == doctest::Approx(12.25 * q).epsilon(1e-12));
    }
}

TEST_CASE("constant field on a strict subdomain has positive energy") {
    const Grid g = make_grid(1, {0.0, 0.0}, 0.125, {16, 1});
    const Mask omega = mask_from_shape(g, rect_spec({0.0, 0.0}, {2.0, 0.0}));
    const auto form = assemble_form(g, omega, make_form_spec(1, 0.4));
    Field u = make_field(omega, std::vector<double>(omega.cells.size(), 1.0));
    CHECK(seminorm_sq(form, u) > 0.0);  // tail and boundary pairs survive
}

TEST_CASE("dense and streaming seminorm evaluations agree") {
    for (std::uint64_t seed = 11; seed < 14; ++seed) {
        const int dim = seed % 2 ? 2 : 1;
        const Mask domain = random_connected_mask(dim, seed, 15, 60, 0.2);
        const auto form = assemble_form(domain.grid, domain, make_form_spec(dim, 0.55));
        REQUIRE(form.has_dense);
        const Field u = random_field(domain, seed * 7);
        const double dense = seminorm_sq(form, u);
        const double streaming = seminorm_sq_streaming(form, u);
        CHECK(streaming == doctest::Approx(dense).epsilon(1e-12));
    }
}

TEST_CASE("Rayleigh quotient: indicator shifts and validation") {
    const Mask domain = random_connected_mask(2, 5, 12, 24, 0.25);
    const auto form = assemble_form(domain.grid, domain, make_form_spec(2, 0.5));
    const Field u = random_field(domain, 23);
    const double alpha = 3.75;

    const double base = rayleigh_quotient(form, u, Mask{domain.grid, {}}, alpha);
    const double full = rayleigh_quotient(form, u, domain, alpha);
    CHECK(full - base == doctest::Approx(alpha).epsilon(1e-12));

    // D = empty at alpha 0 equals (C/2) Q / ||u||^2
    double mass = 0.0;
    for (double v : u.values) mass += v * v;
    mass *= form.hd;
    CHECK(base == doctest::Approx(0.5 * form.spec.C_Ns * seminorm_sq(form, u) / mass)
                      .epsilon(1e-13));

    Field zero = make_field(domain, std::vector<double>(domain.cells.size(), 0.0));
    CHECK_THROWS_AS(rayleigh_quotient(form, zero, domain, alpha), ParameterError);

    // D not contained in the domain
    const Mask stray = mask_from_cells(domain.grid, {0});
    if (!domain.contains(0))
        CHECK_THROWS_AS(rayleigh_quotient(form, u, stray, alpha), ParameterError);
}

TEST_CASE("translation invariance of the assembled form") {
    const Grid g = make_grid(2, {0.0, 0.0}, 0.125, {40, 40});
    std::vector<int> cells;
    for (int y = 3; y < 9; ++y)
        for (int x = 4; x < 12; ++x)
            if ((x + y) % 7 != 0) cells.push_back(g.index_of({x, y}));
    const Mask m0 = mask_from_cells(g, cells);
    std::vector<int> shifted;
    for (int idx : cells) {
        const Coord c = g.coord_of(idx);
        shifted.push_back(g.index_of({c[0] + 17, c[1] + 21}));
    }
    const Mask m1 = mask_from_cells(g, shifted);

    const FormSpec spec = make_form_spec(2, 0.5);
    const auto f0 = assemble_form(g, m0, spec);
    const auto f1 = assemble_form(g, m1, spec);
    const Field u0 = random_field(m0, 2);
    const Field u1 = make_field(m1, u0.values);
    CHECK(seminorm_sq(f1, u1) == doctest::Approx(seminorm_sq(f0, u0)).epsilon(1e-12));
    for (std::size_t i = 0; i < f0.tail.size(); ++i)
        CHECK(f1.tail[i] == doctest::Approx(f0.tail[i]).epsilon(1e-12));
}

TEST_CASE("self-convergence of the discrete energy on a smooth bump") {
    // fixed smooth bump on (-1,1), s = 1/2; the dyadic energies must settle
    const double q8 = [&] {
        const Grid g = make_grid(1, {-1.0, 0.0}, 2.0 / 32, {32, 1});
        const Mask m = mask_from_shape(g, rect_spec({-1.0, 0.0}, {1.0, 0.0}));
        return seminorm_sq(assemble_form(g, m, make_form_spec(1, 0.5)),
                           sampled_bump_field(m, {0.0, 0.0}, 0.8));
    }();
    const double q16 = [&] {
        const Grid g = make_grid(1, {-1.0, 0.0}, 2.0 / 64, {64, 1});
        const Mask m = mask_from_shape(g, rect_spec({-1.0, 0.0}, {1.0, 0.0}));
        return seminorm_sq(assemble_form(g, m, make_form_spec(1, 0.5)),
                           sampled_bump_field(m, {0.0, 0.0}, 0.8));
    }();
    const double q32 = [&] {
        const Grid g = make_grid(1, {-1.0, 0.0}, 2.0 / 128, {128, 1});
        const Mask m = mask_from_shape(g, rect_spec({-1.0, 0.0}, {1.0, 0.0}));
        return seminorm_sq(assemble_form(g, m, make_form_spec(1, 0.5)),
                           sampled_bump_field(m, {0.0, 0.0}, 0.8));
    }();
    CHECK(std::abs(q32 - q16) < 0.75 * std::abs(q16 - q8));
    CHECK(std::abs(q16 - q8) < 0.05 * q8);
}

TEST_CASE("form dump lists every pair and tail entry") {
    const Grid g = make_grid(1, {0.0, 0.0}, 0.5, {5, 1});
    const Mask m = mask_from_cells(g, {0, 2, 3});
    const auto form = assemble_form(g, m, make_form_spec(1, 0.3));
    std::ostringstream os;
    dump_form_csv(form, os);
    const std::string text = os.str();
    int rows = 0;
    for (char ch : text) rows += ch == '\n';
    CHECK(rows == 1 + 3 + 3);  // header + C(3,2) pairs + 3 tails
    CHECK(text.find("w,0,2,") != std::string::npos);
    CHECK(text.find("t,3,,") != std::string::npos);
}

TEST_CASE("field living elsewhere is rejected") {
    const Mask a = random_connected_mask(1, 1, 5, 9, 0.5);
    const Mask b = random_connected_mask(1, 2, 5, 9, 0.5);
    const auto form = assemble_form(a.grid, a, make_form_spec(1, 0.5));
    if (a.cells != b.cells) {
        const Field u = random_field(b, 1);
        CHECK_THROWS_AS(seminorm_sq(form, u), ParameterError);
    }
}
