#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sfv/grid.hpp"

using namespace sfv;

namespace {

GridPtr make_grid(int nx, int ny, double lx, double ly) {
    return std::make_shared<StructuredGrid>(nx, ny, lx, ly);
}

ScalarField random_field(GridPtr grid, std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    ScalarField f(grid);
    for (auto& v : f.values()) v = dist(rng);
    return f;
}

}  // namespace

TEST_CASE("grid geometry and invariants") {
    auto g = make_grid(8, 4, 2.0 * M_PI, 2.0 * M_PI);
    CHECK(g->hx() == doctest::Approx(2.0 * M_PI / 8).epsilon(1e-14));
    CHECK(g->hy() == doctest::Approx(2.0 * M_PI / 4).epsilon(1e-14));
    CHECK(g->num_cells() == 32);
    // cell volumes sum to the domain measure
    double total = g->num_cells() * g->cell_volume();
    CHECK(total == doctest::Approx(g->lx() * g->ly()).epsilon(1e-12));

    CHECK_THROWS_AS(StructuredGrid(1, 4, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(StructuredGrid(4, 4, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("l2_inner basic values") {
    auto g = make_grid(8, 8, 2.0 * M_PI, 2.0 * M_PI);
    ScalarField ones(g);
    for (auto& v : ones.values()) v = 1.0;
    CHECK(l2_inner(ones, ones) == doctest::Approx(4.0 * M_PI * M_PI).epsilon(1e-13));

    ScalarField zero(g);
    CHECK(l2_inner(ones, zero) == 0.0);

    // cells of volume 0.5, values {1,2,0,0}: 0.5 * (1 + 4) = 2.5
    auto g2 = make_grid(2, 2, 2.0, 1.0);
    ScalarField f(g2);
    f[0] = 1.0;
    f[1] = 2.0;
    CHECK(l2_inner(f, f) == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("l2_norm basic values") {
    auto g = make_grid(8, 8, 2.0 * M_PI, 2.0 * M_PI);
    ScalarField zero(g);
    CHECK(l2_norm(zero) == 0.0);

    ScalarField ones(g);
    for (auto& v : ones.values()) v = 1.0;
    CHECK(l2_norm(ones) == doctest::Approx(2.0 * M_PI).epsilon(1e-13));

    // unit cell volumes, values {3,4,0,0}: 3-4-5
    auto g2 = make_grid(2, 2, 2.0, 2.0);
    ScalarField f(g2);
    f[0] = 3.0;
    f[1] = 4.0;
    CHECK(l2_norm(f) == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("l2_inner rejects grid mismatch") {
    auto a = ScalarField(make_grid(4, 4, 1.0, 1.0));
    auto b = ScalarField(make_grid(8, 8, 1.0, 1.0));
    CHECK_THROWS_AS(l2_inner(a, b), std::invalid_argument);
}

TEST_CASE("sample_function evaluates at centroids") {
    auto g = make_grid(2, 2, 4.0, 2.0);
    auto f = sample_function(g, [](double x, double) { return x; });
    CHECK(f(0, 0) == doctest::Approx(1.0));
    CHECK(f(1, 0) == doctest::Approx(3.0));

    auto c = sample_function(g, [](double, double) { return 7.5; });
    for (double v : c.values()) CHECK(v == 7.5);
}

TEST_CASE("l2_inner symmetry, bilinearity, Cauchy-Schwarz") {
    auto g = make_grid(12, 9, 3.0, 2.0);
    std::mt19937 rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        ScalarField a = random_field(g, rng);
        ScalarField b = random_field(g, rng);
        ScalarField c = random_field(g, rng);
        double ab = l2_inner(a, b);
        CHECK(ab == doctest::Approx(l2_inner(b, a)).epsilon(1e-12));

        ScalarField combo(g);
        for (std::size_t k = 0; k < combo.size(); ++k) combo[k] = 2.0 * b[k] + 3.0 * c[k];
        CHECK(l2_inner(a, combo) ==
              doctest::Approx(2.0 * ab + 3.0 * l2_inner(a, c)).epsilon(1e-12));

        CHECK(std::abs(ab) <= l2_norm(a) * l2_norm(b) * (1.0 + 1e-12));
    }
}
