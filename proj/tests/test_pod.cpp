#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sfv/pod.hpp"

using namespace sfv;

namespace {

GridPtr make_grid(int n) {
    return std::make_shared<StructuredGrid>(n, n, 2.0 * M_PI, 2.0 * M_PI);
}

// Smooth random fields so spectra decay like real snapshot sets.
ScalarField random_smooth_field(GridPtr grid, std::mt19937& rng) {
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    double a1 = amp(rng), a2 = amp(rng), a3 = amp(rng), p1 = amp(rng) * M_PI;
    ScalarField f(grid);
    const auto& g = *grid;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            double x = g.xc(i), y = g.yc(j);
            f(i, j) = a1 * std::sin(x + p1) * std::sin(y) + a2 * std::cos(2.0 * x) * std::sin(y) +
                      a3 * std::sin(x) * std::cos(3.0 * y);
        }
    return f;
}

SnapshotSet random_snapshot_set(GridPtr grid, std::size_t count, std::mt19937& rng) {
    SnapshotSet set(FieldTag::Generic);
    for (std::size_t k = 0; k < count; ++k)
        set.add(random_smooth_field(grid, rng), {0.0}, static_cast<double>(k));
    return set;
}

}  // namespace

TEST_CASE("correlation matrix structure") {
    auto g = make_grid(8);
    std::mt19937 rng(1);
    ScalarField f = random_smooth_field(g, rng);
    double nrm = l2_norm(f);
    for (auto& v : f.values()) v /= nrm;

    SnapshotSet identical(FieldTag::Generic);
    for (int k = 0; k < 4; ++k) identical.add(f, {}, k);
    DenseMatrix c = correlation_matrix(identical);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            CHECK(c(i, j) == doctest::Approx(1.0).epsilon(1e-12));

    // two L2-orthogonal snapshots -> diagonal matrix of squared norms
    auto a = sample_function(g, [](double x, double) { return std::sin(x); });
    auto b = sample_function(g, [](double x, double) { return std::cos(x); });
    SnapshotSet ortho(FieldTag::Generic);
    ortho.add(a, {}, 0.0);
    ortho.add(b, {}, 1.0);
    DenseMatrix co = correlation_matrix(ortho);
    CHECK(std::abs(co(0, 1)) <= 1e-12);
    CHECK(co(0, 0) == doctest::Approx(l2_inner(a, a)).epsilon(1e-12));
    CHECK(co(1, 1) == doctest::Approx(l2_inner(b, b)).epsilon(1e-12));
}

TEST_CASE("correlation matrix against a brute-force oracle") {
    auto g = make_grid(6);
    std::mt19937 rng(2);
    SnapshotSet set = random_snapshot_set(g, 3, rng);
    DenseMatrix c = correlation_matrix(set);
    const double vol = g->cell_volume();
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < g->num_cells(); ++k)
                s += set.at(i).field[k] * set.at(j).field[k] * vol;
            CHECK(c(i, j) == doctest::Approx(s).epsilon(1e-12));
        }
}

TEST_CASE("build_basis degenerate sets") {
    auto g = make_grid(8);
    std::mt19937 rng(3);
    ScalarField f = random_smooth_field(g, rng);

    SnapshotSet single(FieldTag::Generic);
    single.add(f, {}, 0.0);
    PodBasis b1 = build_basis(single, 1e-5);
    REQUIRE(b1.retained() == 1);
    CHECK(l2_norm(b1.modes[0]) == doctest::Approx(1.0).epsilon(1e-12));
    double fn = l2_norm(f);
    for (std::size_t k = 0; k < f.size(); ++k)
        CHECK(std::abs(std::abs(b1.modes[0][k]) - std::abs(f[k]) / fn) <= 1e-10);

    // {f, -f} has rank 1
    SnapshotSet pm(FieldTag::Generic);
    pm.add(f, {}, 0.0);
    ScalarField mf = f;
    for (auto& v : mf.values()) v = -v;
    pm.add(mf, {}, 1.0);
    PodBasis b2 = build_basis(pm, 1e-5);
    CHECK(b2.retained() == 1);
    CHECK(b2.eigenvalues[1] <= 1e-10 * b2.eigenvalues[0]);

    SnapshotSet zeros(FieldTag::Generic);
    zeros.add(ScalarField(g), {}, 0.0);
    CHECK_THROWS_AS(build_basis(zeros, 1e-5), EmptyBasisError);
}

TEST_CASE("orthonormality and spectrum monotonicity") {
    auto g = make_grid(12);
    std::mt19937 rng(4);
    SnapshotSet set = random_snapshot_set(g, 15, rng);
    PodBasis basis = build_basis(set, 1e-12);
    REQUIRE(basis.retained() >= 2);
    for (std::size_t i = 0; i < basis.retained(); ++i)
        for (std::size_t j = 0; j < basis.retained(); ++j) {
            double p = l2_inner(basis.modes[i], basis.modes[j]);
            CHECK(std::abs(p - (i == j ? 1.0 : 0.0)) <= 1e-10);
        }
    for (std::size_t k = 1; k < basis.eigenvalues.size(); ++k) {
        CHECK(basis.eigenvalues[k] <= basis.eigenvalues[k - 1] * (1.0 + 1e-14));
        CHECK(basis.eigenvalues[k] >= 0.0);
    }
}

TEST_CASE("projection and reconstruction") {
    auto g = make_grid(10);
    std::mt19937 rng(5);
    SnapshotSet set = random_snapshot_set(g, 8, rng);
    PodBasis basis = build_basis(set, 1e-12);
    REQUIRE(basis.retained() >= 2);

    DenseVector c1 = project(basis.modes[0], basis);
    CHECK(c1[0] == doctest::Approx(1.0).epsilon(1e-10));
    for (std::size_t k = 1; k < c1.size(); ++k) CHECK(std::abs(c1[k]) <= 1e-10);

    // linear combination comes back exactly
    ScalarField combo(g);
    for (std::size_t k = 0; k < combo.size(); ++k)
        combo[k] = 2.0 * basis.modes[0][k] + 3.0 * basis.modes[1][k];
    DenseVector cc = project(combo, basis);
    CHECK(cc[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(cc[1] == doctest::Approx(3.0).epsilon(1e-12));

    DenseVector e1(basis.retained(), 0.0);
    e1[0] = 1.0;
    ScalarField z1 = reconstruct(e1, basis);
    for (std::size_t k = 0; k < z1.size(); ++k)
        CHECK(z1[k] == doctest::Approx(basis.modes[0][k]).epsilon(1e-12));

    ScalarField zero = reconstruct(DenseVector(basis.retained(), 0.0), basis);
    for (double v : zero.values()) CHECK(v == 0.0);

    // full-rank basis reproduces the snapshots
    for (std::size_t s = 0; s < set.count(); ++s) {
        ScalarField rec = reconstruct(project(set.at(s).field, basis), basis);
        ScalarField diff(g);
        for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = rec[k] - set.at(s).field[k];
        CHECK(l2_norm(diff) <= 1e-8 * l2_norm(set.at(s).field));
    }

    CHECK_THROWS_AS(reconstruct(DenseVector(basis.retained() + 1, 0.0), basis),
                    std::invalid_argument);
}

TEST_CASE("method-of-snapshots energy identity") {
    auto g = make_grid(12);
    std::mt19937 rng(6);
    SnapshotSet set = random_snapshot_set(g, 20, rng);
    PodBasis full = build_basis(set, 1e-12);

    for (std::size_t n_r : {std::size_t{1}, std::size_t{2}, full.retained() / 2}) {
        PodBasis truncated = build_basis(set, 1e-5, n_r);
        double proj_err = 0.0;
        for (const auto& s : set.snapshots()) {
            ScalarField rec = reconstruct(project(s.field, truncated), truncated);
            ScalarField diff(g);
            for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = s.field[k] - rec[k];
            proj_err += l2_inner(diff, diff);
        }
        double tail = 0.0;
        for (std::size_t k = n_r; k < full.eigenvalues.size(); ++k)
            tail += std::max(full.eigenvalues[k], 0.0);
        CHECK(proj_err == doctest::Approx(tail).epsilon(1e-6));
    }
}

TEST_CASE("basis invariance under snapshot scaling") {
    auto g = make_grid(10);
    std::mt19937 rng(7);
    SnapshotSet set = random_snapshot_set(g, 10, rng);
    const double scale = 3.7;
    SnapshotSet scaled(FieldTag::Generic);
    for (const auto& s : set.snapshots()) {
        ScalarField f = s.field;
        for (auto& v : f.values()) v *= scale;
        scaled.add(std::move(f), s.parameters, s.time);
    }
    PodBasis a = build_basis(set, 1e-6);
    PodBasis b = build_basis(scaled, 1e-6);
    CHECK(a.retained() == b.retained());
    for (std::size_t k = 0; k < a.retained(); ++k)
        CHECK(std::abs(l2_inner(a.modes[k], b.modes[k])) == doctest::Approx(1.0).epsilon(1e-8));
    for (std::size_t k = 0; k < a.retained(); ++k)
        CHECK(b.eigenvalues[k] == doctest::Approx(scale * scale * a.eigenvalues[k]).epsilon(1e-8));
}
