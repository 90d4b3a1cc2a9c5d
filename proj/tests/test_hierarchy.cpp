#include "doctest.h"

#include <cmath>
#include <cstdlib>

#include "graphonlab/hierarchy.hpp"
#include "graphonlab/rng.hpp"

using namespace graphonlab;

namespace {

InteractionMatrix uniform_matrix(int n) {
    return InteractionMatrix(n, Matrix::Constant(n, n, 1.0 / n));
}

InteractionMatrix random_matrix(const CounterRng& rng, std::uint32_t id, int n) {
    Matrix x(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double v = rng.uniform(id, static_cast<std::uint32_t>(i),
                                         static_cast<std::uint32_t>(j)) / n;
            x(i, j) = v;
            x(j, i) = v;
        }
    return InteractionMatrix(n, x);
}

}  // namespace

TEST_CASE("generator vanishes on constants and on the full set") {
    const InteractionMatrix xi = uniform_matrix(3);
    SubsetFunction constant(3, 2.7);
    for (std::uint32_t v = 1; v < 8; ++v)
        CHECK(subset_generator_apply(xi, constant, v) == doctest::Approx(0.0));

    SubsetFunction f(3, 0.0);
    for (std::uint32_t v = 1; v < 8; ++v) f.at(v) = static_cast<double>(v * v);
    CHECK(subset_generator_apply(xi, f, 0b111) == 0.0);
}

TEST_CASE("generator hand evaluation for |v|^2 under uniform weights") {
    const InteractionMatrix xi = uniform_matrix(3);
    SubsetFunction f(3, 0.0);
    for (std::uint32_t v = 1; v < 8; ++v) {
        const int size = __builtin_popcount(v);
        f.at(v) = static_cast<double>(size) * size;
    }
    // v = {0}: both extensions jump from 1 to 4, each with weight 1/3.
    CHECK(subset_generator_apply(xi, f, 0b001) == doctest::Approx(2.0));
}

TEST_CASE("source term instances") {
    CHECK(source_term(InteractionMatrix(3, Matrix::Zero(3, 3)), 0b011) == 0.0);
    for (int n : {3, 4, 6}) {
        const InteractionMatrix xi = uniform_matrix(n);
        for (int k = 1; k <= n; ++k) {
            const std::uint32_t v = (1u << k) - 1;
            CHECK(source_term(xi, v) ==
                  doctest::Approx(std::pow(k, 3) / (static_cast<double>(n) * n)));
        }
    }
    CHECK(source_term(uniform_matrix(4), 0b0011) == doctest::Approx(0.5));
}

TEST_CASE("interaction bound matches the uniform-matrix formula exactly") {
    for (int n : {2, 4, 8, 16}) {
        const InteractionMatrix xi = uniform_matrix(n);
        for (int k = 1; k <= std::min(n, 6); ++k) {
            const std::uint32_t v = (1u << k) - 1;
            const double expected = (static_cast<double>(k) / n + 1.0) *
                                    (3.0 * k * k + k) / (static_cast<double>(n) * n);
            CHECK(interaction_bound(xi, v) == doctest::Approx(expected).epsilon(1e-14));
        }
    }
    CHECK(interaction_bound(uniform_matrix(4), 0b0011) == doctest::Approx(1.3125));
    CHECK(interaction_bound(InteractionMatrix(3, Matrix::Zero(3, 3)), 0b111) == 0.0);
}

TEST_CASE("interaction bound obeys the k^2/N^2 envelope for graphon matrices") {
    for (int n : {32, 128, 512}) {
        const InteractionMatrix xi = interaction_from_graphon(Graphon::constant(1.0), n);
        for (int k : {1, 2, 8, 32}) {
            if (k > n) continue;
            std::vector<int> v(k);
            for (int i = 0; i < k; ++i) v[i] = i;
            const double bound = interaction_bound(xi, v);
            CHECK(bound <= 8.0 * k * k / (static_cast<double>(n) * n) + 1e-15);
        }
    }
}

TEST_CASE("hierarchy solve: trivial cases") {
    const InteractionMatrix xi = uniform_matrix(3);
    const SubsetFunction zero_init(3, 0.0);
    const SubsetFunction z = solve_hierarchy_ode(xi, zero_init, 0.0, 1.0);
    for (std::uint32_t v = 1; v < 8; ++v) CHECK(z(v) == doctest::Approx(0.0));

    const InteractionMatrix none(3, Matrix::Zero(3, 3));
    SubsetFunction init(3, 0.0);
    for (std::uint32_t v = 1; v < 8; ++v) init.at(v) = static_cast<double>(v);
    const SubsetFunction frozen = solve_hierarchy_ode(none, init, 1.0, 2.0);
    for (std::uint32_t v = 1; v < 8; ++v) CHECK(frozen(v) == doctest::Approx(v));
}

TEST_CASE("hierarchy solve matches the two-particle closed form") {
    // Uniform xi = 1/2 everywhere. The full set sees no coupling:
    //   z_full(t) = C(full) t = 2 t.
    // A singleton solves z' = (1/2)(z_full - z) + 1/4, z(0) = 0, whose
    // solution is 2 t - 3.5 + 3.5 exp(-t/2).
    const InteractionMatrix xi = uniform_matrix(2);
    const SubsetFunction z = solve_hierarchy_ode(xi, SubsetFunction(2, 0.0), 1.0, 1.0, 1e-3);
    const double expected_full = 2.0;
    const double expected_single = 2.0 - 3.5 + 3.5 * std::exp(-0.5);
    CHECK(std::abs(z(0b11) - expected_full) <= 1e-8);
    CHECK(std::abs(z(0b01) - expected_single) <= 1e-8);
    CHECK(std::abs(z(0b10) - expected_single) <= 1e-8);
}

TEST_CASE("comparison principle, positivity and linear scaling") {
    const CounterRng rng(41, streams::kPropertySweep);
    for (std::uint32_t c = 0; c < 25; ++c) {
        const int n = 4;
        const InteractionMatrix xi = random_matrix(rng, c, n);
        SubsetFunction lo(n, 0.0), hi(n, 0.0), doubled(n, 0.0);
        for (std::uint32_t v = 1; v <= lo.full_mask(); ++v) {
            const double a = rng.uniform(c, v, 0, 1);
            const double gap = rng.uniform(c, v, 1, 1);
            lo.at(v) = a;
            hi.at(v) = a + gap;
            doubled.at(v) = 2.0 * a;
        }
        const SubsetFunction zl = solve_hierarchy_ode(xi, lo, 1.0, 0.8, 1e-2);
        const SubsetFunction zh = solve_hierarchy_ode(xi, hi, 1.0, 0.8, 1e-2);
        const SubsetFunction zd = solve_hierarchy_ode(xi, doubled, 0.0, 0.8, 1e-2);
        const SubsetFunction z1 = solve_hierarchy_ode(xi, lo, 0.0, 0.8, 1e-2);
        for (std::uint32_t v = 1; v <= lo.full_mask(); ++v) {
            CHECK(zl(v) <= zh(v) + 1e-12);
            CHECK(zl(v) >= -1e-12);
            // Linearity of the generator part: doubled data, doubled solution.
            CHECK(zd(v) == doctest::Approx(2.0 * z1(v)).epsilon(1e-10));
        }
    }
}

TEST_CASE("restricted superset family reproduces the dense solution") {
    const CounterRng rng(42, streams::kPropertySweep);
    const int n = 5;
    const InteractionMatrix xi = random_matrix(rng, 7, n);
    SubsetFunction dense(n, 0.0);
    for (std::uint32_t v = 1; v <= dense.full_mask(); ++v)
        dense.at(v) = rng.uniform(3, v, 0, 2);

    const std::uint32_t base = 0b00101;
    SubsetFunction restricted(n, base, 0.0);
    for (std::uint32_t v : restricted.family()) restricted.at(v) = dense(v);

    const SubsetFunction zd = solve_hierarchy_ode(xi, dense, 1.0, 0.6, 1e-2);
    const SubsetFunction zr = solve_hierarchy_ode(xi, restricted, 1.0, 0.6, 1e-2);
    for (std::uint32_t v : restricted.family())
        if (v != 0) CHECK(std::abs(zr(v) - zd(v)) <= 1e-12);
}

TEST_CASE("solver output is independent of the thread count") {
    const InteractionMatrix xi = uniform_matrix(12);
    SubsetFunction init(12, 0.0);
    for (std::uint32_t v = 1; v <= init.full_mask(); v += 17) init.at(v) = 0.25;
    setenv("GRAPHONLAB_THREADS", "1", 1);
    const SubsetFunction serial = solve_hierarchy_ode(xi, init, 1.0, 0.2, 1e-2);
    setenv("GRAPHONLAB_THREADS", "4", 1);
    const SubsetFunction parallel = solve_hierarchy_ode(xi, init, 1.0, 0.2, 1e-2);
    unsetenv("GRAPHONLAB_THREADS");
    for (std::uint32_t v = 1; v <= init.full_mask(); ++v) CHECK(serial(v) == parallel(v));
}

TEST_CASE("comparison_check tabulates finite ratios") {
    const auto rows = comparison_check(uniform_matrix(5), 1.0);
    CHECK(rows.size() == 5);
    for (const auto& row : rows) {
        CHECK(row.max_ratio >= 1.0);  // the solve only grows matched data
        CHECK(std::isfinite(row.max_ratio));
        CHECK(row.max_bound > 0.0);
    }
    const auto zero_rows = comparison_check(InteractionMatrix(4, Matrix::Zero(4, 4)), 1.0);
    for (const auto& row : zero_rows) CHECK(row.max_ratio == 0.0);
}

TEST_CASE("subset cap and family bookkeeping") {
    CHECK_THROWS(SubsetFunction(21, 0.0));
    SubsetFunction f(3, 0b001, 0.0);
    CHECK(f.family_size() == 4);
    const auto family = f.family();
    CHECK(family == std::vector<std::uint32_t>{0b001, 0b011, 0b101, 0b111});
    CHECK_THROWS(f.at(0b010));
}
