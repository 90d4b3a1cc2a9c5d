#include "doctest.h"

#include <cmath>

#include "graphonlab/drift.hpp"
#include "graphonlab/rng.hpp"

using namespace graphonlab;

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

TEST_CASE("domain wrapping") {
    const Domain torus = Domain::torus(1.0);
    CHECK(torus.wrap(1.25) == doctest::Approx(0.25));
    CHECK(torus.wrap(-0.25) == doctest::Approx(0.75));
    CHECK(torus.diff(0.9, 0.1) == doctest::Approx(-0.2));  // wrapped into [-1/2, 1/2)
    CHECK(torus.diff(0.1, 0.9) == doctest::Approx(0.2));
    const Domain plane = Domain::euclidean(2);
    CHECK(plane.diff(3.0, 1.0) == 2.0);
}

TEST_CASE("zero kernel") {
    const DriftKernel k = DriftKernel::zero();
    CHECK(k.eval(1.0, 2.0) == 0.0);
    CHECK(k.eval_grad(1.0, 2.0) == 0.0);
    CHECK(k.sup_b() == 0.0);
    CHECK(k.sup_grad_b() == 0.0);
}

TEST_CASE("linear kernel values and metadata") {
    const DriftKernel k = DriftKernel::linear_difference(1.0);
    CHECK(k.eval(2.0, 0.5) == doctest::Approx(-1.5));
    CHECK(k.eval_grad(2.0, 0.5) == doctest::Approx(-1.0));
    CHECK(std::isinf(k.sup_b()));
    CHECK(k.sup_grad_b() == 1.0);
    CHECK(k.gradient_form());
}

TEST_CASE("sine kernel values and metadata") {
    const DriftKernel k = DriftKernel::sine_torus(0.3, 1, 1.0);
    CHECK(k.eval(0.25, 0.0) == doctest::Approx(0.3));
    CHECK(k.eval_grad(0.0, 0.0) == doctest::Approx(0.3 * kTwoPi));  // ~1.88496
    CHECK(k.sup_b() == doctest::Approx(0.3));
    CHECK(k.sup_grad_b() == doctest::Approx(0.3 * kTwoPi));
    CHECK(k.gradient_form());
    // Differences wrap before the sine is applied.
    CHECK(k.eval(0.9, 0.1) == doctest::Approx(0.3 * std::sin(kTwoPi * -0.2)));
}

TEST_CASE("tabulated kernel reproduces its samples") {
    const int n = 256;
    std::vector<double> table(n);
    for (int i = 0; i < n; ++i) table[i] = 0.3 * std::sin(kTwoPi * i / n);
    const DriftKernel k = DriftKernel::custom_tabulated(table, 1.0);
    const DriftKernel reference = DriftKernel::sine_torus(0.3, 1, 1.0);
    for (double r : {0.0, 0.1, 0.37, 0.93})
        CHECK(k.eval(r, 0.0) == doctest::Approx(reference.eval(r, 0.0)).epsilon(1e-3));
    CHECK(k.sup_b() == doctest::Approx(0.3).epsilon(1e-3));
    CHECK_FALSE(k.gradient_form());
}

TEST_CASE("gradient agrees with central differences") {
    const std::vector<DriftKernel> kernels{
        DriftKernel::linear_difference(0.7),
        DriftKernel::sine_torus(0.4, 2, 1.0),
        DriftKernel::sine_torus(0.25, 1, 4.0),
    };
    const CounterRng rng(21, streams::kPropertySweep);
    const double step = 1e-5;
    for (std::size_t which = 0; which < kernels.size(); ++which) {
        const DriftKernel& k = kernels[which];
        const double span = k.domain().is_torus() ? k.domain().period : 4.0;
        for (std::uint32_t c = 0; c < 100; ++c) {
            const double x = span * rng.uniform(c, static_cast<std::uint32_t>(which), 0);
            const double y = span * rng.uniform(c, static_cast<std::uint32_t>(which), 1);
            const double grad = k.eval_grad(x, y);
            const double fd = (k.eval(x + step, y) - k.eval(x - step, y)) / (2.0 * step);
            const double scale = std::max(1.0, std::abs(grad));
            CHECK(std::abs(grad - fd) <= 1e-6 * scale);
        }
    }
}

TEST_CASE("values and slopes respect the advertised bounds") {
    const std::vector<DriftKernel> kernels{
        DriftKernel::sine_torus(0.4, 2, 1.0),
        DriftKernel::sine_torus(0.25, 3, 2.0),
        DriftKernel::zero(Domain::torus(1.0)),
    };
    const CounterRng rng(22, streams::kPropertySweep);
    for (std::size_t which = 0; which < kernels.size(); ++which) {
        const DriftKernel& k = kernels[which];
        for (std::uint32_t c = 0; c < 10000; ++c) {
            const double span = k.domain().period;
            const double x = span * rng.uniform(c, static_cast<std::uint32_t>(which), 2);
            const double y = span * rng.uniform(c, static_cast<std::uint32_t>(which), 3);
            CHECK(std::abs(k.eval(x, y)) <= k.sup_b() + 1e-12);
            CHECK(std::abs(k.eval_grad(x, y)) <= k.sup_grad_b() + 1e-12);
        }
    }
}

TEST_CASE("dimension checks") {
    const DriftKernel k = DriftKernel::linear_difference(1.0, 2);
    Vector x(2), y(2);
    x << 1.0, 2.0;
    y << 0.0, 1.0;
    const Vector out = k.eval(x, y);
    CHECK(out(0) == doctest::Approx(-1.0));
    CHECK(out(1) == doctest::Approx(-1.0));
    const Matrix grad = k.eval_grad(x, y);
    CHECK(grad(0, 0) == doctest::Approx(-1.0));
    CHECK(grad(0, 1) == 0.0);
    CHECK_THROWS(k.eval(1.0, 2.0));  // scalar eval on a 2-d kernel
    Vector bad(3);
    bad.setZero();
    CHECK_THROWS(k.eval(bad, bad));
}
