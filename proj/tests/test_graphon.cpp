#include "doctest.h"

#include "scratch_path.hpp"

#include <cmath>

#include "graphonlab/graphon.hpp"
#include "graphonlab/rng.hpp"

using namespace graphonlab;

namespace {

Graphon two_block_identity() {
    Matrix v(2, 2);
    v << 1.0, 0.0, 0.0, 1.0;
    return Graphon(v);
}

Graphon random_graphon(const CounterRng& rng, std::uint32_t id, int m) {
    Matrix v(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            const double x = rng.uniform(id, static_cast<std::uint32_t>(i),
                                         static_cast<std::uint32_t>(j));
            v(i, j) = x;
            v(j, i) = x;
        }
    return Graphon(v);
}

// Independent enumeration over all pairs of row/column subsets.
double cut_norm_brute(const Matrix& k) {
    const int m = static_cast<int>(k.rows());
    double best = 0.0;
    for (std::uint32_t a = 0; a < (1u << m); ++a)
        for (std::uint32_t b = 0; b < (1u << m); ++b) {
            double acc = 0.0;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    if ((a & (1u << i)) && (b & (1u << j))) acc += k(i, j);
            best = std::max(best, std::abs(acc));
        }
    return best / (static_cast<double>(m) * m);
}

}  // namespace

TEST_CASE("graphon validation") {
    CHECK_THROWS(Graphon(Matrix::Constant(2, 2, 1.5)));
    Matrix asym(2, 2);
    asym << 0.5, 0.2, 0.3, 0.5;
    CHECK_THROWS(Graphon(asym));
    CHECK_THROWS(Graphon(Matrix::Constant(2, 3, 0.5)));
    const Graphon g = Graphon::constant(0.5, 3);
    CHECK(g(0.1, 0.9) == 0.5);
}

TEST_CASE("graphon json round trip and load validation") {
    const std::string path = scratch_path("graphon_round_trip.json");
    Matrix v(2, 2);
    v << 0.25, 0.75, 0.75, 1.0;
    Graphon(v).save_json(path);
    const Graphon loaded = Graphon::load_json(path);
    CHECK((loaded.values() - v).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS(Graphon::load_json("does_not_exist.json"));
}

TEST_CASE("interaction_from_graphon constant cases") {
    const InteractionMatrix full = interaction_from_graphon(Graphon::constant(1.0), 4);
    CHECK((full.xi().array() == 0.25).all());
    for (int i = 0; i < 4; ++i) CHECK(full.row_sums()(i) == doctest::Approx(1.0));

    const InteractionMatrix zero = interaction_from_graphon(Graphon::constant(0.0), 3);
    CHECK(zero.xi().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("interaction_from_graphon midpoint sampling of a two-block graphon") {
    const InteractionMatrix xi = interaction_from_graphon(two_block_identity(), 4);
    // Midpoints 1/8, 3/8 fall in the first block, 5/8, 7/8 in the second.
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const bool same = (i < 2) == (j < 2);
            CHECK(xi.entry(i, j) == doctest::Approx(same ? 0.25 : 0.0));
        }
}

TEST_CASE("interaction row sums stay at most one for random graphons") {
    const CounterRng rng(11, streams::kPropertySweep);
    for (std::uint32_t c = 0; c < 20; ++c) {
        const Graphon g = random_graphon(rng, c, 3 + static_cast<int>(c % 4));
        for (int n : {1, 5, 17}) {
            const InteractionMatrix xi = interaction_from_graphon(g, n);
            CHECK(xi.row_sums().maxCoeff() <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("sample_bernoulli_matrix endpoints and law of large numbers") {
    const InteractionMatrix ones = sample_bernoulli_matrix(Graphon::constant(1.0), 5, 9);
    CHECK((ones.xi().array() == 0.2).all());
    const InteractionMatrix zeros = sample_bernoulli_matrix(Graphon::constant(0.0), 5, 9);
    CHECK(zeros.xi().cwiseAbs().maxCoeff() == 0.0);

    const int n = 200;
    const InteractionMatrix half = sample_bernoulli_matrix(Graphon::constant(0.5), n, 1234);
    CHECK((half.xi() - half.xi().transpose()).cwiseAbs().maxCoeff() == 0.0);
    const double mean = n * half.xi().sum() / (static_cast<double>(n) * n);
    CHECK(mean == doctest::Approx(0.5).epsilon(0.1));  // 0.5 +- 0.05
    const InteractionMatrix again = sample_bernoulli_matrix(Graphon::constant(0.5), n, 1234);
    CHECK((half.xi() - again.xi()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dist_sup_l1 values") {
    CHECK(dist_sup_l1(Graphon::constant(1.0), Graphon::constant(0.0)) == doctest::Approx(1.0));
    CHECK(dist_sup_l1(two_block_identity(), two_block_identity()) == 0.0);
    CHECK(dist_sup_l1(two_block_identity(), Graphon::constant(0.5)) == doctest::Approx(0.5));
}

TEST_CASE("common resolution cap") {
    CHECK_THROWS(dist_sup_l1(Graphon::constant(0.2, 64), Graphon::constant(0.3, 65)));
    CHECK(dist_sup_l1(Graphon::constant(0.2, 63), Graphon::constant(0.3, 65)) ==
          doctest::Approx(0.1));
}

TEST_CASE("cut_norm_exact on constants and a signed difference") {
    CHECK(cut_norm_exact(Graphon::constant(0.37)) == doctest::Approx(0.37));
    CHECK(cut_norm_exact(Graphon::constant(0.0)) == 0.0);

    const auto [a, b] = common_resolution(two_block_identity(), Graphon::constant(0.5));
    const Matrix diff = a - b;
    const double brute = cut_norm_brute(diff);
    CHECK(cut_norm_exact(diff) == doctest::Approx(brute));
    CHECK(brute == doctest::Approx(0.125));  // A = B = {1} picks up 0.5 / m^2
}

TEST_CASE("cut_norm_exact matches brute enumeration on random signed kernels") {
    const CounterRng rng(3, streams::kPropertySweep);
    for (std::uint32_t c = 0; c < 10; ++c) {
        const int m = 3 + static_cast<int>(c % 3);
        Matrix k(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                k(i, j) = 2.0 * rng.uniform(c, static_cast<std::uint32_t>(i),
                                            static_cast<std::uint32_t>(j)) - 1.0;
        CHECK(cut_norm_exact(k) == doctest::Approx(cut_norm_brute(k)).epsilon(1e-12));
    }
}

TEST_CASE("cut_norm_exact rejects oversized kernels") {
    CHECK_THROWS(cut_norm_exact(Matrix::Constant(23, 23, 0.1)));
}

TEST_CASE("cut_norm_lower_bound is a monotone lower bound that reaches the optimum") {
    const auto [a, b] = common_resolution(two_block_identity(), Graphon::constant(0.5));
    const Matrix diff = a - b;
    const double exact = cut_norm_exact(diff);
    double previous = 0.0;
    for (int iterations : {1, 5, 50, 1000}) {
        const double lower = cut_norm_lower_bound(diff, iterations, 77);
        CHECK(lower <= exact + 1e-12);
        CHECK(lower >= previous - 1e-15);
        previous = lower;
    }
    CHECK(cut_norm_lower_bound(diff, 1000, 77) == doctest::Approx(exact));
    CHECK(cut_norm_lower_bound(Graphon::constant(0.0), 10, 1) == 0.0);
}

TEST_CASE("cut_norm_lower_bound runs beyond the exhaustive cap") {
    const CounterRng rng(4, streams::kPropertySweep);
    const int m = 30;
    Matrix k(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            k(i, j) = 2.0 * rng.uniform(static_cast<std::uint32_t>(i),
                                        static_cast<std::uint32_t>(j)) - 1.0;
    const double lower = cut_norm_lower_bound(k, 50, 5);
    CHECK(lower >= 0.0);
    CHECK(lower <= k.cwiseAbs().maxCoeff());
}

TEST_CASE("cut norm is dominated by the sup-L1 distance") {
    const CounterRng rng(5, streams::kPropertySweep);
    for (std::uint32_t c = 0; c < 20; ++c) {
        const Graphon g1 = random_graphon(rng, c, 4);
        const Graphon g2 = random_graphon(rng, c + 100, 4);
        const auto [a, b] = common_resolution(g1, g2);
        CHECK(cut_norm_exact(Matrix(a - b)) <= dist_sup_l1(g1, g2) + 1e-12);
    }
}

TEST_CASE("kernel_apply quadrature") {
    const GridFunction one = GridFunction::constant(1.0, 1);
    CHECK(kernel_apply(Graphon::constant(1.0), one).samples(0) == doctest::Approx(1.0));
    CHECK(kernel_apply(Graphon::constant(0.0), one).samples(0) == 0.0);

    Vector f(2);
    f << 2.0, 4.0;
    const GridFunction out = kernel_apply(two_block_identity(), GridFunction(f));
    CHECK(out.samples(0) == doctest::Approx(1.0));
    CHECK(out.samples(1) == doctest::Approx(2.0));
}

TEST_CASE("kernel_apply is monotone") {
    const CounterRng rng(6, streams::kPropertySweep);
    for (std::uint32_t c = 0; c < 10; ++c) {
        const Graphon g = random_graphon(rng, c, 5);
        Vector f(5), h(5);
        for (int i = 0; i < 5; ++i) {
            f(i) = rng.uniform(c, static_cast<std::uint32_t>(i), 50);
            h(i) = f(i) + rng.uniform(c, static_cast<std::uint32_t>(i), 51);
        }
        const Vector af = kernel_apply(g, GridFunction(f)).samples;
        const Vector ah = kernel_apply(g, GridFunction(h)).samples;
        CHECK((ah - af).minCoeff() >= -1e-15);
    }
}

TEST_CASE("kernel exponential on the constant-one graphon is exp(t)") {
    const GridFunction one = GridFunction::constant(1.0, 1);
    for (double t : {0.1, 1.0, 5.0}) {
        const double value = kernel_exponential_apply(Graphon::constant(1.0), one, t).samples(0);
        CHECK(std::abs(value - std::exp(t)) <= 1e-9 * std::exp(t));
    }
}

TEST_CASE("kernel exponential identity at t = 0 and the two-block example") {
    Vector f(2);
    f << 1.0, 0.0;
    const GridFunction same = kernel_exponential_apply(two_block_identity(), GridFunction(f), 0.0);
    CHECK(same.samples(0) == doctest::Approx(1.0));
    CHECK(same.samples(1) == doctest::Approx(0.0));

    // Quadrature matrix [[0.5, 0], [0, 0.5]]: the image is (e^{1/2}, 0).
    const GridFunction out = kernel_exponential_apply(two_block_identity(), GridFunction(f), 1.0);
    CHECK(out.samples(0) == doctest::Approx(std::exp(0.5)));
    CHECK(out.samples(1) == doctest::Approx(0.0));
}

TEST_CASE("kernel exponential positivity and growth envelope") {
    const CounterRng rng(8, streams::kPropertySweep);
    for (std::uint32_t c = 0; c < 100; ++c) {
        const int m = 2 + static_cast<int>(c % 5);
        const Graphon g = random_graphon(rng, c, m);
        Vector f(m);
        for (int i = 0; i < m; ++i) f(i) = 2.0 * rng.uniform(c, static_cast<std::uint32_t>(i), 60);
        const double t = 5.0 * rng.uniform(c, 0, 61);
        CHECK(kernel_exponential_apply(g, GridFunction(f), t).samples.minCoeff() >= -1e-12);
    }
    for (std::uint32_t c = 0; c < 10; ++c) {
        const Graphon g = random_graphon(rng, 1000 + c, 4);
        const double growth = g.max_row_mean();
        for (double t : {0.1, 1.0, 5.0}) {
            const GridFunction one = GridFunction::constant(1.0, 4);
            const double sup = kernel_exponential_apply(g, one, t).samples.maxCoeff();
            CHECK(sup <= std::exp(growth * t) * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("kernel exponential preserves the pointwise order") {
    const CounterRng rng(10, streams::kPropertySweep);
    for (std::uint32_t c = 0; c < 20; ++c) {
        const int m = 3 + static_cast<int>(c % 3);
        const Graphon g = random_graphon(rng, 2000 + c, m);
        Vector f(m), h(m);
        for (int i = 0; i < m; ++i) {
            f(i) = rng.uniform(c, static_cast<std::uint32_t>(i), 70) - 0.5;
            h(i) = f(i) + rng.uniform(c, static_cast<std::uint32_t>(i), 71);
        }
        const double t = 3.0 * rng.uniform(c, 0, 72);
        const Vector ef = kernel_exponential_apply(g, GridFunction(f), t).samples;
        const Vector eh = kernel_exponential_apply(g, GridFunction(h), t).samples;
        CHECK((eh - ef).minCoeff() >= -1e-12);
    }
}

TEST_CASE("matrix_exponential agrees with a truncated series on small matrices") {
    const CounterRng rng(9, streams::kPropertySweep);
    for (std::uint32_t c = 0; c < 10; ++c) {
        const int m = 2 + static_cast<int>(c % 3);
        Matrix a(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                a(i, j) = rng.uniform(c, static_cast<std::uint32_t>(i),
                                      static_cast<std::uint32_t>(j)) - 0.5;
        Matrix series = Matrix::Identity(m, m);
        Matrix term = Matrix::Identity(m, m);
        for (int k = 1; k <= 30; ++k) {
            term = term * a / k;
            series += term;
        }
        CHECK((matrix_exponential(a) - series).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("interaction matrix validation") {
    Matrix bad(2, 2);
    bad << 0.9, 0.2, 0.2, 0.9;  // row sum 1.1
    CHECK_THROWS(InteractionMatrix(2, bad));
    Matrix negative(1, 1);
    negative << -0.1;
    CHECK_THROWS(InteractionMatrix(1, negative));
    const InteractionMatrix ok(2, Matrix::Constant(2, 2, 0.5));
    CHECK(ok.max_entry() == 0.5);
}
