#include "graphonlab/graphon.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>

#include <unsupported/Eigen/MatrixFunctions>

#include "graphonlab/rng.hpp"
#include "json.hpp"

namespace graphonlab {

namespace {

constexpr double kSymTol = 1e-12;

int lcm_int(int a, int b) { return a / std::gcd(a, b) * b; }

Matrix refine_blocks(const Matrix& values, int factor) {
    const int m = static_cast<int>(values.rows());
    Matrix out(m * factor, m * factor);
    for (int i = 0; i < m * factor; ++i)
        for (int j = 0; j < m * factor; ++j) out(i, j) = values(i / factor, j / factor);
    return out;
}

}  // namespace

Graphon::Graphon(Matrix block_values) : values_(std::move(block_values)) {
    require(values_.rows() >= 1 && values_.rows() == values_.cols(),
            "Graphon: block matrix must be square and nonempty");
    for (int i = 0; i < values_.rows(); ++i) {
        for (int j = 0; j < values_.cols(); ++j) {
            const double v = values_(i, j);
            require(std::isfinite(v) && v >= 0.0 && v <= 1.0,
                    "Graphon: values must lie in [0,1]");
            require(std::abs(v - values_(j, i)) <= kSymTol, "Graphon: values must be symmetric");
        }
    }
}

Graphon Graphon::constant(double value, int blocks) {
    return Graphon(Matrix::Constant(blocks, blocks, value));
}

double Graphon::operator()(double u, double v) const {
    require(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0, "Graphon: point outside [0,1]^2");
    const int m = block_count();
    const int i = std::min(static_cast<int>(u * m), m - 1);
    const int j = std::min(static_cast<int>(v * m), m - 1);
    return values_(i, j);
}

Graphon Graphon::refined(int factor) const {
    require(factor >= 1, "Graphon: refinement factor must be >= 1");
    return Graphon(refine_blocks(values_, factor));
}

double Graphon::max_row_mean() const {
    return values_.rowwise().mean().maxCoeff();
}

Graphon Graphon::load_json(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "Graphon: cannot open " + path);
    nlohmann::json j;
    in >> j;
    require(j.contains("m") && j.contains("values"), "Graphon file: need fields m, values");
    const int m = j.at("m").get<int>();
    require(m >= 1, "Graphon file: m must be >= 1");
    const auto rows = j.at("values");
    require(static_cast<int>(rows.size()) == m, "Graphon file: values must have m rows");
    Matrix values(m, m);
    for (int i = 0; i < m; ++i) {
        require(static_cast<int>(rows[i].size()) == m, "Graphon file: values must be m x m");
        for (int k = 0; k < m; ++k) values(i, k) = rows[i][k].get<double>();
    }
    return Graphon(values);  // constructor validates symmetry and range
}

void Graphon::save_json(const std::string& path) const {
    nlohmann::json j;
    const int m = block_count();
    j["m"] = m;
    std::vector<std::vector<double>> rows(m, std::vector<double>(m));
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k) rows[i][k] = values_(i, k);
    j["values"] = rows;
    std::ofstream out(path);
    require(out.good(), "Graphon: cannot write " + path);
    out << j.dump(2) << "\n";
}

GridFunction::GridFunction(Vector s) : samples(std::move(s)) {
    require(samples.size() >= 1, "GridFunction: empty");
    require(samples.allFinite(), "GridFunction: entries must be finite");
}

GridFunction GridFunction::constant(double value, int resolution) {
    return GridFunction(Vector::Constant(resolution, value));
}

GridFunction GridFunction::refined(int factor) const {
    require(factor >= 1, "GridFunction: refinement factor must be >= 1");
    Vector out(samples.size() * factor);
    for (int i = 0; i < out.size(); ++i) out(i) = samples(i / factor);
    return GridFunction(out);
}

InteractionMatrix::InteractionMatrix(int n, Matrix xi) : n_(n), xi_(std::move(xi)) {
    require(n_ >= 1, "InteractionMatrix: N must be >= 1");
    require(xi_.rows() == n_ && xi_.cols() == n_, "InteractionMatrix: xi must be N x N");
    for (int i = 0; i < n_; ++i) {
        double row = 0.0;
        for (int j = 0; j < n_; ++j) {
            require(std::isfinite(xi_(i, j)) && xi_(i, j) >= 0.0,
                    "InteractionMatrix: entries must be nonnegative");
            row += xi_(i, j);
        }
        require(row <= 1.0 + 1e-12, "InteractionMatrix: row sums must be <= 1");
    }
}

double InteractionMatrix::max_entry() const {
    return n_ == 0 ? 0.0 : xi_.maxCoeff();
}

InteractionMatrix interaction_from_graphon(const Graphon& g, int n) {
    require(n >= 1, "interaction_from_graphon: N must be >= 1");
    const int m = g.block_count();
    std::vector<int> block_of(n);
    Matrix xi(n, n);
    for (int i = 0; i < n; ++i) {
        const double u = (i + 0.5) / n;
        block_of[i] = std::min(static_cast<int>(u * m), m - 1);
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) xi(i, j) = g.values()(block_of[i], block_of[j]) / n;
    InteractionMatrix out(n, std::move(xi));
    out.blocks_ = InteractionMatrix::BlockStructure{g.values(), std::move(block_of)};
    return out;
}

InteractionMatrix sample_bernoulli_matrix(const Graphon& g, int n, std::uint64_t seed) {
    require(n >= 1, "sample_bernoulli_matrix: N must be >= 1");
    CounterRng rng(seed, streams::kBernoulliMatrix);
    Matrix xi = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const double u = (i + 0.5) / n;
        for (int j = i; j < n; ++j) {
            const double p = g(u, (j + 0.5) / n);
            const double draw = rng.uniform(static_cast<std::uint32_t>(i),
                                            static_cast<std::uint32_t>(j));
            const double value = draw < p ? 1.0 / n : 0.0;
            xi(i, j) = value;
            xi(j, i) = value;
        }
    }
    return InteractionMatrix(n, std::move(xi));
}

std::pair<Matrix, Matrix> common_resolution(const Graphon& g1, const Graphon& g2,
                                            int resolution_cap) {
    const int m1 = g1.block_count();
    const int m2 = g2.block_count();
    const int m = lcm_int(m1, m2);
    require(m <= resolution_cap, "common_resolution: blocks exceed the resolution cap");
    return {refine_blocks(g1.values(), m / m1), refine_blocks(g2.values(), m / m2)};
}

double dist_sup_l1(const Graphon& g1, const Graphon& g2, int resolution_cap) {
    const auto [a, b] = common_resolution(g1, g2, resolution_cap);
    const int m = static_cast<int>(a.rows());
    return (a - b).cwiseAbs().rowwise().sum().maxCoeff() / m;
}

namespace {

// Given row-subset column sums s_j, the optimal column subset picks either all
// positive or all negative entries.
double best_column_split(const Vector& s) {
    double pos = 0.0, neg = 0.0;
    for (int j = 0; j < s.size(); ++j) {
        if (s(j) > 0)
            pos += s(j);
        else
            neg -= s(j);
    }
    return std::max(pos, neg);
}

double local_search_from(const Matrix& k, std::vector<char>& in_a, Vector& s) {
    const int m = static_cast<int>(k.rows());
    double best = best_column_split(s);
    bool improved = true;
    int passes = 0;
    while (improved && passes++ < 4 * m) {
        improved = false;
        for (int i = 0; i < m; ++i) {
            const double sign = in_a[i] ? -1.0 : 1.0;
            s += sign * k.row(i).transpose();
            const double candidate = best_column_split(s);
            if (candidate > best + 1e-15) {
                best = candidate;
                in_a[i] = !in_a[i];
                improved = true;
            } else {
                s -= sign * k.row(i).transpose();
            }
        }
    }
    return best;
}

}  // namespace

double cut_norm_exact(const Matrix& step_kernel) {
    const int m = static_cast<int>(step_kernel.rows());
    require(m >= 1 && step_kernel.cols() == m, "cut_norm_exact: kernel must be square");
    require(m <= kCutNormExhaustiveCap,
            "cut_norm_exact: too many blocks for exhaustive mode; use cut_norm_lower_bound");
    // Gray-code walk over row subsets A; column sums are updated incrementally
    // and the optimal B for each A is the positive (or negative) support of s.
    Vector s = Vector::Zero(m);
    double best = 0.0;
    std::uint32_t gray_prev = 0;
    const std::uint64_t total = 1ull << m;
    for (std::uint64_t it = 1; it < total; ++it) {
        const std::uint32_t gray = static_cast<std::uint32_t>(it ^ (it >> 1));
        const std::uint32_t changed = gray ^ gray_prev;
        const int row = std::countr_zero(changed);
        s += ((gray & changed) ? 1.0 : -1.0) * step_kernel.row(row).transpose();
        gray_prev = gray;
        best = std::max(best, best_column_split(s));
    }
    return best / (static_cast<double>(m) * m);
}

double cut_norm_exact(const Graphon& g) { return cut_norm_exact(g.values()); }

double cut_norm_lower_bound(const Matrix& step_kernel, int iterations, std::uint64_t seed) {
    const int m = static_cast<int>(step_kernel.rows());
    require(m >= 1 && step_kernel.cols() == m, "cut_norm_lower_bound: kernel must be square");
    require(iterations >= 1, "cut_norm_lower_bound: iterations must be >= 1");
    CounterRng rng(seed, streams::kCutNormSearch);
    double best = 0.0;
    for (int it = 0; it < iterations; ++it) {
        std::vector<char> in_a(m, 0);
        Vector s = Vector::Zero(m);
        for (int i = 0; i < m; ++i) {
            if (rng.uniform(static_cast<std::uint32_t>(it), static_cast<std::uint32_t>(i)) < 0.5) {
                in_a[i] = 1;
                s += step_kernel.row(i).transpose();
            }
        }
        best = std::max(best, local_search_from(step_kernel, in_a, s));
    }
    return best / (static_cast<double>(m) * m);
}

double cut_norm_lower_bound(const Graphon& g, int iterations, std::uint64_t seed) {
    return cut_norm_lower_bound(g.values(), iterations, seed);
}

namespace {

// Refines f (or the graphon) so both live on the same grid; returns the
// quadrature matrix values/m and the refined samples.
std::pair<Matrix, Vector> align(const Graphon& g, const GridFunction& f, int cap) {
    const int mg = g.block_count();
    const int mf = f.resolution();
    const int m = lcm_int(mg, mf);
    require(m <= cap, "kernel_apply: blocks exceed the resolution cap");
    Matrix values = (m == mg) ? g.values() : refine_blocks(g.values(), m / mg);
    Vector samples = (m == mf) ? f.samples : f.refined(m / mf).samples;
    return {std::move(values), std::move(samples)};
}

}  // namespace

GridFunction kernel_apply(const Graphon& g, const GridFunction& f, int resolution_cap) {
    auto [values, samples] = align(g, f, resolution_cap);
    const int m = static_cast<int>(values.rows());
    return GridFunction(values * samples / m);
}

GridFunction kernel_exponential_apply(const Graphon& g, const GridFunction& f, double t,
                                      int resolution_cap) {
    require(t >= 0.0, "kernel_exponential_apply: t must be >= 0");
    auto [values, samples] = align(g, f, resolution_cap);
    const int m = static_cast<int>(values.rows());
    const Matrix quadrature = values / m;
    return GridFunction(matrix_exponential(t * quadrature) * samples);
}

Matrix matrix_exponential(const Matrix& a) {
    require(a.rows() == a.cols(), "matrix_exponential: matrix must be square");
    return a.exp();
}

}  // namespace graphonlab
