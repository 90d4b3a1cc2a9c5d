#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphonlab/common.hpp"

namespace graphonlab {

/// Step graphon: symmetric piecewise-constant function on [0,1]^2 with values
/// in [0,1], constant on the uniform m x m grid of cells.
class Graphon {
public:
    explicit Graphon(Matrix block_values);

    static Graphon constant(double value, int blocks = 1);

    int block_count() const { return static_cast<int>(values_.rows()); }
    const Matrix& values() const { return values_; }

    /// Pointwise evaluation; (u, v) in [0,1]^2 (1 is folded into the last cell).
    double operator()(double u, double v) const;

    /// Same function represented on factor * block_count() blocks.
    Graphon refined(int factor) const;

    /// Largest row mean, i.e. sup_u of the integral of G(u, .) over [0,1].
    double max_row_mean() const;

    static Graphon load_json(const std::string& path);
    void save_json(const std::string& path) const;

private:
    Matrix values_;
};

/// Piecewise-constant function on [0,1] at a uniform resolution.
struct GridFunction {
    Vector samples;

    GridFunction() = default;
    explicit GridFunction(Vector s);
    static GridFunction constant(double value, int resolution);

    int resolution() const { return static_cast<int>(samples.size()); }
    GridFunction refined(int factor) const;
};

/// N x N nonnegative interaction weights with row sums at most 1. When the
/// matrix comes from a step graphon, the generating block data is kept so
/// that large-N linear algebra can use the low-rank block structure.
class InteractionMatrix {
public:
    InteractionMatrix(int n, Matrix xi);

    int size() const { return n_; }
    const Matrix& xi() const { return xi_; }
    double entry(int i, int j) const { return xi_(i, j); }
    double max_entry() const;
    Vector row_sums() const { return xi_.rowwise().sum(); }

    struct BlockStructure {
        Matrix values;              // m x m block values; xi(i,j) = values(b_i, b_j) / N
        std::vector<int> block_of;  // length N
    };
    const std::optional<BlockStructure>& blocks() const { return blocks_; }

private:
    friend InteractionMatrix interaction_from_graphon(const Graphon&, int);
    int n_;
    Matrix xi_;
    std::optional<BlockStructure> blocks_;
};

/// xi_{ij} = g((i-1/2)/N, (j-1/2)/N) / N (midpoint sampling of each cell).
InteractionMatrix interaction_from_graphon(const Graphon& g, int n);

/// Symmetric Bernoulli adjacency sample: xi_{ij} = A_{ij}/N with
/// A_{ij} = A_{ji} ~ Bernoulli(g at the cell midpoints). Deterministic in seed.
InteractionMatrix sample_bernoulli_matrix(const Graphon& g, int n, std::uint64_t seed);

inline constexpr int kDefaultResolutionCap = 4096;

/// Representations of g1 and g2 on their least common block resolution.
/// Throws if that resolution exceeds the cap.
std::pair<Matrix, Matrix> common_resolution(const Graphon& g1, const Graphon& g2,
                                            int resolution_cap = kDefaultResolutionCap);

/// sup_u of the integral over v of |g1(u,v) - g2(u,v)|; exact for step graphons.
double dist_sup_l1(const Graphon& g1, const Graphon& g2,
                   int resolution_cap = kDefaultResolutionCap);

inline constexpr int kCutNormExhaustiveCap = 22;

/// Exact cut norm of a (possibly signed) step kernel on [0,1]^2:
/// max over block-aligned A, B of |sum_{i in A, j in B} k_{ij}| / m^2.
/// For step kernels the supremum over measurable sets is attained on
/// block-aligned sets. Exhaustive in A (optimal B is greedy), so m <= 22.
double cut_norm_exact(const Matrix& step_kernel);
double cut_norm_exact(const Graphon& g);

/// Randomized local-search lower bound on the cut norm; deterministic in seed
/// and nondecreasing in the iteration count for a fixed seed.
double cut_norm_lower_bound(const Matrix& step_kernel, int iterations, std::uint64_t seed);
double cut_norm_lower_bound(const Graphon& g, int iterations, std::uint64_t seed);

/// Af(u) = integral of g(u,v) f(v) dv, evaluated exactly on the common grid.
GridFunction kernel_apply(const Graphon& g, const GridFunction& f,
                          int resolution_cap = kDefaultResolutionCap);

/// exp(t*A) f via the dense matrix exponential of the block quadrature matrix.
/// Positive and monotone for t >= 0; exp(t*A)1 <= exp(C t) with C the largest
/// row mean of g.
GridFunction kernel_exponential_apply(const Graphon& g, const GridFunction& f, double t,
                                      int resolution_cap = kDefaultResolutionCap);

/// Dense matrix exponential (scaling-and-squaring, Pade approximant).
Matrix matrix_exponential(const Matrix& a);

}  // namespace graphonlab
