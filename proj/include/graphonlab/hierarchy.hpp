#pragma once

#include <cstdint>
#include <vector>

#include "graphonlab/common.hpp"
#include "graphonlab/graphon.hpp"

namespace graphonlab {

inline constexpr int kSubsetCap = 20;

/// A real-valued function of subsets of {0,...,N-1}, stored densely over all
/// subsets or over the supersets of a fixed base set. Subsets are bitmasks.
class SubsetFunction {
public:
    /// Dense over all 2^N subsets, initialized to `fill`.
    SubsetFunction(int n, double fill = 0.0);
    /// Restricted to supersets of `base`; 2^(N - |base|) values.
    SubsetFunction(int n, std::uint32_t base, double fill);

    int particle_count() const { return n_; }
    std::uint32_t base() const { return base_; }
    std::uint32_t full_mask() const { return (n_ == 32) ? ~0u : ((1u << n_) - 1u); }
    std::size_t family_size() const { return values_.size(); }

    bool contains(std::uint32_t subset) const { return (subset & base_) == base_; }
    double operator()(std::uint32_t subset) const { return values_[index_of(subset)]; }
    double& at(std::uint32_t subset) { return values_[index_of(subset)]; }
    const std::vector<double>& raw() const { return values_; }
    std::vector<double>& raw() { return values_; }

    /// Members of the family in increasing bitmask order.
    std::vector<std::uint32_t> family() const;

private:
    std::size_t index_of(std::uint32_t subset) const;
    int n_ = 0;
    std::uint32_t base_ = 0;
    std::vector<std::uint32_t> free_bits_;  // bit positions not in base, ascending
    std::vector<double> values_;
};

/// Generator of the upward coupling:
/// (A F)(v) = sum_{i in v} sum_{k not in v} xi_{ik} (F(v + k) - F(v)).
/// Zero on the full set.
double subset_generator_apply(const InteractionMatrix& xi, const SubsetFunction& f,
                              std::uint32_t v);

/// C(v) = sum_{i in v} ( sum_{j in v} xi_{ij} )^2.
double source_term(const InteractionMatrix& xi, std::uint32_t v);
double source_term(const InteractionMatrix& xi, const std::vector<int>& v);

/// Envelope bound for the subset v, with delta = max_{(i,j) in v^2} xi_{ij}:
/// (delta |v| + 1) * ( sum_{v^2} xi^2 + delta * sum_{v^2} (xi^T xi + xi xi^T)
///                     + delta^2 |v| ).
/// The index-vector overload serves populations beyond the bitmask cap.
double interaction_bound(const InteractionMatrix& xi, std::uint32_t v);
double interaction_bound(const InteractionMatrix& xi, const std::vector<int>& v);

/// Solves dz_v/dt = (A z)_v + c_scale * C(v) by RK4. The coupling is upward
/// (v reads only strict supersets), so the system is triangular by
/// cardinality; within a cardinality class updates are independent.
SubsetFunction solve_hierarchy_ode(const InteractionMatrix& xi, const SubsetFunction& z0,
                                   double c_scale, double T, double dt = 1e-3);

struct ComparisonRow {
    int subset_size = 0;
    double max_ratio = 0.0;   // max over v of z_v(T) / bound(v), 0/0 read as 0
    double max_value = 0.0;   // max over v of z_v(T)
    double max_bound = 0.0;   // max over v of bound(v)
};

/// Solves the hierarchy from z0_v = bound(v) and tabulates, per cardinality,
/// the worst ratio of solution to bound at time T.
std::vector<ComparisonRow> comparison_check(const InteractionMatrix& xi, double T,
                                            double c_scale = 1.0, double dt = 1e-3);

}  // namespace graphonlab
