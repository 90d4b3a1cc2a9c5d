#include "graphonlab/hierarchy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace graphonlab {

namespace {

std::vector<std::uint32_t> list_free_bits(int n, std::uint32_t base) {
    std::vector<std::uint32_t> bits;
    for (int b = 0; b < n; ++b)
        if (!(base & (1u << b))) bits.push_back(static_cast<std::uint32_t>(b));
    return bits;
}

}  // namespace

SubsetFunction::SubsetFunction(int n, double fill) : SubsetFunction(n, 0u, fill) {}

SubsetFunction::SubsetFunction(int n, std::uint32_t base, double fill) : n_(n), base_(base) {
    require(n >= 1 && n <= kSubsetCap, "SubsetFunction: N must be in [1, 20]");
    require((base & ~full_mask()) == 0, "SubsetFunction: base must be a subset of [N]");
    free_bits_ = list_free_bits(n_, base_);
    values_.assign(std::size_t{1} << free_bits_.size(), fill);
}

std::size_t SubsetFunction::index_of(std::uint32_t subset) const {
    require(contains(subset) && (subset & ~full_mask()) == 0,
            "SubsetFunction: subset outside the stored family");
    std::size_t idx = 0;
    for (std::size_t b = 0; b < free_bits_.size(); ++b)
        if (subset & (1u << free_bits_[b])) idx |= std::size_t{1} << b;
    return idx;
}

std::vector<std::uint32_t> SubsetFunction::family() const {
    std::vector<std::uint32_t> out;
    out.reserve(values_.size());
    for (std::size_t idx = 0; idx < values_.size(); ++idx) {
        std::uint32_t subset = base_;
        for (std::size_t b = 0; b < free_bits_.size(); ++b)
            if (idx & (std::size_t{1} << b)) subset |= 1u << free_bits_[b];
        out.push_back(subset);
    }
    std::sort(out.begin(), out.end());
    return out;
}

double subset_generator_apply(const InteractionMatrix& xi, const SubsetFunction& f,
                              std::uint32_t v) {
    const int n = xi.size();
    require(n == f.particle_count(), "subset_generator_apply: size mismatch");
    require(f.contains(v), "subset_generator_apply: v outside the stored family");
    require(v != 0, "subset_generator_apply: v must be nonempty");
    if (v == f.full_mask()) return 0.0;
    const double fv = f(v);
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
        if (v & (1u << k)) continue;
        const double jump = f(v | (1u << k)) - fv;
        if (jump == 0.0) continue;
        double weight = 0.0;
        for (int i = 0; i < n; ++i)
            if (v & (1u << i)) weight += xi.entry(i, k);
        acc += weight * jump;
    }
    return acc;
}

namespace {

std::vector<int> mask_members(int n, std::uint32_t v) {
    std::vector<int> members;
    for (int i = 0; i < n; ++i)
        if (v & (1u << i)) members.push_back(i);
    return members;
}

}  // namespace

double source_term(const InteractionMatrix& xi, const std::vector<int>& v) {
    require(!v.empty(), "source_term: v must be nonempty");
    double acc = 0.0;
    for (int i : v) {
        double row = 0.0;
        for (int j : v) row += xi.entry(i, j);
        acc += row * row;
    }
    return acc;
}

double source_term(const InteractionMatrix& xi, std::uint32_t v) {
    require(v != 0, "source_term: v must be nonempty");
    return source_term(xi, mask_members(xi.size(), v));
}

double interaction_bound(const InteractionMatrix& xi, const std::vector<int>& v) {
    require(!v.empty(), "interaction_bound: v must be nonempty");
    const int n = xi.size();
    const double size = static_cast<double>(v.size());

    double delta = 0.0, sum_sq = 0.0, sum_gram = 0.0;
    for (int i : v) {
        for (int j : v) {
            const double x = xi.entry(i, j);
            delta = std::max(delta, x);
            sum_sq += x * x;
            double gram = 0.0;  // (xi^T xi + xi xi^T)_{ij}
            for (int k = 0; k < n; ++k)
                gram += xi.entry(k, i) * xi.entry(k, j) + xi.entry(i, k) * xi.entry(j, k);
            sum_gram += gram;
        }
    }
    return (delta * size + 1.0) * (sum_sq + delta * sum_gram + delta * delta * size);
}

double interaction_bound(const InteractionMatrix& xi, std::uint32_t v) {
    require(v != 0, "interaction_bound: v must be nonempty");
    return interaction_bound(xi, mask_members(xi.size(), v));
}

SubsetFunction solve_hierarchy_ode(const InteractionMatrix& xi, const SubsetFunction& z0,
                                   double c_scale, double T, double dt) {
    const int n = xi.size();
    require(n == z0.particle_count(), "solve_hierarchy_ode: size mismatch");
    require(n <= kSubsetCap, "solve_hierarchy_ode: N over the subset cap");
    require(dt > 0.0 && T >= 0.0, "solve_hierarchy_ode: need dt > 0, T >= 0");

    const auto family = z0.family();
    // Drop the empty set if present: the hierarchy is defined on nonempty v.
    std::vector<std::uint32_t> active;
    active.reserve(family.size());
    for (auto v : family)
        if (v != 0) active.push_back(v);

    std::vector<double> source(active.size());
    for (std::size_t a = 0; a < active.size(); ++a)
        source[a] = c_scale * source_term(xi, active[a]);

    const int steps = std::max(1, static_cast<int>(std::ceil(T / dt - 1e-9)));
    const double h = T / steps;

    SubsetFunction z = z0;
    SubsetFunction stage = z0;
    std::vector<double> k1(active.size()), k2(active.size()), k3(active.size()),
        k4(active.size());
    const auto rhs = [&](const SubsetFunction& state, std::vector<double>& out) {
        const auto eval = [&](std::size_t a) {
            out[a] = subset_generator_apply(xi, state, active[a]) + source[a];
        };
        if (active.size() < 2048) {
            for (std::size_t a = 0; a < active.size(); ++a) eval(a);
        } else {
            parallel_for(active.size(), eval);
        }
    };
    for (int step = 0; step < steps; ++step) {
        rhs(z, k1);
        for (std::size_t a = 0; a < active.size(); ++a)
            stage.at(active[a]) = z(active[a]) + 0.5 * h * k1[a];
        rhs(stage, k2);
        for (std::size_t a = 0; a < active.size(); ++a)
            stage.at(active[a]) = z(active[a]) + 0.5 * h * k2[a];
        rhs(stage, k3);
        for (std::size_t a = 0; a < active.size(); ++a)
            stage.at(active[a]) = z(active[a]) + h * k3[a];
        rhs(stage, k4);
        for (std::size_t a = 0; a < active.size(); ++a)
            z.at(active[a]) += h / 6.0 * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]);
    }
    return z;
}

std::vector<ComparisonRow> comparison_check(const InteractionMatrix& xi, double T,
                                            double c_scale, double dt) {
    const int n = xi.size();
    SubsetFunction z0(n, 0.0);
    std::vector<double> bounds(z0.family_size(), 0.0);
    for (std::uint32_t v = 1; v <= z0.full_mask(); ++v) {
        bounds[v] = interaction_bound(xi, v);
        z0.at(v) = bounds[v];
    }
    const SubsetFunction z = solve_hierarchy_ode(xi, z0, c_scale, T, dt);

    std::vector<ComparisonRow> rows(n);
    for (int k = 1; k <= n; ++k) rows[k - 1].subset_size = k;
    for (std::uint32_t v = 1; v <= z0.full_mask(); ++v) {
        ComparisonRow& row = rows[std::popcount(v) - 1];
        const double value = z(v);
        const double bound = bounds[v];
        const double ratio = bound > 0.0 ? value / bound : 0.0;
        row.max_ratio = std::max(row.max_ratio, ratio);
        row.max_value = std::max(row.max_value, value);
        row.max_bound = std::max(row.max_bound, bound);
    }
    return rows;
}

}  // namespace graphonlab
