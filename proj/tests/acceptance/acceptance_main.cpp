// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Criteria 1-3 and 5 run single-threaded on purpose; their time budgets are
// part of the gate.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "graphonlab/density.hpp"
#include "graphonlab/gaussian.hpp"
#include "graphonlab/harness.hpp"
#include "graphonlab/hierarchy.hpp"
#include "graphonlab/quadrature.hpp"
#include "graphonlab/rng.hpp"
#include "graphonlab/simulate.hpp"

using namespace graphonlab;
using nlohmann::json;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Check {
    std::ostringstream out;
    bool pass = true;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            out << (out.tellp() > 0 ? "; " : "") << "FAILED " << what;
        }
    }
    void note(const std::string& text) {
        out << (out.tellp() > 0 ? "; " : "") << text;
    }
    Outcome done() const { return {pass, out.str()}; }
};

struct ScopedThreads {
    explicit ScopedThreads(const char* count) { setenv("GRAPHONLAB_THREADS", count, 1); }
    ~ScopedThreads() { unsetenv("GRAPHONLAB_THREADS"); }
};

json study_graphon() {
    return json{{"m", 4},
                {"values",
                 {{0.6, 0.5, 0.4, 0.5},
                  {0.5, 0.6, 0.5, 0.4},
                  {0.4, 0.5, 0.6, 0.5},
                  {0.5, 0.4, 0.5, 0.6}}}};
}

json study_perturbation() {
    return json{{1, -1, 0, 1}, {-1, 1, 1, 0}, {0, 1, -1, -1}, {1, 0, -1, 1}};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Population scaling of H + I at fixed subset size, exact Gaussian laws.
Outcome criterion_scaling_in_population() {
    ScopedThreads single("1");
    const auto t0 = std::chrono::steady_clock::now();
    json cfg{{"experiment", "scaling_thm22"},
             {"regime", "oracle"},
             {"graphon", {{"constant", 1.0}}},
             {"kernel", {{"kind", "linear_difference"}, {"rate", 1.0}}},
             {"N_list", {32, 64, 128, 256, 512}},
             {"subset_sizes", {2}},
             {"T", 1.0},
             {"dt", 1e-3},
             {"init", {{"mean", 0.0}, {"variance", 1.0}}},
             {"seed", 20250801}};
    const ExperimentResult result = run_scaling_thm22(ExperimentConfig::from_json(cfg));
    const double elapsed = seconds_since(t0);
    const auto& fit = result.summary.at("fits")[0];
    const double slope = fit.at("slope").get<double>();
    const double r2 = fit.at("r_squared").get<double>();
    Check check;
    check.expect(slope >= -2.3 && slope <= -1.7, "slope in [-2.3, -1.7]");
    check.expect(r2 >= 0.98, "R^2 >= 0.98");
    check.expect(elapsed < 120.0, "runtime < 2 min single-threaded");
    std::ostringstream detail;
    detail << "slope=" << slope << " R2=" << r2 << " (" << elapsed << " s)";
    check.note(detail.str());
    return check.done();
}

// 2. Uniform constant across subset sizes at fixed population.
Outcome criterion_scaling_in_subset_size() {
    ScopedThreads single("1");
    const auto t0 = std::chrono::steady_clock::now();
    json cfg{{"experiment", "scaling_thm22"},
             {"regime", "oracle"},
             {"graphon", {{"constant", 1.0}}},
             {"kernel", {{"kind", "linear_difference"}, {"rate", 1.0}}},
             {"N_list", {256}},
             {"subset_sizes", {2, 4, 8, 16}},
             {"T", 1.0},
             {"dt", 1e-3},
             {"init", {{"mean", 0.0}, {"variance", 1.0}}},
             {"seed", 20250802}};
    const ExperimentResult result = run_scaling_thm22(ExperimentConfig::from_json(cfg));
    const double elapsed = seconds_since(t0);
    const double spread = result.summary.at("ratio_spread")[0].at("spread").get<double>();
    Check check;
    check.expect(spread < 10.0, "(H+I)/(k^2/N^2) spread < 10 across k");
    check.expect(elapsed < 120.0, "runtime < 2 min");
    std::ostringstream detail;
    detail << "spread=" << spread << " (" << elapsed << " s)";
    check.note(detail.str());
    return check.done();
}

// 3. Perturbation stability of the block mean-field laws, exact Gaussians.
Outcome criterion_stability_oracle() {
    ScopedThreads single("1");
    const auto t0 = std::chrono::steady_clock::now();
    json cfg{{"experiment", "stability_thm24"},
             {"regime", "oracle"},
             {"graphon", study_graphon()},
             {"perturbation", study_perturbation()},
             {"epsilons", {0.02, 0.04, 0.08, 0.16, 0.32}},
             {"kernel", {{"kind", "linear_difference"}, {"rate", 1.0}}},
             {"T", 1.0},
             {"dt", 1e-3},
             {"block_init",
              {{"means", {-1.5, -0.5, 0.5, 1.5}}, {"variances", {1, 1, 1, 1}}}},
             {"seed", 20250803}};
    const ExperimentResult result = run_stability_thm24(ExperimentConfig::from_json(cfg));
    const double elapsed = seconds_since(t0);
    const double slope_h = result.summary.at("slope_H").at("slope").get<double>();
    const double r2_h = result.summary.at("slope_H").at("r_squared").get<double>();
    const double slope_hi = result.summary.at("slope_H_plus_I").at("slope").get<double>();
    const double r2_hi = result.summary.at("slope_H_plus_I").at("r_squared").get<double>();
    Check check;
    check.expect(slope_h >= 1.7 && slope_h <= 2.3, "entropy slope in [1.7, 2.3]");
    check.expect(slope_hi >= 1.7 && slope_hi <= 2.3, "entropy+fisher slope in [1.7, 2.3]");
    check.expect(r2_h >= 0.98 && r2_hi >= 0.98, "R^2 >= 0.98");
    check.expect(elapsed < 60.0, "runtime < 1 min");
    std::ostringstream detail;
    detail << "slope_H=" << slope_h << " slope_HI=" << slope_hi << " (" << elapsed << " s)";
    check.note(detail.str());
    return check.done();
}

// 4. The same stability study on the torus through the grid solver.
Outcome criterion_stability_pde() {
    const auto t0 = std::chrono::steady_clock::now();
    json cfg{{"experiment", "stability_thm24"},
             {"regime", "torus"},
             {"graphon", study_graphon()},
             {"perturbation", study_perturbation()},
             {"epsilons", {0.02, 0.04, 0.08, 0.16, 0.32}},
             {"kernel",
              {{"kind", "sine_torus"}, {"amplitude", 0.3}, {"frequency", 1}, {"period", 4.0}}},
             {"T", 0.5},
             {"grid_n", 1024},
             {"refine_check", true},
             {"block_init",
              {{"means", {0.5, 1.5, 2.5, 3.5}},
               {"variances", {0.05, 0.05, 0.05, 0.05}}}},
             {"seed", 20250804}};
    const ExperimentResult result = run_stability_thm24(ExperimentConfig::from_json(cfg));
    const double elapsed = seconds_since(t0);
    const double slope = result.summary.at("slope_H_plus_I").at("slope").get<double>();
    const double refinement =
        result.summary.at("refinement").at("max_rel_change").get<double>();
    Check check;
    check.expect(slope >= 1.6 && slope <= 2.4, "slope in [1.6, 2.4]");
    check.expect(refinement <= 0.02, "doubling n moves each I+H by <= 2%");
    check.expect(elapsed < 600.0, "runtime < 10 min");
    std::ostringstream detail;
    detail << "slope=" << slope << " max_rel_change=" << refinement << " (" << elapsed
           << " s)";
    check.note(detail.str());
    return check.done();
}

// 5. Closed forms against Simpson quadrature of the defining integrals.
Outcome criterion_closed_form_validation() {
    ScopedThreads single("1");
    const auto t0 = std::chrono::steady_clock::now();
    const CounterRng rng(20250805, streams::kPropertySweep);
    Check check;
    double worst = 0.0;
    for (int dim = 1; dim <= 2; ++dim) {
        for (std::uint32_t c = 0; c < 50; ++c) {
            Vector mp(dim), mq(dim);
            Matrix ap(dim, dim), aq(dim, dim);
            std::uint32_t slot = 0;
            const auto draw = [&](std::uint32_t salt) {
                return 2.0 * rng.uniform(c, salt, static_cast<std::uint32_t>(dim), slot++) - 1.0;
            };
            for (int i = 0; i < dim; ++i) {
                mp(i) = draw(1);
                mq(i) = draw(2);
            }
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) {
                    ap(i, j) = 0.8 * draw(3);
                    aq(i, j) = 0.8 * draw(4);
                }
            const GaussianLaw p(mp, Matrix(ap * ap.transpose() +
                                           0.3 * Matrix::Identity(dim, dim)));
            const GaussianLaw q(mq, Matrix(aq * aq.transpose() +
                                           0.3 * Matrix::Identity(dim, dim)));
            const int points = dim == 1 ? 4001 : 1501;
            const double h_gap = std::abs(relative_entropy_gaussian(p, q) -
                                          gaussian_entropy_quadrature(p, q, points)) /
                                 gaussian_entropy_quadrature(p, q, points);
            const double i_gap = std::abs(relative_fisher_gaussian(p, q) -
                                          gaussian_fisher_quadrature(p, q, points)) /
                                 gaussian_fisher_quadrature(p, q, points);
            worst = std::max({worst, h_gap, i_gap});
        }
    }
    const double elapsed = seconds_since(t0);
    check.expect(worst <= 1e-6, "closed forms within 1e-6 of quadrature");
    check.expect(elapsed < 60.0, "runtime < 1 min");
    std::ostringstream detail;
    detail << "worst rel err=" << worst << " over 100 pairs (" << elapsed << " s)";
    check.note(detail.str());
    return check.done();
}

// 6. Positivity and growth of the kernel operator exponential.
Outcome criterion_operator_exponential() {
    const CounterRng rng(20250806, streams::kPropertySweep);
    Check check;
    bool positive = true, envelope = true;
    for (std::uint32_t c = 0; c < 100; ++c) {
        const int m = 2 + static_cast<int>(c % 5);
        Matrix values(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                const double v = rng.uniform(c, static_cast<std::uint32_t>(i),
                                             static_cast<std::uint32_t>(j));
                values(i, j) = v;
                values(j, i) = v;
            }
        const Graphon g(values);
        Vector f(m);
        for (int i = 0; i < m; ++i)
            f(i) = 2.0 * rng.uniform(c, static_cast<std::uint32_t>(i), 99);
        const double t = 5.0 * rng.uniform(c, 0, 98) + 1e-3;
        positive = positive &&
                   kernel_exponential_apply(g, GridFunction(f), t).samples.minCoeff() >= -1e-12;
        const double growth = g.max_row_mean();
        for (double te : {0.1, 1.0, 5.0}) {
            const double sup =
                kernel_exponential_apply(g, GridFunction::constant(1.0, m), te)
                    .samples.maxCoeff();
            envelope = envelope && sup <= std::exp(growth * te) * (1.0 + 1e-9);
        }
    }
    check.expect(positive, "exp(tA) preserves nonnegativity on 100 random triples");
    check.expect(envelope, "sup exp(tA)1 <= exp(Ct)(1+1e-9) for t in {0.1, 1, 5}");
    double worst = 0.0;
    for (double t : {0.1, 1.0, 5.0}) {
        const double value =
            kernel_exponential_apply(Graphon::constant(1.0), GridFunction::constant(1.0, 1), t)
                .samples(0);
        worst = std::max(worst, std::abs(value - std::exp(t)));
    }
    check.expect(worst <= 1e-9, "exact exp(t) on the constant-one graphon within 1e-9");
    std::ostringstream detail;
    detail << "exp(t) abs err=" << worst;
    check.note(detail.str());
    return check.done();
}

// 7. Conservation, heat decay and Gibbs stationarity of the grid solver.
Outcome criterion_fokker_planck() {
    Check check;
    // Mass conservation, tracked after every step of an advected run.
    {
        const TorusGrid1D grid(1024, 1.0);
        DensityGrid p = DensityGrid::wrapped_gaussian(grid, 0.3, 0.01);
        Vector drift(grid.n);
        for (int i = 0; i < grid.n; ++i)
            drift(i) = 0.25 * std::sin(kTwoPi * grid.center(i));
        const double dt = fp_stable_dt(grid, 0.25);
        double worst_mass = 0.0;
        for (int s = 0; s < 20000; ++s) {
            p = fp_step(p, drift, dt);
            worst_mass = std::max(worst_mass, std::abs(p.mass() - 1.0));
        }
        check.expect(worst_mass <= 1e-10, "mass within 1e-10 after every step");
        std::ostringstream detail;
        detail << "mass dev=" << worst_mass;
        check.note(detail.str());
    }
    // Heat-mode decay at n = 1024.
    {
        const TorusGrid1D grid(1024, 1.0);
        Vector values(grid.n);
        for (int i = 0; i < grid.n; ++i) values(i) = 1.0 + std::cos(kTwoPi * grid.center(i));
        values /= grid.h() * values.sum();
        DensityGrid p(grid, values);
        const double t_end = 0.01;
        const double dt = fp_stable_dt(grid, 0.0);
        const long steps = static_cast<long>(std::ceil(t_end / dt));
        const Vector none = Vector::Zero(grid.n);
        for (long s = 0; s < steps; ++s) p = fp_step(p, none, t_end / steps);
        double mode_c = 0.0, mode_s = 0.0;
        for (int i = 0; i < grid.n; ++i) {
            mode_c += std::cos(kTwoPi * grid.center(i)) * p.values(i);
            mode_s += std::sin(kTwoPi * grid.center(i)) * p.values(i);
        }
        const double amplitude = 2.0 * grid.h() * std::hypot(mode_c, mode_s);
        const double expected = std::exp(-kTwoPi * kTwoPi * t_end);
        const double rel = std::abs(amplitude - expected) / expected;
        check.expect(rel <= 1e-3, "first-mode decay matches exp(-4 pi^2 t) to 1e-3");
        std::ostringstream detail;
        detail << "decay rel err=" << rel;
        check.note(detail.str());
    }
    // Gibbs stationarity over one unit of time at n = 1024.
    {
        const TorusGrid1D grid(1024, 1.0);
        const double amplitude = 0.1;
        Vector drift(grid.n), values(grid.n);
        for (int i = 0; i < grid.n; ++i) {
            const double x = grid.center(i);
            drift(i) = -amplitude * kTwoPi * std::sin(kTwoPi * x);
            values(i) = std::exp(amplitude * std::cos(kTwoPi * x));
        }
        values /= grid.h() * values.sum();
        const DensityGrid start(grid, values);
        DensityGrid p = start;
        const double dt = fp_stable_dt(grid, amplitude * kTwoPi);
        const long steps = static_cast<long>(std::ceil(1.0 / dt));
        for (long s = 0; s < steps; ++s) p = fp_step(p, drift, 1.0 / steps);
        const double sup = (p.values - start.values).cwiseAbs().maxCoeff();
        check.expect(sup <= 1e-6, "Gibbs drift <= 1e-6 per unit time");
        std::ostringstream detail;
        detail << "gibbs drift=" << sup;
        check.note(detail.str());
    }
    return check.done();
}

// 8. Pinsker, nonnegativity and marginalization monotonicity.
Outcome criterion_information_properties() {
    Check check;
    const CounterRng rng(20250808, streams::kPropertySweep);
    // Grid pairs.
    bool grid_pinsker = true;
    const TorusGrid1D grid(256, 1.0);
    for (std::uint32_t c = 0; c < 100; ++c) {
        Vector pv(grid.n), qv(grid.n);
        for (int i = 0; i < grid.n; ++i) {
            const double x = grid.center(i);
            double vp = 1.0, vq = 1.0;
            for (int k = 1; k <= 3; ++k) {
                vp += (rng.uniform(c, static_cast<std::uint32_t>(k), 0) - 0.5) *
                      std::cos(kTwoPi * k * x) / k;
                vq += (rng.uniform(c, static_cast<std::uint32_t>(k), 1) - 0.5) *
                      std::sin(kTwoPi * k * x) / k;
            }
            pv(i) = std::max(vp, 1e-3);
            qv(i) = std::max(vq, 1e-3);
        }
        pv /= grid.h() * pv.sum();
        qv /= grid.h() * qv.sum();
        const DensityGrid p(grid, pv), q(grid, qv);
        const double h = entropy_grid(p, q);
        grid_pinsker = grid_pinsker && h >= 0.0 && fisher_grid(p, q) >= 0.0 &&
                       tv_grid(p, q) <= std::sqrt(h / 2.0) + 1e-12;
    }
    check.expect(grid_pinsker, "Pinsker + nonnegativity on 100 grid pairs");

    // Gaussian pairs.
    bool gaussian_pinsker = true;
    for (std::uint32_t c = 0; c < 100; ++c) {
        const int dim = 1 + static_cast<int>(c % 2);
        Vector mp(dim), mq(dim);
        Matrix ap(dim, dim), aq(dim, dim);
        std::uint32_t slot = 0;
        const auto draw = [&](std::uint32_t salt) {
            return 2.0 * rng.uniform(c, salt, 7, slot++) - 1.0;
        };
        for (int i = 0; i < dim; ++i) {
            mp(i) = draw(1);
            mq(i) = draw(2);
        }
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                ap(i, j) = 0.7 * draw(3);
                aq(i, j) = 0.7 * draw(4);
            }
        const GaussianLaw p(mp, Matrix(ap * ap.transpose() + 0.3 * Matrix::Identity(dim, dim)));
        const GaussianLaw q(mq, Matrix(aq * aq.transpose() + 0.3 * Matrix::Identity(dim, dim)));
        const double h = relative_entropy_gaussian(p, q);
        const double tv = gaussian_tv_quadrature(p, q, dim == 1 ? 2001 : 401);
        gaussian_pinsker = gaussian_pinsker && h >= 0.0 &&
                           relative_fisher_gaussian(p, q) >= 0.0 &&
                           tv <= std::sqrt(h / 2.0) + 1e-9;
    }
    check.expect(gaussian_pinsker, "Pinsker + nonnegativity on 100 Gaussian pairs");

    // Monotone growth of H and I along nested subsets, product references.
    bool monotone = true;
    for (std::uint32_t c = 0; c < 50; ++c) {
        const int n = 4;
        Matrix a(n, n);
        Vector mean(n);
        std::uint32_t slot = 0;
        for (int i = 0; i < n; ++i) {
            mean(i) = rng.uniform(c, 11, 8, slot++) - 0.5;
            for (int j = 0; j < n; ++j) a(i, j) = 0.6 * (rng.uniform(c, 12, 8, slot++) - 0.5);
        }
        const JointGaussianState joint(
            n, 1, mean, Matrix(a * a.transpose() + 0.3 * Matrix::Identity(n, n)));
        std::vector<GaussianLaw> marginals;
        for (int i = 0; i < n; ++i)
            marginals.emplace_back(Vector::Constant(1, rng.uniform(c, 13, 8, slot++) - 0.5),
                                   Matrix::Constant(1, 1, 0.4 + rng.uniform(c, 14, 8, slot++)));
        const auto [h1, i1] = subset_info(joint, marginals, {1});
        const auto [h2, i2] = subset_info(joint, marginals, {1, 2});
        const auto [h3, i3] = subset_info(joint, marginals, {1, 2, 3});
        monotone = monotone && h1 <= h2 + 1e-10 && h2 <= h3 + 1e-10 && i1 <= i2 + 1e-10 &&
                   i2 <= i3 + 1e-10;
    }
    check.expect(monotone, "H and I nondecreasing along nested subsets (50 pairs)");
    return check.done();
}

// 9. Hierarchy solver: closed form, comparison principle, bound formula.
Outcome criterion_hierarchy() {
    Check check;
    // Two-particle closed form for uniform weights 1/2:
    //   z_full(t) = 2 t,  z_single(t) = 2 t - 3.5 + 3.5 exp(-t/2).
    {
        const InteractionMatrix xi(2, Matrix::Constant(2, 2, 0.5));
        const SubsetFunction z = solve_hierarchy_ode(xi, SubsetFunction(2, 0.0), 1.0, 1.0, 1e-3);
        const double gap = std::max(std::abs(z(0b11) - 2.0),
                                    std::abs(z(0b01) - (2.0 - 3.5 + 3.5 * std::exp(-0.5))));
        check.expect(gap <= 1e-8, "two-particle closed form within 1e-8");
        std::ostringstream detail;
        detail << "closed-form gap=" << gap;
        check.note(detail.str());
    }
    // Comparison principle and positivity on random instances.
    {
        const CounterRng rng(20250809, streams::kPropertySweep);
        bool ordered = true, positive = true;
        for (std::uint32_t c = 0; c < 100; ++c) {
            const int n = 4;
            Matrix values(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    const double v = rng.uniform(c, static_cast<std::uint32_t>(i),
                                                 static_cast<std::uint32_t>(j));
                    values(i, j) = v;
                    values(j, i) = v;
                }
            const InteractionMatrix xi = interaction_from_graphon(Graphon(values), n);
            SubsetFunction lo(n, 0.0), hi(n, 0.0);
            for (std::uint32_t v = 1; v <= lo.full_mask(); ++v) {
                const double base = rng.uniform(c, v, 21);
                lo.at(v) = base;
                hi.at(v) = base + rng.uniform(c, v, 22);
            }
            const SubsetFunction zl = solve_hierarchy_ode(xi, lo, 1.0, 1.0, 1e-2);
            const SubsetFunction zh = solve_hierarchy_ode(xi, hi, 1.0, 1.0, 1e-2);
            for (std::uint32_t v = 1; v <= lo.full_mask(); ++v) {
                ordered = ordered && zl(v) <= zh(v) + 1e-12;
                positive = positive && zl(v) >= -1e-12;
            }
        }
        check.expect(ordered, "comparison principle on 100 random instances");
        check.expect(positive, "positivity on 100 random instances");
    }
    // Bound formula on uniform matrices, including the 1.3125 instance.
    {
        bool exact = true;
        for (int n : {2, 4, 8, 16}) {
            const InteractionMatrix xi(n, Matrix::Constant(n, n, 1.0 / n));
            for (int k = 1; k <= std::min(6, n); ++k) {
                const std::uint32_t v = (1u << k) - 1;
                const double expected = (static_cast<double>(k) / n + 1.0) *
                                        (3.0 * k * k + k) / (static_cast<double>(n) * n);
                exact = exact &&
                        std::abs(interaction_bound(xi, v) - expected) <= 1e-14 * expected;
            }
        }
        const double instance =
            interaction_bound(InteractionMatrix(4, Matrix::Constant(4, 4, 0.25)), 0b0011);
        exact = exact && instance == 1.3125;
        check.expect(exact, "uniform-matrix bound formula exact (incl. 1.3125)");
    }
    return check.done();
}

// 10. Simulation against the exact Gaussian law; weak order one in dt.
Outcome criterion_simulation_vs_oracle() {
    const WeakOrderStudy study = weak_order_study(20250810, 100000, {4e-3, 2e-3, 1e-3});
    Check check;
    const double var_gap = std::abs(study.variances.back() - study.reference);
    check.expect(var_gap <= 3.0 * study.std_error,
                 "Var(X1 - X2)(1) within 3 s.e. of 1 - exp(-2) at M = 1e5");
    check.expect(study.slope >= 0.7 && study.slope <= 1.3, "weak-order slope in [0.7, 1.3]");
    std::ostringstream detail;
    detail << "var gap=" << var_gap << " (3 s.e.=" << 3.0 * study.std_error
           << ") slope=" << study.slope;
    check.note(detail.str());
    return check.done();
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"population scaling of H+I (exact laws)", criterion_scaling_in_population},
        {"subset-size uniformity of (H+I)/(k^2/N^2)", criterion_scaling_in_subset_size},
        {"perturbation stability, exact laws", criterion_stability_oracle},
        {"perturbation stability, torus grid solver", criterion_stability_pde},
        {"closed forms vs quadrature", criterion_closed_form_validation},
        {"kernel operator exponential properties", criterion_operator_exponential},
        {"grid solver conservation, decay, stationarity", criterion_fokker_planck},
        {"Pinsker, nonnegativity, marginal monotonicity", criterion_information_properties},
        {"hierarchy solver", criterion_hierarchy},
        {"simulation vs exact law, weak order", criterion_simulation_vs_oracle},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criteria[i].second();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        const double elapsed = seconds_since(t0);
        std::printf("[%s] criterion %zu: %s - %s (%.1f s)\n",
                    outcome.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    outcome.detail.c_str(), elapsed);
        std::fflush(stdout);
        if (!outcome.pass) ++failures;
    }
    if (failures > 0) {
        std::printf("%d of %zu criteria failed\n", failures, criteria.size());
        return 1;
    }
    std::printf("all %zu criteria passed\n", criteria.size());
    return 0;
}
