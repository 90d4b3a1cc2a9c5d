#include "graphonlab/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include <Eigen/Cholesky>

#include "graphonlab/rng.hpp"

namespace graphonlab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kDivergenceGuard = 1e6;
constexpr int kMinProjectionReplicas = 100;

// Per-particle sufficient statistics that close the law average
// (1/M) sum_r b(x, y_{j,r}) for the supported kernels.
struct MeanFieldStats {
    // linear: cross-replica mean of each particle (N x d).
    Matrix means;
    // sine: first circular harmonics of each particle.
    std::vector<double> cos_amp, sin_amp;
};

void collect_stats(const EnsembleState& state, const DriftKernel& kernel,
                   MeanFieldStats& stats) {
    const int m_rep = state.replicas;
    const int n = state.particles;
    const int d = state.dim;
    if (kernel.kind() == DriftKind::linear_difference) {
        stats.means.setZero(n, d);
        for (int r = 0; r < m_rep; ++r)
            for (int i = 0; i < n; ++i)
                for (int c = 0; c < d; ++c) stats.means(i, c) += state.pos(r, i, c);
        stats.means /= static_cast<double>(m_rep);
    } else if (kernel.kind() == DriftKind::sine_torus) {
        const double omega = kTwoPi * kernel.frequency() / kernel.domain().period;
        stats.cos_amp.assign(n, 0.0);
        stats.sin_amp.assign(n, 0.0);
        for (int r = 0; r < m_rep; ++r)
            for (int i = 0; i < n; ++i) {
                const double angle = omega * state.pos(r, i, 0);
                stats.cos_amp[i] += std::cos(angle);
                stats.sin_amp[i] += std::sin(angle);
            }
        for (int i = 0; i < n; ++i) {
            stats.cos_amp[i] /= m_rep;
            stats.sin_amp[i] /= m_rep;
        }
    }
}

void check_kernel_domain(const DriftKernel& kernel, const EnsembleState& state,
                         const char* who) {
    require(kernel.domain().is_torus() == state.domain.is_torus(),
            std::string(who) + ": kernel and ensemble domains must match");
    if (state.domain.is_torus()) {
        require(std::abs(kernel.domain().period - state.domain.period) < 1e-12,
                std::string(who) + ": torus periods must match");
        require(state.dim == 1, std::string(who) + ": torus ensembles are one-dimensional");
    } else if (kernel.kind() != DriftKind::zero) {
        require(kernel.domain().dim == state.dim,
                std::string(who) + ": kernel dimension must match the ensemble");
    }
}

long step_count(const SimConfig& cfg) {
    return std::max(1L, static_cast<long>(std::ceil(cfg.T / cfg.dt - 1e-9)));
}

}  // namespace

void SimConfig::validate() const {
    require(dt > 0.0 && std::isfinite(dt), "SimConfig: dt must be positive");
    require(T >= dt, "SimConfig: need dt <= T");
    require(T / dt <= 1e7 + 1, "SimConfig: more than 1e7 steps requested");
    require(scheme == Scheme::euler_maruyama, "SimConfig: unknown scheme");
}

EnsembleState::EnsembleState(int replicas_, int particles_, int dim_, Domain domain_)
    : replicas(replicas_), particles(particles_), dim(dim_), domain(domain_) {
    require(replicas >= 1 && particles >= 1 && dim >= 1, "EnsembleState: bad shape");
    require(!domain.is_torus() || dim == 1, "EnsembleState: torus ensembles are 1-d");
    positions.assign(static_cast<std::size_t>(replicas) * particles * dim, 0.0);
}

EnsembleState EnsembleState::at_point(int replicas, int particles, int dim, Domain domain,
                                      double value) {
    EnsembleState e(replicas, particles, dim, domain);
    std::fill(e.positions.begin(), e.positions.end(), domain.wrap(value));
    return e;
}

EnsembleState EnsembleState::gaussian(int replicas, const std::vector<GaussianLaw>& laws,
                                      Domain domain, std::uint64_t seed) {
    require(!laws.empty(), "EnsembleState::gaussian: need at least one law");
    const int d = laws.front().dim();
    EnsembleState e(replicas, static_cast<int>(laws.size()), d, domain);
    std::vector<Matrix> chol;
    chol.reserve(laws.size());
    for (const auto& law : laws) {
        require(law.dim() == d, "EnsembleState::gaussian: laws must share a dimension");
        chol.push_back(Eigen::LLT<Matrix>(law.cov).matrixL());
    }
    const CounterRng rng(seed, streams::kInitialSampling);
    parallel_for(static_cast<std::size_t>(replicas), [&](std::size_t r) {
        Vector z(d);
        for (int i = 0; i < e.particles; ++i) {
            for (int c = 0; c < d; ++c)
                z(c) = rng.normal_pair(static_cast<std::uint32_t>(r),
                                       static_cast<std::uint32_t>(i), 0,
                                       static_cast<std::uint32_t>(c >> 1))[c & 1];
            const Vector x = laws[i].mean + chol[i] * z;
            for (int c = 0; c < d; ++c)
                e.pos(static_cast<int>(r), i, c) = domain.wrap(x(c));
        }
    });
    return e;
}

double brownian_increment(std::uint64_t seed, int replica, int particle, long step, int coord) {
    const CounterRng rng(seed, streams::kSimulationNoise);
    return rng.normal_pair(static_cast<std::uint32_t>(step),
                           static_cast<std::uint32_t>(particle),
                           static_cast<std::uint32_t>(replica),
                           static_cast<std::uint32_t>(coord >> 1))[coord & 1];
}

EnsembleState simulate_particle_system(const InteractionMatrix& xi, const DriftKernel& kernel,
                                       const EnsembleState& init, const SimConfig& cfg) {
    cfg.validate();
    check_kernel_domain(kernel, init, "simulate_particle_system");
    require(xi.size() == init.particles, "simulate_particle_system: N mismatch");

    const int n = init.particles;
    const int d = init.dim;
    const long steps = step_count(cfg);
    const double dt = cfg.T / steps;
    const double noise_scale = std::sqrt(dt);
    const CounterRng rng(cfg.seed, streams::kSimulationNoise);

    EnsembleState state = init;
    const bool scalar = d == 1;
    parallel_for(static_cast<std::size_t>(state.replicas), [&](std::size_t r_idx) {
        const int r = static_cast<int>(r_idx);
        std::vector<double> drift(static_cast<std::size_t>(n) * d);
        Vector bi(d), xi_vec(d), xj_vec(d);
        for (long s = 0; s < steps; ++s) {
            std::fill(drift.begin(), drift.end(), 0.0);
            if (kernel.kind() != DriftKind::zero) {
                for (int i = 0; i < n; ++i) {
                    if (scalar) {
                        const double x = state.pos(r, i, 0);
                        double acc = 0.0;
                        for (int j = 0; j < n; ++j) {
                            const double w = xi.entry(i, j);
                            if (w == 0.0) continue;
                            acc += w * kernel.eval(x, state.pos(r, j, 0));
                        }
                        drift[i] = acc;
                    } else {
                        for (int c = 0; c < d; ++c) xi_vec(c) = state.pos(r, i, c);
                        for (int j = 0; j < n; ++j) {
                            const double w = xi.entry(i, j);
                            if (w == 0.0) continue;
                            for (int c = 0; c < d; ++c) xj_vec(c) = state.pos(r, j, c);
                            bi = kernel.eval(xi_vec, xj_vec);
                            for (int c = 0; c < d; ++c) drift[i * d + c] += w * bi(c);
                        }
                    }
                }
            }
            for (int i = 0; i < n; ++i)
                for (int c = 0; c < d; ++c) {
                    const double z =
                        rng.normal_pair(static_cast<std::uint32_t>(s),
                                        static_cast<std::uint32_t>(i),
                                        static_cast<std::uint32_t>(r),
                                        static_cast<std::uint32_t>(c >> 1))[c & 1];
                    double x = state.pos(r, i, c) + drift[i * d + c] * dt + noise_scale * z;
                    if (state.domain.is_torus()) {
                        x = state.domain.wrap(x);
                    } else if (!(std::abs(x) <= kDivergenceGuard)) {
                        throw std::runtime_error("simulate: position diverged past 1e6");
                    }
                    state.pos(r, i, c) = x;
                }
        }
    });
    state.time = init.time + cfg.T;
    return state;
}

EnsembleState simulate_independent_projection(const InteractionMatrix& xi,
                                              const DriftKernel& kernel,
                                              const EnsembleState& init, const SimConfig& cfg) {
    cfg.validate();
    check_kernel_domain(kernel, init, "simulate_independent_projection");
    require(xi.size() == init.particles, "simulate_independent_projection: N mismatch");
    require(init.replicas >= kMinProjectionReplicas,
            "simulate_independent_projection: need at least 100 replicas");
    require(kernel.kind() == DriftKind::zero || kernel.kind() == DriftKind::linear_difference ||
                kernel.kind() == DriftKind::sine_torus,
            "simulate_independent_projection: no mean-field closure for this kernel");

    const int n = init.particles;
    const int d = init.dim;
    const long steps = step_count(cfg);
    const double dt = cfg.T / steps;
    const double noise_scale = std::sqrt(dt);
    const CounterRng rng(cfg.seed, streams::kSimulationNoise);
    const Matrix& weights = xi.xi();
    const Vector row_sums = xi.row_sums();

    EnsembleState state = init;
    MeanFieldStats stats;
    // Per-particle drift coefficients derived from the stats, same for every
    // replica within a step.
    Matrix attract;           // linear: N x d
    std::vector<double> u_i, w_i;  // sine: N each
    const double omega = kernel.kind() == DriftKind::sine_torus
                             ? kTwoPi * kernel.frequency() / kernel.domain().period
                             : 0.0;

    for (long s = 0; s < steps; ++s) {
        // Barrier phase: deterministic serial reduction over replicas.
        collect_stats(state, kernel, stats);
        if (kernel.kind() == DriftKind::linear_difference) {
            attract.noalias() = kernel.rate() * (weights * stats.means);
        } else if (kernel.kind() == DriftKind::sine_torus) {
            u_i.assign(n, 0.0);
            w_i.assign(n, 0.0);
            for (int i = 0; i < n; ++i) {
                double u = 0.0, w = 0.0;
                for (int j = 0; j < n; ++j) {
                    u += weights(i, j) * stats.cos_amp[j];
                    w += weights(i, j) * stats.sin_amp[j];
                }
                u_i[i] = kernel.amplitude() * u;
                w_i[i] = kernel.amplitude() * w;
            }
        }
        parallel_for(static_cast<std::size_t>(state.replicas), [&](std::size_t r_idx) {
            const int r = static_cast<int>(r_idx);
            for (int i = 0; i < n; ++i)
                for (int c = 0; c < d; ++c) {
                    const double x = state.pos(r, i, c);
                    double drift = 0.0;
                    if (kernel.kind() == DriftKind::linear_difference) {
                        drift = -kernel.rate() * row_sums(i) * x + attract(i, c);
                    } else if (kernel.kind() == DriftKind::sine_torus) {
                        drift = kernel.amplitude() == 0.0
                                    ? 0.0
                                    : std::sin(omega * x) * u_i[i] - std::cos(omega * x) * w_i[i];
                    }
                    const double z =
                        rng.normal_pair(static_cast<std::uint32_t>(s),
                                        static_cast<std::uint32_t>(i),
                                        static_cast<std::uint32_t>(r),
                                        static_cast<std::uint32_t>(c >> 1))[c & 1];
                    double next = x + drift * dt + noise_scale * z;
                    if (state.domain.is_torus()) {
                        next = state.domain.wrap(next);
                    } else if (!(std::abs(next) <= kDivergenceGuard)) {
                        throw std::runtime_error("simulate: position diverged past 1e6");
                    }
                    state.pos(r, i, c) = next;
                }
        });
    }
    state.time = init.time + cfg.T;
    return state;
}

std::vector<EnsembleState> simulate_graphon_mfv(const Graphon& g, const DriftKernel& kernel,
                                                const std::vector<BlockInit>& init,
                                                const SimConfig& cfg, int samples) {
    const int m = g.block_count();
    require(static_cast<int>(init.size()) == m,
            "simulate_graphon_mfv: need one initial law per block");
    require(samples >= kMinProjectionReplicas, "simulate_graphon_mfv: need at least 100 samples");

    const Domain domain = kernel.domain().is_torus() ? Domain::torus(kernel.domain().period)
                                                     : Domain::euclidean(kernel.domain().dim);
    require(domain.dim == 1 || !domain.is_torus(), "simulate_graphon_mfv: bad domain");

    // The block system is the independent projection for coupling g/m: block
    // laws interact exactly like projected particles.
    InteractionMatrix coupling(m, g.values() / m);

    EnsembleState state(samples, m, domain.is_torus() ? 1 : domain.dim, domain);
    const CounterRng rng(cfg.seed, streams::kInitialSampling);
    for (int b = 0; b < m; ++b) {
        if (const auto* law = std::get_if<GaussianLaw>(&init[b])) {
            require(law->dim() == state.dim, "simulate_graphon_mfv: init dimension mismatch");
            const Matrix chol = Eigen::LLT<Matrix>(law->cov).matrixL();
            for (int r = 0; r < samples; ++r) {
                Vector z(state.dim);
                for (int c = 0; c < state.dim; ++c)
                    z(c) = rng.normal_pair(static_cast<std::uint32_t>(r),
                                           static_cast<std::uint32_t>(b), 0,
                                           static_cast<std::uint32_t>(c >> 1))[c & 1];
                const Vector x = law->mean + chol * z;
                for (int c = 0; c < state.dim; ++c) state.pos(r, b, c) = domain.wrap(x(c));
            }
        } else {
            const auto& density = std::get<DensityGrid>(init[b]);
            require(domain.is_torus() &&
                        std::abs(density.grid.length - domain.period) < 1e-12,
                    "simulate_graphon_mfv: density init requires a matching torus");
            // Inverse-CDF sampling; the density is constant within each cell.
            const int n_cells = density.grid.n;
            const double h = density.grid.h();
            std::vector<double> cdf(n_cells + 1, 0.0);
            for (int i = 0; i < n_cells; ++i) cdf[i + 1] = cdf[i] + density.values(i) * h;
            for (int i = 0; i <= n_cells; ++i) cdf[i] /= cdf[n_cells];
            for (int r = 0; r < samples; ++r) {
                const double u = rng.uniform(static_cast<std::uint32_t>(r),
                                             static_cast<std::uint32_t>(b), 1);
                const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
                const int cell = std::clamp(static_cast<int>(it - cdf.begin()) - 1, 0,
                                            n_cells - 1);
                const double span = cdf[cell + 1] - cdf[cell];
                const double frac = span > 0.0 ? (u - cdf[cell]) / span : 0.5;
                state.pos(r, b, 0) = domain.wrap((cell + frac) * h);
            }
        }
    }
    EnsembleState evolved = simulate_independent_projection(coupling, kernel, state, cfg);

    std::vector<EnsembleState> out;
    out.reserve(m);
    for (int b = 0; b < m; ++b) {
        EnsembleState block(samples, 1, evolved.dim, domain);
        block.time = evolved.time;
        for (int r = 0; r < samples; ++r)
            for (int c = 0; c < evolved.dim; ++c) block.pos(r, 0, c) = evolved.pos(r, b, c);
        out.push_back(std::move(block));
    }
    return out;
}

EnsembleMoments empirical_moments(const EnsembleState& e) {
    require(e.replicas >= 2, "empirical_moments: need at least two replicas");
    const int n = e.particles;
    const int d = e.dim;
    const int total = n * d;
    EnsembleMoments out;
    Vector mean = Vector::Zero(total);
    for (int r = 0; r < e.replicas; ++r)
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < d; ++c) mean(i * d + c) += e.pos(r, i, c);
    mean /= static_cast<double>(e.replicas);

    Matrix joint = Matrix::Zero(total, total);
    Vector centered(total);
    for (int r = 0; r < e.replicas; ++r) {
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < d; ++c) centered(i * d + c) = e.pos(r, i, c) - mean(i * d + c);
        joint.selfadjointView<Eigen::Lower>().rankUpdate(centered);
    }
    joint = joint.selfadjointView<Eigen::Lower>();
    joint /= static_cast<double>(e.replicas - 1);

    out.means.resize(n, d);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < d; ++c) out.means(i, c) = mean(i * d + c);
    out.particle_cov.reserve(n);
    for (int i = 0; i < n; ++i) out.particle_cov.push_back(joint.block(i * d, i * d, d, d));
    out.joint_cov = std::move(joint);
    return out;
}

void save_positions_binary(const EnsembleState& e, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "save_positions_binary: cannot write " + path);
    const std::uint64_t m = e.replicas, n = e.particles, d = e.dim;
    const double t = e.time;
    out.write(reinterpret_cast<const char*>(&m), sizeof(m));
    out.write(reinterpret_cast<const char*>(&n), sizeof(n));
    out.write(reinterpret_cast<const char*>(&d), sizeof(d));
    out.write(reinterpret_cast<const char*>(&t), sizeof(t));
    out.write(reinterpret_cast<const char*>(e.positions.data()),
              static_cast<std::streamsize>(sizeof(double) * e.positions.size()));
}

EnsembleState load_positions_binary(const std::string& path, Domain domain) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "load_positions_binary: cannot open " + path);
    std::uint64_t m = 0, n = 0, d = 0;
    double t = 0.0;
    in.read(reinterpret_cast<char*>(&m), sizeof(m));
    in.read(reinterpret_cast<char*>(&n), sizeof(n));
    in.read(reinterpret_cast<char*>(&d), sizeof(d));
    in.read(reinterpret_cast<char*>(&t), sizeof(t));
    EnsembleState e(static_cast<int>(m), static_cast<int>(n), static_cast<int>(d), domain);
    e.time = t;
    in.read(reinterpret_cast<char*>(e.positions.data()),
            static_cast<std::streamsize>(sizeof(double) * e.positions.size()));
    require(in.good(), "load_positions_binary: truncated file");
    return e;
}

}  // namespace graphonlab
