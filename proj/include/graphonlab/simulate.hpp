#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "graphonlab/common.hpp"
#include "graphonlab/density.hpp"
#include "graphonlab/drift.hpp"
#include "graphonlab/gaussian.hpp"
#include "graphonlab/graphon.hpp"

namespace graphonlab {

enum class Scheme { euler_maruyama };

struct SimConfig {
    double dt = 1e-3;
    double T = 1.0;
    std::uint64_t seed = 0;
    Scheme scheme = Scheme::euler_maruyama;

    void validate() const;
};

/// Monte Carlo replicas of an N-particle configuration in d dimensions.
/// positions[(r*N + i)*d + c] is coordinate c of particle i in replica r.
struct EnsembleState {
    int replicas = 1;
    int particles = 1;
    int dim = 1;
    Domain domain = Domain::euclidean(1);
    double time = 0.0;
    std::vector<double> positions;

    EnsembleState(int replicas_, int particles_, int dim_, Domain domain_);

    double& pos(int r, int i, int c) {
        return positions[(static_cast<std::size_t>(r) * particles + i) * dim + c];
    }
    double pos(int r, int i, int c) const {
        return positions[(static_cast<std::size_t>(r) * particles + i) * dim + c];
    }

    /// All replicas and particles at a single point.
    static EnsembleState at_point(int replicas, int particles, int dim, Domain domain,
                                  double value);
    /// Independent Gaussian draws per particle (law i for every replica).
    static EnsembleState gaussian(int replicas, const std::vector<GaussianLaw>& laws,
                                  Domain domain, std::uint64_t seed);
};

/// The Brownian increment driving (replica, particle, step, coordinate) under
/// the given seed: a pure function, shared between the particle system and its
/// projection so the two can be coupled pathwise.
double brownian_increment(std::uint64_t seed, int replica, int particle, long step, int coord);

/// Euler-Maruyama for dX_i = sum_j xi_ij b(X_i, X_j) dt + dB_i, replica by
/// replica.
EnsembleState simulate_particle_system(const InteractionMatrix& xi, const DriftKernel& kernel,
                                       const EnsembleState& init, const SimConfig& cfg);

/// Euler-Maruyama for the projected system in which particle i feels the laws
/// of the others: the law average <b(x, .), Q_j> is closed by the
/// cross-replica empirical average, identical for all replicas.
EnsembleState simulate_independent_projection(const InteractionMatrix& xi,
                                              const DriftKernel& kernel,
                                              const EnsembleState& init, const SimConfig& cfg);

using BlockInit = std::variant<GaussianLaw, DensityGrid>;

/// Block-reduced mean-field system as m interacting sample clouds of size M;
/// cloud i is advected by (1/m) sum_j g(i,j) times the empirical law average
/// of cloud j. Returns one single-particle ensemble per block.
std::vector<EnsembleState> simulate_graphon_mfv(const Graphon& g, const DriftKernel& kernel,
                                                const std::vector<BlockInit>& init,
                                                const SimConfig& cfg, int samples);

struct EnsembleMoments {
    Matrix means;                       // N x d cross-replica means
    std::vector<Matrix> particle_cov;   // N sample covariances, d x d
    Matrix joint_cov;                   // (N*d) x (N*d) sample covariance
};

EnsembleMoments empirical_moments(const EnsembleState& e);

void save_positions_binary(const EnsembleState& e, const std::string& path);
EnsembleState load_positions_binary(const std::string& path, Domain domain);

}  // namespace graphonlab
