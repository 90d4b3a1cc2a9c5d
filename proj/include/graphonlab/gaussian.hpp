#pragma once

#include <utility>
#include <vector>

#include "graphonlab/common.hpp"
#include "graphonlab/graphon.hpp"

namespace graphonlab {

/// Nondegenerate Gaussian law on R^dim.
struct GaussianLaw {
    Vector mean;
    Matrix cov;

    GaussianLaw(Vector mean_, Matrix cov_);
    int dim() const { return static_cast<int>(mean.size()); }

    static GaussianLaw standard(int dim);
};

/// Joint Gaussian law of N particles with d coordinates each, plus the time it
/// represents. Coordinate (i, c) sits at index i*d + c.
struct JointGaussianState {
    int particles = 1;
    int dim = 1;
    Vector mean;  // length N*d
    Matrix cov;   // (N*d) x (N*d), SPD
    double time = 0.0;

    JointGaussianState(int particles_, int dim_, Vector mean_, Matrix cov_, double time_ = 0.0);

    /// Product of independent standard Gaussians, regularized option for
    /// near-deterministic starts.
    static JointGaussianState isotropic(int particles, int dim, double variance,
                                        double mean_value = 0.0);
};

/// Exact law of the interacting system with kernel beta(r) = -rate * r:
/// the mean solves mdot = D m and the covariance the Lyapunov equation
/// Sdot = D S + S D^T + I, with D = rate * (xi - diag(row sums)) acting
/// blockwise on d coordinates. Integrated by RK4 with step dt.
JointGaussianState evolve_interacting_gaussian(const InteractionMatrix& xi, double rate,
                                               const JointGaussianState& init, double T,
                                               double dt);

/// Exact marginal laws of the independent projection under the same kernel:
/// means follow the same ODE mdot = D m; each variance independently solves
/// Sdot_i = -2 rate (sum_j xi_ij) S_i + I.
std::vector<GaussianLaw> evolve_projection_gaussian(const InteractionMatrix& xi, double rate,
                                                    const std::vector<GaussianLaw>& init,
                                                    double T, double dt);

/// Exact per-block marginal laws of the block-reduced mean-field system with
/// kernel beta(r) = -rate * r and block coupling g(i,j)/m.
std::vector<GaussianLaw> evolve_block_meanfield_gaussian(const Graphon& g, double rate,
                                                         const std::vector<GaussianLaw>& init,
                                                         double T, double dt);

/// Marginal law of the particles listed in v (sorted, distinct).
GaussianLaw marginal_subset(const JointGaussianState& joint, const std::vector<int>& v);

/// H(p|q) for Gaussians, in nats.
double relative_entropy_gaussian(const GaussianLaw& p, const GaussianLaw& q);

/// I(p|q) = E_p || grad log (dp/dq) ||^2 for Gaussians.
double relative_fisher_gaussian(const GaussianLaw& p, const GaussianLaw& q);

/// (H, I) between the joint marginal on v and the product of the listed
/// per-particle marginals restricted to v.
std::pair<double, double> subset_info(const JointGaussianState& joint,
                                      const std::vector<GaussianLaw>& marginals,
                                      const std::vector<int>& v);

/// Law of particle k given the particles in v pinned at x_v (stacked d-blocks
/// in the order of v).
GaussianLaw conditional_gaussian(const JointGaussianState& joint, const std::vector<int>& v,
                                 int k, const Vector& x_v);

}  // namespace graphonlab
