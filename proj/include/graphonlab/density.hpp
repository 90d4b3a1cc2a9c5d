#pragma once

#include <string>
#include <vector>

#include "graphonlab/common.hpp"
#include "graphonlab/drift.hpp"
#include "graphonlab/graphon.hpp"

namespace graphonlab {

/// Uniform periodic grid on [0, L) with n cells (power of two, 64..4096).
struct TorusGrid1D {
    int n = 64;
    double length = 1.0;

    TorusGrid1D(int n_, double length_);
    double h() const { return length / n; }
    double center(int i) const { return (i + 0.5) * h(); }
    bool operator==(const TorusGrid1D& other) const {
        return n == other.n && length == other.length;
    }
};

/// Probability density sampled at cell centers: nonnegative, unit mass.
struct DensityGrid {
    TorusGrid1D grid;
    Vector values;

    DensityGrid(TorusGrid1D grid_, Vector values_);

    double mass() const { return grid.h() * values.sum(); }

    /// Wrapped Gaussian with the given mean and variance, normalized on the grid.
    static DensityGrid wrapped_gaussian(const TorusGrid1D& grid, double mean, double variance);
    static DensityGrid uniform(const TorusGrid1D& grid);
};

/// Largest stable explicit step for the finite-volume scheme:
/// h^2 / (2 + h * max |drift|).
double fp_stable_dt(const TorusGrid1D& grid, double max_drift);

/// One conservative finite-volume step of dp/dt = Laplacian p - div(drift p):
/// centered diffusion, upwind advection, periodic wrap. Mass is conserved by
/// telescoping fluxes; positivity holds under the dt bound.
DensityGrid fp_step(const DensityGrid& p, const Vector& drift, double dt);

/// Coupled block mean-field Fokker-Planck system: block i is advected by
/// (1/m) sum_j g(i,j) (beta conv p_j), with the convolution evaluated through
/// the Fourier modes of the difference kernel.
class CoupledBlockSolver {
public:
    /// dt <= 0 picks the largest stable step for the kernel's drift envelope.
    CoupledBlockSolver(const Graphon& g, const DriftKernel& kernel,
                       std::vector<DensityGrid> init, double dt = 0.0);

    void advance(double duration);
    double time() const { return time_; }
    double dt() const { return dt_; }
    int block_count() const { return static_cast<int>(state_.size()); }
    /// Validated per-block densities at the current time.
    std::vector<DensityGrid> densities() const;
    /// Current drift field of one block (diagnostics).
    Vector block_drift(int block) const;

private:
    void compute_drifts();
    void step(double dt);

    TorusGrid1D grid_;
    Matrix coupling_;  // g / m
    double time_ = 0.0;
    double dt_ = 0.0;
    struct Mode {
        double freq_scale;  // 2 pi k / L
        double cos_coef, sin_coef;
        std::vector<double> cos_table, sin_table;
    };
    double mean_level_ = 0.0;  // constant Fourier mode of the kernel
    std::vector<Mode> modes_;
    std::vector<std::vector<double>> state_;   // per block, n cells
    std::vector<std::vector<double>> drift_;   // per block, n cells
    std::vector<std::vector<double>> scratch_;
};

std::vector<DensityGrid> solve_coupled_block_fp(const Graphon& g, const DriftKernel& kernel,
                                                std::vector<DensityGrid> init, double T,
                                                double dt = 0.0);

/// h * sum p log(p/q), with 0 log 0 = 0 and densities floored at 1e-300.
double entropy_grid(const DensityGrid& p, const DensityGrid& q);

/// h * sum p * (D log(p/q))^2 with D the centered periodic difference.
double fisher_grid(const DensityGrid& p, const DensityGrid& q);

/// Total variation distance (1/2) h * sum |p - q|.
double tv_grid(const DensityGrid& p, const DensityGrid& q);

/// Silverman bandwidth adapted to the circle: 1.06 * min(linear deviation,
/// circular deviation) * S^(-1/5), clamped to [h, L/2].
double kde_auto_bandwidth(const std::vector<double>& samples, const TorusGrid1D& grid);

/// Wrapped-Gaussian kernel density estimate of >= 100 torus samples,
/// renormalized to unit mass. bandwidth <= 0 uses kde_auto_bandwidth.
DensityGrid kde_density(const std::vector<double>& samples, const TorusGrid1D& grid,
                        double bandwidth = 0.0);

/// max over the trajectory and the grid of |second difference of log p| / h^2.
double hessian_log_sup(const std::vector<DensityGrid>& trajectory);

void save_density_csv(const DensityGrid& p, const std::string& path);
void save_density_binary(const DensityGrid& p, double t, const std::string& path);
DensityGrid load_density_binary(const std::string& path, double* t_out = nullptr);

}  // namespace graphonlab
