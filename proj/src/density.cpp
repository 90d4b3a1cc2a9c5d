#include "graphonlab/density.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace graphonlab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kDensityFloor = 1e-300;
constexpr double kMassTol = 1e-10;

void check_common_grid(const DensityGrid& p, const DensityGrid& q, const char* who) {
    require(p.grid.n == q.grid.n && std::abs(p.grid.length - q.grid.length) < 1e-12,
            std::string(who) + ": densities must share a grid");
}

// One conservative flux step on raw arrays. Returns the most negative value
// produced before the roundoff clamp (diagnostic for precondition violations).
// The advective face flux is centered while the cell Peclet number h|b| stays
// at most 1 (second order; still a nonnegative stencil under the dt bound) and
// falls back to upwind beyond that.
double flux_step(const double* p, double* out, const double* drift, int n, double h,
                 double dt) {
    const double inv_h = 1.0 / h;
    const double lambda = dt * inv_h;
    const int mask = n - 1;
    double worst = 0.0;
    // Flux through the face between cell i and cell i+1.
    const auto face_flux = [&](int i) {
        const int j = (i + 1) & mask;
        const double diffusive = (p[j] - p[i]) * inv_h;
        const double b = 0.5 * (drift[i] + drift[j]);
        double advective;
        if (std::abs(b) * h <= 1.0) {
            advective = b * 0.5 * (p[i] + p[j]);
        } else {
            advective = b > 0.0 ? b * p[i] : b * p[j];
        }
        return diffusive - advective;
    };
    double left = face_flux(n - 1);
    for (int i = 0; i < n; ++i) {
        const double right = face_flux(i);
        double value = p[i] + lambda * (right - left);
        if (value < 0.0) {
            worst = std::min(worst, value);
            value = 0.0;
        }
        out[i] = value;
        left = right;
    }
    return worst;
}

}  // namespace

TorusGrid1D::TorusGrid1D(int n_, double length_) : n(n_), length(length_) {
    require(n >= 64 && n <= 4096 && std::has_single_bit(static_cast<unsigned>(n)),
            "TorusGrid1D: n must be a power of two in [64, 4096]");
    require(length > 0.0 && std::isfinite(length), "TorusGrid1D: length must be positive");
}

DensityGrid::DensityGrid(TorusGrid1D grid_, Vector values_)
    : grid(grid_), values(std::move(values_)) {
    require(values.size() == grid.n, "DensityGrid: need one value per cell");
    require(values.allFinite(), "DensityGrid: values must be finite");
    require(values.minCoeff() >= 0.0, "DensityGrid: values must be nonnegative");
    require(std::abs(mass() - 1.0) <= kMassTol, "DensityGrid: mass must be 1 within 1e-10");
}

DensityGrid DensityGrid::wrapped_gaussian(const TorusGrid1D& grid, double mean,
                                          double variance) {
    require(variance > 0.0, "wrapped_gaussian: variance must be positive");
    const double sigma = std::sqrt(variance);
    const int wraps = std::max(3, static_cast<int>(std::ceil(8.0 * sigma / grid.length)) + 1);
    Vector values(grid.n);
    for (int i = 0; i < grid.n; ++i) {
        const double x = grid.center(i);
        double acc = 0.0;
        for (int w = -wraps; w <= wraps; ++w) {
            const double r = x - mean + w * grid.length;
            acc += std::exp(-0.5 * r * r / variance);
        }
        values(i) = acc;
    }
    values /= grid.h() * values.sum();
    return DensityGrid(grid, std::move(values));
}

DensityGrid DensityGrid::uniform(const TorusGrid1D& grid) {
    return DensityGrid(grid, Vector::Constant(grid.n, 1.0 / grid.length));
}

double fp_stable_dt(const TorusGrid1D& grid, double max_drift) {
    require(max_drift >= 0.0 && std::isfinite(max_drift),
            "fp_stable_dt: drift bound must be finite and nonnegative");
    const double h = grid.h();
    return h * h / (2.0 + h * max_drift);
}

DensityGrid fp_step(const DensityGrid& p, const Vector& drift, double dt) {
    const int n = p.grid.n;
    require(drift.size() == n, "fp_step: drift must be sampled at cell centers");
    require(drift.allFinite(), "fp_step: drift must be finite");
    require(dt > 0.0, "fp_step: dt must be positive");
    const double bound = fp_stable_dt(p.grid, drift.cwiseAbs().maxCoeff());
    require(dt <= bound * (1.0 + 1e-9), "fp_step: dt exceeds the stability bound");

    Vector out(n);
    const double worst = flux_step(p.values.data(), out.data(), drift.data(), n,
                                   p.grid.h(), dt);
    require(worst >= -1e-12 * std::max(1.0, p.values.maxCoeff()),
            "fp_step: negative mass cell (stability precondition violated)");
    return DensityGrid(p.grid, std::move(out));
}

CoupledBlockSolver::CoupledBlockSolver(const Graphon& g, const DriftKernel& kernel,
                                       std::vector<DensityGrid> init, double dt)
    : grid_(init.empty() ? TorusGrid1D(64, 1.0) : init.front().grid) {
    const int m = g.block_count();
    require(static_cast<int>(init.size()) == m,
            "CoupledBlockSolver: need one initial density per block");
    for (const auto& p : init)
        require(p.grid == grid_, "CoupledBlockSolver: all blocks must share a grid");
    require(kernel.domain().is_torus(), "CoupledBlockSolver: kernel must live on the torus");
    require(std::abs(kernel.domain().period - grid_.length) < 1e-12,
            "CoupledBlockSolver: kernel period must match the grid length");

    coupling_ = g.values() / m;

    // Fourier modes of the difference kernel; the convolution against each
    // block density then needs only the matching harmonics of the density.
    const int n = grid_.n;
    const auto add_mode = [&](int k, double cos_coef, double sin_coef) {
        Mode mode;
        mode.freq_scale = kTwoPi * k / grid_.length;
        mode.cos_coef = cos_coef;
        mode.sin_coef = sin_coef;
        mode.cos_table.resize(n);
        mode.sin_table.resize(n);
        for (int i = 0; i < n; ++i) {
            mode.cos_table[i] = std::cos(mode.freq_scale * grid_.center(i));
            mode.sin_table[i] = std::sin(mode.freq_scale * grid_.center(i));
        }
        modes_.push_back(std::move(mode));
    };
    switch (kernel.kind()) {
        case DriftKind::zero:
            break;
        case DriftKind::sine_torus:
            add_mode(kernel.frequency(), 0.0, kernel.amplitude());
            break;
        case DriftKind::custom_tabulated: {
            const auto& table = kernel.table();
            const int nt = static_cast<int>(table.size());
            double scale = 0.0;
            for (double v : table) scale = std::max(scale, std::abs(v));
            double mean = 0.0;
            for (double v : table) mean += v;
            mean_level_ = mean / nt;
            for (int k = 1; k <= nt / 2; ++k) {
                double a = 0.0, b = 0.0;
                for (int j = 0; j < nt; ++j) {
                    const double phase = kTwoPi * k * j / nt;
                    a += table[j] * std::cos(phase);
                    b += table[j] * std::sin(phase);
                }
                const double norm = (2 * k == nt) ? 1.0 : 2.0;
                a *= norm / nt;
                b *= norm / nt;
                if (std::abs(a) > 1e-13 * scale || std::abs(b) > 1e-13 * scale)
                    add_mode(k, a, b);
            }
            break;
        }
        case DriftKind::linear_difference:
            throw std::invalid_argument(
                "CoupledBlockSolver: linear kernel is not a torus kernel");
    }

    state_.resize(m);
    drift_.assign(m, std::vector<double>(n, 0.0));
    scratch_.assign(m, std::vector<double>(n, 0.0));
    for (int b = 0; b < m; ++b)
        state_[b].assign(init[b].values.data(), init[b].values.data() + n);

    const double drift_envelope = g.max_row_mean() * kernel.sup_b();
    const double bound = fp_stable_dt(grid_, drift_envelope);
    if (dt <= 0.0) {
        dt_ = bound;
    } else {
        require(dt <= bound * (1.0 + 1e-9),
                "CoupledBlockSolver: dt exceeds the stability bound");
        dt_ = dt;
    }
}

void CoupledBlockSolver::compute_drifts() {
    const int m = static_cast<int>(state_.size());
    const int n = grid_.n;
    const double h = grid_.h();
    const std::size_t k_modes = modes_.size();
    // Harmonics of every block density.
    std::vector<double> cos_amp(m * k_modes), sin_amp(m * k_modes);
    for (int b = 0; b < m; ++b) {
        const double* p = state_[b].data();
        for (std::size_t k = 0; k < k_modes; ++k) {
            const double* ct = modes_[k].cos_table.data();
            const double* st = modes_[k].sin_table.data();
            double c = 0.0, s = 0.0;
            for (int i = 0; i < n; ++i) {
                c += ct[i] * p[i];
                s += st[i] * p[i];
            }
            cos_amp[b * k_modes + k] = h * c;
            sin_amp[b * k_modes + k] = h * s;
        }
    }
    for (int b = 0; b < m; ++b) {
        double* out = drift_[b].data();
        double level = 0.0;
        for (int j = 0; j < m; ++j) level += coupling_(b, j);
        level *= mean_level_;
        std::fill(out, out + n, level);
        for (std::size_t k = 0; k < k_modes; ++k) {
            // Mix harmonics across blocks through the coupling row, then
            // synthesize: conv(beta, p)(x) picks up cos/sin of x.
            double u = 0.0, w = 0.0;
            for (int j = 0; j < m; ++j) {
                const double c = cos_amp[j * k_modes + k];
                const double s = sin_amp[j * k_modes + k];
                u += coupling_(b, j) * (modes_[k].cos_coef * c - modes_[k].sin_coef * s);
                w += coupling_(b, j) * (modes_[k].cos_coef * s + modes_[k].sin_coef * c);
            }
            const double* ct = modes_[k].cos_table.data();
            const double* st = modes_[k].sin_table.data();
            for (int i = 0; i < n; ++i) out[i] += u * ct[i] + w * st[i];
        }
    }
}

void CoupledBlockSolver::step(double dt) {
    compute_drifts();
    const int n = grid_.n;
    const double h = grid_.h();
    for (std::size_t b = 0; b < state_.size(); ++b) {
        const double worst =
            flux_step(state_[b].data(), scratch_[b].data(), drift_[b].data(), n, h, dt);
        require(worst >= -1e-12, "CoupledBlockSolver: negative mass cell");
        state_[b].swap(scratch_[b]);
    }
    time_ += dt;
}

void CoupledBlockSolver::advance(double duration) {
    require(duration >= 0.0, "CoupledBlockSolver: duration must be nonnegative");
    if (duration == 0.0) return;
    const long steps = std::max(1L, static_cast<long>(std::ceil(duration / dt_ - 1e-12)));
    const double dt = duration / steps;
    for (long s = 0; s < steps; ++s) step(dt);
}

std::vector<DensityGrid> CoupledBlockSolver::densities() const {
    std::vector<DensityGrid> out;
    out.reserve(state_.size());
    for (const auto& p : state_) {
        Vector values = Eigen::Map<const Vector>(p.data(), grid_.n);
        out.emplace_back(grid_, std::move(values));
    }
    return out;
}

Vector CoupledBlockSolver::block_drift(int block) const {
    require(block >= 0 && block < block_count(), "block_drift: block out of range");
    return Eigen::Map<const Vector>(drift_[block].data(), grid_.n);
}

std::vector<DensityGrid> solve_coupled_block_fp(const Graphon& g, const DriftKernel& kernel,
                                                std::vector<DensityGrid> init, double T,
                                                double dt) {
    CoupledBlockSolver solver(g, kernel, std::move(init), dt);
    solver.advance(T);
    return solver.densities();
}

double entropy_grid(const DensityGrid& p, const DensityGrid& q) {
    check_common_grid(p, q, "entropy_grid");
    const int n = p.grid.n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double pi = p.values(i);
        if (pi <= 0.0) continue;  // 0 log 0 = 0
        const double qi = q.values(i);
        require(qi > kDensityFloor, "entropy_grid: support violation (p > 0 where q = 0)");
        acc += pi * (std::log(pi) - std::log(qi));
    }
    return std::max(0.0, p.grid.h() * acc);
}

double fisher_grid(const DensityGrid& p, const DensityGrid& q) {
    check_common_grid(p, q, "fisher_grid");
    const int n = p.grid.n;
    const int mask = n - 1;
    const double h = p.grid.h();
    std::vector<double> log_ratio(n);
    for (int i = 0; i < n; ++i) {
        const double pi = p.values(i);
        const double qi = q.values(i);
        if (pi > 0.0)
            require(qi > kDensityFloor, "fisher_grid: support violation (p > 0 where q = 0)");
        log_ratio[i] = std::log(std::max(pi, kDensityFloor)) -
                       std::log(std::max(qi, kDensityFloor));
    }
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double pi = p.values(i);
        if (pi <= 0.0) continue;
        const double grad = (log_ratio[(i + 1) & mask] - log_ratio[(i - 1) & mask]) / (2.0 * h);
        acc += pi * grad * grad;
    }
    return h * acc;
}

double tv_grid(const DensityGrid& p, const DensityGrid& q) {
    check_common_grid(p, q, "tv_grid");
    return 0.5 * p.grid.h() * (p.values - q.values).cwiseAbs().sum();
}

double kde_auto_bandwidth(const std::vector<double>& samples, const TorusGrid1D& grid) {
    require(samples.size() >= 100, "kde_auto_bandwidth: need at least 100 samples");
    const double length = grid.length;
    const Domain torus = Domain::torus(length);
    double sum = 0.0, sum_sq = 0.0, cos_sum = 0.0, sin_sum = 0.0;
    for (double raw : samples) {
        require(std::isfinite(raw), "kde_auto_bandwidth: samples must be finite");
        const double x = torus.wrap(raw);
        sum += x;
        sum_sq += x * x;
        const double angle = kTwoPi * x / length;
        cos_sum += std::cos(angle);
        sin_sum += std::sin(angle);
    }
    const double count = static_cast<double>(samples.size());
    const double var = std::max(0.0, sum_sq / count - (sum / count) * (sum / count));
    const double linear_sd = std::sqrt(var);
    const double r = std::hypot(cos_sum / count, sin_sum / count);
    const double circular_sd =
        r > 1e-12 ? std::sqrt(std::max(0.0, -2.0 * std::log(r))) * length / kTwoPi
                  : length;  // nearly uniform samples
    const double bandwidth = 1.06 * std::min(linear_sd, circular_sd) * std::pow(count, -0.2);
    return std::clamp(bandwidth, grid.h(), length / 2.0);
}

DensityGrid kde_density(const std::vector<double>& samples, const TorusGrid1D& grid,
                        double bandwidth) {
    require(samples.size() >= 100, "kde_density: need at least 100 samples");
    const int n = grid.n;
    const double h = grid.h();
    const double length = grid.length;
    const Domain torus = Domain::torus(length);

    if (bandwidth <= 0.0) bandwidth = kde_auto_bandwidth(samples, grid);
    bandwidth = std::clamp(bandwidth, h, length / 2.0);

    std::vector<double> hist(n, 0.0);
    for (double raw : samples) {
        require(std::isfinite(raw), "kde_density: samples must be finite");
        const double x = torus.wrap(raw);
        const int cell = std::min(static_cast<int>(x / h), n - 1);
        hist[cell] += 1.0;
    }

    // Wrapped-Gaussian smoothing kernel between cell centers.
    const int wraps = std::max(2, static_cast<int>(std::ceil(6.0 * bandwidth / length)) + 1);
    std::vector<double> kernel(n, 0.0);
    for (int j = 0; j < n; ++j) {
        const double base = j * h;
        double acc = 0.0;
        for (int w = -wraps; w <= wraps; ++w) {
            const double r = base + w * length;
            acc += std::exp(-0.5 * r * r / (bandwidth * bandwidth));
        }
        kernel[j] = acc;
    }
    Vector values = Vector::Zero(n);
    for (int j = 0; j < n; ++j) {
        if (hist[j] == 0.0) continue;
        const double weight = hist[j];
        for (int i = 0; i < n; ++i) values(i) += weight * kernel[(i - j + n) & (n - 1)];
    }
    values /= h * values.sum();
    return DensityGrid(grid, std::move(values));
}

double hessian_log_sup(const std::vector<DensityGrid>& trajectory) {
    require(!trajectory.empty(), "hessian_log_sup: empty trajectory");
    double sup = 0.0;
    for (const auto& p : trajectory) {
        const int n = p.grid.n;
        const int mask = n - 1;
        const double inv_h2 = 1.0 / (p.grid.h() * p.grid.h());
        std::vector<double> log_p(n);
        for (int i = 0; i < n; ++i) {
            require(p.values(i) >= kDensityFloor, "hessian_log_sup: density below floor");
            log_p[i] = std::log(p.values(i));
        }
        for (int i = 0; i < n; ++i) {
            const double second =
                (log_p[(i + 1) & mask] - 2.0 * log_p[i] + log_p[(i - 1) & mask]) * inv_h2;
            sup = std::max(sup, std::abs(second));
        }
    }
    return sup;
}

void save_density_csv(const DensityGrid& p, const std::string& path) {
    std::ofstream out(path);
    require(out.good(), "save_density_csv: cannot write " + path);
    out << "x,value\n";
    out.precision(17);
    for (int i = 0; i < p.grid.n; ++i) out << p.grid.center(i) << "," << p.values(i) << "\n";
}

void save_density_binary(const DensityGrid& p, double t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "save_density_binary: cannot write " + path);
    const std::uint64_t n = static_cast<std::uint64_t>(p.grid.n);
    const double length = p.grid.length;
    out.write(reinterpret_cast<const char*>(&n), sizeof(n));
    out.write(reinterpret_cast<const char*>(&length), sizeof(length));
    out.write(reinterpret_cast<const char*>(&t), sizeof(t));
    out.write(reinterpret_cast<const char*>(p.values.data()),
              static_cast<std::streamsize>(sizeof(double) * p.grid.n));
}

DensityGrid load_density_binary(const std::string& path, double* t_out) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "load_density_binary: cannot open " + path);
    std::uint64_t n = 0;
    double length = 0.0, t = 0.0;
    in.read(reinterpret_cast<char*>(&n), sizeof(n));
    in.read(reinterpret_cast<char*>(&length), sizeof(length));
    in.read(reinterpret_cast<char*>(&t), sizeof(t));
    TorusGrid1D grid(static_cast<int>(n), length);
    Vector values(grid.n);
    in.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(sizeof(double) * grid.n));
    require(in.good(), "load_density_binary: truncated file");
    if (t_out) *t_out = t;
    return DensityGrid(grid, std::move(values));
}

}  // namespace graphonlab
