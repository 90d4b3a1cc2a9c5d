#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

namespace graphonlab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Number of worker threads used by parallel sweeps. Controlled by the
/// GRAPHONLAB_THREADS environment variable; defaults to the hardware count.
int thread_count();

/// Runs fn(i) for i in [0, n) on a fixed chunk partition. The partition
/// depends only on n and the thread count, so results written to disjoint
/// slots are identical regardless of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Ordinary least squares y = slope*x + intercept.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// OLS fit of log(y) against log(x). Throws if any input is <= 0.
LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace graphonlab
