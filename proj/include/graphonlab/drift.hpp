#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "graphonlab/common.hpp"

namespace graphonlab {

/// State space of a kernel or ensemble: periodic interval(s) of period L, or
/// all of R^d.
struct Domain {
    enum class Kind { torus, euclidean };
    Kind kind = Kind::euclidean;
    double period = 1.0;  // torus only
    int dim = 1;

    static Domain torus(double period) { return {Kind::torus, period, 1}; }
    static Domain euclidean(int dim) { return {Kind::euclidean, 1.0, dim}; }
    bool is_torus() const { return kind == Kind::torus; }

    /// Signed difference x - y, wrapped into [-L/2, L/2) on the torus.
    double diff(double x, double y) const {
        if (!is_torus()) return x - y;
        double r = std::remainder(x - y, period);
        if (r >= period / 2) r -= period;  // std::remainder returns (-L/2, L/2]
        return r;
    }

    double wrap(double x) const {
        if (!is_torus()) return x;
        double w = x - period * std::floor(x / period);
        if (w >= period) w -= period;
        return w;
    }
};

enum class DriftKind { zero, linear_difference, sine_torus, custom_tabulated };

/// Two-argument interaction drift b(x, y). All built-in kinds are difference
/// kernels b(x, y) = beta(x - y); on the torus the difference is wrapped.
class DriftKernel {
public:
    static DriftKernel zero(Domain domain = Domain::euclidean(1));
    /// beta(r) = -rate * r. Unbounded; only meaningful on Euclidean domains.
    static DriftKernel linear_difference(double rate, int dim = 1);
    /// beta(r) = amplitude * sin(2 pi frequency r / period), one-dimensional.
    static DriftKernel sine_torus(double amplitude, int frequency, double period);
    /// beta tabulated at n equispaced points of [0, L); linear interpolation.
    static DriftKernel custom_tabulated(std::vector<double> table, double period);

    DriftKind kind() const { return kind_; }
    const Domain& domain() const { return domain_; }
    bool difference_form() const { return true; }
    bool gradient_form() const { return gradient_form_; }
    /// sup |b|; +infinity for the linear kernel.
    double sup_b() const { return sup_b_; }
    /// sup of the operator norm of the Jacobian of b in its first argument.
    double sup_grad_b() const { return sup_grad_b_; }

    double rate() const { return rate_; }
    double amplitude() const { return amplitude_; }
    int frequency() const { return frequency_; }
    const std::vector<double>& table() const { return table_; }

    /// beta at an (already wrapped) scalar difference; dim-1 kernels only.
    double eval_difference(double r) const;
    /// d beta / d r at an (already wrapped) scalar difference.
    double eval_difference_grad(double r) const;

    /// b(x, y) componentwise. Scalar overloads serve the 1-d fast paths.
    double eval(double x, double y) const;
    Vector eval(const Vector& x, const Vector& y) const;
    /// Jacobian of b in its first argument at (x, y).
    double eval_grad(double x, double y) const;
    Matrix eval_grad(const Vector& x, const Vector& y) const;

    std::string kind_name() const;

private:
    DriftKind kind_ = DriftKind::zero;
    Domain domain_;
    bool gradient_form_ = true;
    double sup_b_ = 0.0;
    double sup_grad_b_ = 0.0;
    double rate_ = 0.0;
    double amplitude_ = 0.0;
    int frequency_ = 1;
    std::vector<double> table_;
};

}  // namespace graphonlab
