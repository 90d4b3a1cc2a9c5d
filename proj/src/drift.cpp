#include "graphonlab/drift.hpp"

#include <algorithm>

namespace graphonlab {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

DriftKernel DriftKernel::zero(Domain domain) {
    DriftKernel k;
    k.kind_ = DriftKind::zero;
    k.domain_ = domain;
    return k;
}

DriftKernel DriftKernel::linear_difference(double rate, int dim) {
    require(rate > 0.0, "linear_difference: rate must be positive");
    DriftKernel k;
    k.kind_ = DriftKind::linear_difference;
    k.domain_ = Domain::euclidean(dim);
    k.rate_ = rate;
    k.sup_b_ = std::numeric_limits<double>::infinity();
    k.sup_grad_b_ = rate;
    return k;
}

DriftKernel DriftKernel::sine_torus(double amplitude, int frequency, double period) {
    require(frequency >= 1, "sine_torus: frequency must be a positive integer");
    require(period > 0.0, "sine_torus: period must be positive");
    DriftKernel k;
    k.kind_ = DriftKind::sine_torus;
    k.domain_ = Domain::torus(period);
    k.amplitude_ = amplitude;
    k.frequency_ = frequency;
    k.sup_b_ = std::abs(amplitude);
    k.sup_grad_b_ = std::abs(amplitude) * kTwoPi * frequency / period;
    // beta is the gradient of V(r) = -(A L / 2 pi k) cos(2 pi k r / L).
    k.gradient_form_ = true;
    return k;
}

DriftKernel DriftKernel::custom_tabulated(std::vector<double> table, double period) {
    require(table.size() >= 2, "custom_tabulated: need at least two table points");
    require(period > 0.0, "custom_tabulated: period must be positive");
    DriftKernel k;
    k.kind_ = DriftKind::custom_tabulated;
    k.domain_ = Domain::torus(period);
    k.table_ = std::move(table);
    const int n = static_cast<int>(k.table_.size());
    const double h = period / n;
    double sup = 0.0, sup_grad = 0.0;
    for (int i = 0; i < n; ++i) {
        require(std::isfinite(k.table_[i]), "custom_tabulated: table entries must be finite");
        sup = std::max(sup, std::abs(k.table_[i]));
        sup_grad = std::max(sup_grad, std::abs(k.table_[(i + 1) % n] - k.table_[i]) / h);
    }
    k.sup_b_ = sup;
    k.sup_grad_b_ = sup_grad;
    k.gradient_form_ = false;  // no potential is supplied with a raw table
    return k;
}

double DriftKernel::eval_difference(double r) const {
    switch (kind_) {
        case DriftKind::zero:
            return 0.0;
        case DriftKind::linear_difference:
            return -rate_ * r;
        case DriftKind::sine_torus:
            return amplitude_ * std::sin(kTwoPi * frequency_ * r / domain_.period);
        case DriftKind::custom_tabulated: {
            const int n = static_cast<int>(table_.size());
            const double h = domain_.period / n;
            const double pos = domain_.wrap(r) / h;
            const int i = std::min(static_cast<int>(pos), n - 1);
            const double frac = pos - i;
            return table_[i] * (1.0 - frac) + table_[(i + 1) % n] * frac;
        }
    }
    return 0.0;
}

double DriftKernel::eval_difference_grad(double r) const {
    switch (kind_) {
        case DriftKind::zero:
            return 0.0;
        case DriftKind::linear_difference:
            return -rate_;
        case DriftKind::sine_torus:
            return amplitude_ * kTwoPi * frequency_ / domain_.period *
                   std::cos(kTwoPi * frequency_ * r / domain_.period);
        case DriftKind::custom_tabulated: {
            const int n = static_cast<int>(table_.size());
            const double h = domain_.period / n;
            const int i = std::min(static_cast<int>(domain_.wrap(r) / h), n - 1);
            return (table_[(i + 1) % n] - table_[i]) / h;
        }
    }
    return 0.0;
}

double DriftKernel::eval(double x, double y) const {
    require(domain_.dim == 1, "DriftKernel: scalar eval on a multi-dimensional kernel");
    return eval_difference(domain_.diff(x, y));
}

Vector DriftKernel::eval(const Vector& x, const Vector& y) const {
    require(x.size() == y.size() && static_cast<int>(x.size()) == domain_.dim,
            "DriftKernel: dimension mismatch");
    Vector out(x.size());
    if (kind_ == DriftKind::zero) {
        out.setZero();
    } else if (kind_ == DriftKind::linear_difference) {
        out = -rate_ * (x - y);
    } else {
        out(0) = eval_difference(domain_.diff(x(0), y(0)));
    }
    return out;
}

double DriftKernel::eval_grad(double x, double y) const {
    require(domain_.dim == 1, "DriftKernel: scalar eval on a multi-dimensional kernel");
    return eval_difference_grad(domain_.diff(x, y));
}

Matrix DriftKernel::eval_grad(const Vector& x, const Vector& y) const {
    require(x.size() == y.size() && static_cast<int>(x.size()) == domain_.dim,
            "DriftKernel: dimension mismatch");
    const int d = static_cast<int>(x.size());
    if (kind_ == DriftKind::zero) return Matrix::Zero(d, d);
    if (kind_ == DriftKind::linear_difference) return -rate_ * Matrix::Identity(d, d);
    Matrix out(1, 1);
    out(0, 0) = eval_difference_grad(domain_.diff(x(0), y(0)));
    return out;
}

std::string DriftKernel::kind_name() const {
    switch (kind_) {
        case DriftKind::zero:
            return "zero";
        case DriftKind::linear_difference:
            return "linear_difference";
        case DriftKind::sine_torus:
            return "sine_torus";
        case DriftKind::custom_tabulated:
            return "custom_tabulated";
    }
    return "unknown";
}

}  // namespace graphonlab
