#include "graphonlab/quadrature.hpp"

#include <cmath>

#include <Eigen/Cholesky>

namespace graphonlab {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

struct PdfEval {
    Vector mean;
    Matrix precision;
    double log_norm;  // -(d/2) log(2 pi) - (1/2) log det cov

    explicit PdfEval(const GaussianLaw& law) : mean(law.mean) {
        const int d = law.dim();
        Eigen::LLT<Matrix> llt(law.cov);
        require(llt.info() == Eigen::Success, "quadrature: covariance must be SPD");
        precision = llt.solve(Matrix::Identity(d, d));
        const double log_det =
            2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
        log_norm = -0.5 * d * kLogTwoPi - 0.5 * log_det;
    }

    double log_pdf(const Vector& x) const {
        const Vector r = x - mean;
        return log_norm - 0.5 * r.dot(precision * r);
    }
    Vector score(const Vector& x) const { return -precision * (x - mean); }
};

struct SimpsonAxis {
    double lo, step;
    int points;
    double weight(int i) const {
        if (i == 0 || i == points - 1) return step / 3.0;
        return (i % 2 == 1 ? 4.0 : 2.0) * step / 3.0;
    }
    double at(int i) const { return lo + i * step; }
};

SimpsonAxis axis_for(const GaussianLaw& p, const GaussianLaw& q, int dim_index, int points) {
    require(points >= 5 && points % 2 == 1, "quadrature: need an odd point count >= 5");
    const double sp = std::sqrt(p.cov(dim_index, dim_index));
    const double sq = std::sqrt(q.cov(dim_index, dim_index));
    const double lo = std::min(p.mean(dim_index) - 10.0 * sp, q.mean(dim_index) - 10.0 * sq);
    const double hi = std::max(p.mean(dim_index) + 10.0 * sp, q.mean(dim_index) + 10.0 * sq);
    return {lo, (hi - lo) / (points - 1), points};
}

template <typename Integrand>
double integrate(const GaussianLaw& p, const GaussianLaw& q, int points,
                 const Integrand& fn) {
    const int d = p.dim();
    require(p.dim() == q.dim(), "quadrature: dimension mismatch");
    require(d == 1 || d == 2, "quadrature: only 1-d and 2-d pairs are supported");
    const PdfEval ep(p), eq(q);
    double total = 0.0;
    if (d == 1) {
        const SimpsonAxis ax = axis_for(p, q, 0, points);
        Vector x(1);
        for (int i = 0; i < ax.points; ++i) {
            x(0) = ax.at(i);
            total += ax.weight(i) * fn(ep, eq, x);
        }
        return total;
    }
    const SimpsonAxis ax0 = axis_for(p, q, 0, points);
    const SimpsonAxis ax1 = axis_for(p, q, 1, points);
    Vector x(2);
    for (int i = 0; i < ax0.points; ++i) {
        x(0) = ax0.at(i);
        double row = 0.0;
        for (int j = 0; j < ax1.points; ++j) {
            x(1) = ax1.at(j);
            row += ax1.weight(j) * fn(ep, eq, x);
        }
        total += ax0.weight(i) * row;
    }
    return total;
}

}  // namespace

double gaussian_entropy_quadrature(const GaussianLaw& p, const GaussianLaw& q,
                                   int points_per_dim) {
    return integrate(p, q, points_per_dim,
                     [](const PdfEval& ep, const PdfEval& eq, const Vector& x) {
                         const double lp = ep.log_pdf(x);
                         return std::exp(lp) * (lp - eq.log_pdf(x));
                     });
}

double gaussian_fisher_quadrature(const GaussianLaw& p, const GaussianLaw& q,
                                  int points_per_dim) {
    return integrate(p, q, points_per_dim,
                     [](const PdfEval& ep, const PdfEval& eq, const Vector& x) {
                         const Vector diff = ep.score(x) - eq.score(x);
                         return std::exp(ep.log_pdf(x)) * diff.squaredNorm();
                     });
}

double gaussian_tv_quadrature(const GaussianLaw& p, const GaussianLaw& q,
                              int points_per_dim) {
    return 0.5 * integrate(p, q, points_per_dim,
                           [](const PdfEval& ep, const PdfEval& eq, const Vector& x) {
                               return std::abs(std::exp(ep.log_pdf(x)) -
                                               std::exp(eq.log_pdf(x)));
                           });
}

}  // namespace graphonlab
