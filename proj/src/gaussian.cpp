#include "graphonlab/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace graphonlab {

namespace {

constexpr double kConditionCap = 1e12;

void check_spd(const Matrix& cov, const char* who) {
    require(cov.rows() == cov.cols(), std::string(who) + ": covariance must be square");
    const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
    for (int i = 0; i < cov.rows(); ++i)
        for (int j = 0; j < i; ++j)
            require(std::abs(cov(i, j) - cov(j, i)) <= 1e-12 * scale,
                    std::string(who) + ": covariance must be symmetric");
    Eigen::LLT<Matrix> llt(cov);
    require(llt.info() == Eigen::Success,
            std::string(who) + ": covariance must be positive definite");
}

// Cholesky factor with a condition-number guard on the spectrum.
Eigen::LLT<Matrix> guarded_llt(const Matrix& cov, const char* who) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(cov, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    require(lo > 0.0, std::string(who) + ": covariance must be positive definite");
    require(hi / lo <= kConditionCap, std::string(who) + ": covariance condition number over 1e12");
    Eigen::LLT<Matrix> llt(cov);
    require(llt.info() == Eigen::Success, std::string(who) + ": Cholesky failed");
    return llt;
}

double log_det_from_llt(const Eigen::LLT<Matrix>& llt) {
    return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

// Applies D = rate * (xi - diag(row sums)), extended blockwise over d
// coordinates, to the columns of a matrix. Matrices built from a step graphon
// use the block factorization xi = R V R^T / N, which keeps one application at
// O((N d)^2) regardless of N.
class DriftOperator {
public:
    DriftOperator(const InteractionMatrix& xi, double rate, int dim)
        : rate_(rate), n_(xi.size()), d_(dim), row_sums_(xi.row_sums()) {
        if (xi.blocks()) {
            block_values_ = xi.blocks()->values;
            block_of_ = xi.blocks()->block_of;
        } else {
            dense_ = xi.xi();
        }
    }

    Matrix apply(const Matrix& x) const {
        const int rows = n_ * d_;
        require(static_cast<int>(x.rows()) == rows, "DriftOperator: row mismatch");
        Matrix out(rows, x.cols());
        if (!block_of_.empty()) {
            const int m = static_cast<int>(block_values_.rows());
            Matrix agg = Matrix::Zero(m * d_, x.cols());
            for (long col = 0; col < x.cols(); ++col)
                for (int i = 0; i < n_; ++i)
                    for (int c = 0; c < d_; ++c)
                        agg(block_of_[i] * d_ + c, col) += x(i * d_ + c, col);
            // Block-level mixing; the 1/N of the embedding lives here.
            Matrix mixed(m * d_, x.cols());
            for (long col = 0; col < x.cols(); ++col)
                for (int b = 0; b < m; ++b)
                    for (int c = 0; c < d_; ++c) {
                        double acc = 0.0;
                        for (int b2 = 0; b2 < m; ++b2)
                            acc += block_values_(b, b2) * agg(b2 * d_ + c, col);
                        mixed(b * d_ + c, col) = acc / n_;
                    }
            for (long col = 0; col < x.cols(); ++col)
                for (int i = 0; i < n_; ++i)
                    for (int c = 0; c < d_; ++c)
                        out(i * d_ + c, col) =
                            rate_ * (mixed(block_of_[i] * d_ + c, col) -
                                     row_sums_(i) * x(i * d_ + c, col));
            return out;
        }
        if (d_ == 1) {
            out.noalias() = rate_ * (dense_ * x);
            for (long col = 0; col < x.cols(); ++col)
                for (int i = 0; i < n_; ++i) out(i, col) -= rate_ * row_sums_(i) * x(i, col);
            return out;
        }
        for (long col = 0; col < x.cols(); ++col)
            for (int i = 0; i < n_; ++i)
                for (int c = 0; c < d_; ++c) {
                    double acc = 0.0;
                    for (int j = 0; j < n_; ++j) acc += dense_(i, j) * x(j * d_ + c, col);
                    out(i * d_ + c, col) = rate_ * (acc - row_sums_(i) * x(i * d_ + c, col));
                }
        return out;
    }

    Vector apply_vec(const Vector& x) const { return apply(Matrix(x)).col(0); }

private:
    double rate_;
    int n_, d_;
    Vector row_sums_;
    Matrix dense_;
    Matrix block_values_;
    std::vector<int> block_of_;
};

int step_count(double T, double dt) {
    require(dt > 0.0, "evolve: dt must be positive");
    require(T >= 0.0, "evolve: T must be nonnegative");
    return std::max(1, static_cast<int>(std::ceil(T / dt - 1e-9)));
}

std::vector<int> sorted_subset(const std::vector<int>& v, int n, const char* who) {
    require(!v.empty(), std::string(who) + ": subset must be nonempty");
    std::set<int> s(v.begin(), v.end());
    require(s.size() == v.size(), std::string(who) + ": subset indices must be distinct");
    require(*s.begin() >= 0 && *s.rbegin() < n, std::string(who) + ": subset index out of range");
    return {s.begin(), s.end()};
}

}  // namespace

GaussianLaw::GaussianLaw(Vector mean_, Matrix cov_) : mean(std::move(mean_)), cov(std::move(cov_)) {
    require(mean.size() >= 1, "GaussianLaw: empty mean");
    require(cov.rows() == mean.size() && cov.cols() == mean.size(),
            "GaussianLaw: covariance shape must match the mean");
    require(mean.allFinite() && cov.allFinite(), "GaussianLaw: parameters must be finite");
    check_spd(cov, "GaussianLaw");
}

GaussianLaw GaussianLaw::standard(int dim) {
    return GaussianLaw(Vector::Zero(dim), Matrix::Identity(dim, dim));
}

JointGaussianState::JointGaussianState(int particles_, int dim_, Vector mean_, Matrix cov_,
                                       double time_)
    : particles(particles_), dim(dim_), mean(std::move(mean_)), cov(std::move(cov_)), time(time_) {
    require(particles >= 1 && dim >= 1, "JointGaussianState: need N >= 1, d >= 1");
    const int total = particles * dim;
    require(mean.size() == total && cov.rows() == total && cov.cols() == total,
            "JointGaussianState: shape mismatch");
    require(mean.allFinite() && cov.allFinite(), "JointGaussianState: parameters must be finite");
    check_spd(cov, "JointGaussianState");
}

JointGaussianState JointGaussianState::isotropic(int particles, int dim, double variance,
                                                 double mean_value) {
    require(variance > 0.0, "JointGaussianState: variance must be positive");
    const int total = particles * dim;
    return JointGaussianState(particles, dim, Vector::Constant(total, mean_value),
                              variance * Matrix::Identity(total, total));
}

JointGaussianState evolve_interacting_gaussian(const InteractionMatrix& xi, double rate,
                                               const JointGaussianState& init, double T,
                                               double dt) {
    require(xi.size() == init.particles, "evolve_interacting_gaussian: N mismatch");
    require(rate > 0.0, "evolve_interacting_gaussian: rate must be positive");
    const int steps = step_count(T, dt);
    const double h = T / steps;
    const DriftOperator op(xi, rate, init.dim);
    const int total = init.particles * init.dim;
    const Matrix eye = Matrix::Identity(total, total);

    Vector m = init.mean;
    Matrix s = init.cov;
    const auto cov_rhs = [&](const Matrix& sigma) {
        Matrix ds = op.apply(sigma);
        return Matrix(ds + ds.transpose() + eye);
    };
    for (int step = 0; step < steps; ++step) {
        const Vector k1m = op.apply_vec(m);
        const Matrix k1s = cov_rhs(s);
        const Vector k2m = op.apply_vec(m + 0.5 * h * k1m);
        const Matrix k2s = cov_rhs(s + 0.5 * h * k1s);
        const Vector k3m = op.apply_vec(m + 0.5 * h * k2m);
        const Matrix k3s = cov_rhs(s + 0.5 * h * k2s);
        const Vector k4m = op.apply_vec(m + h * k3m);
        const Matrix k4s = cov_rhs(s + h * k3s);
        m += h / 6.0 * (k1m + 2.0 * k2m + 2.0 * k3m + k4m);
        s += h / 6.0 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
        s = 0.5 * (s + s.transpose());  // keep exact symmetry against roundoff
    }
    return JointGaussianState(init.particles, init.dim, std::move(m), std::move(s),
                              init.time + T);
}

std::vector<GaussianLaw> evolve_projection_gaussian(const InteractionMatrix& xi, double rate,
                                                    const std::vector<GaussianLaw>& init,
                                                    double T, double dt) {
    const int n = xi.size();
    require(static_cast<int>(init.size()) == n, "evolve_projection_gaussian: need N marginals");
    require(rate > 0.0, "evolve_projection_gaussian: rate must be positive");
    const int d = init.front().dim();
    for (const auto& law : init)
        require(law.dim() == d, "evolve_projection_gaussian: marginal dims must agree");

    const int steps = step_count(T, dt);
    const double h = T / steps;
    const DriftOperator op(xi, rate, d);
    const Vector row_sums = xi.row_sums();
    const Matrix eye = Matrix::Identity(d, d);

    Vector m(n * d);
    std::vector<Matrix> covs(n);
    for (int i = 0; i < n; ++i) {
        m.segment(i * d, d) = init[i].mean;
        covs[i] = init[i].cov;
    }
    for (int step = 0; step < steps; ++step) {
        const Vector k1m = op.apply_vec(m);
        const Vector k2m = op.apply_vec(m + 0.5 * h * k1m);
        const Vector k3m = op.apply_vec(m + 0.5 * h * k2m);
        const Vector k4m = op.apply_vec(m + h * k3m);
        m += h / 6.0 * (k1m + 2.0 * k2m + 2.0 * k3m + k4m);
        for (int i = 0; i < n; ++i) {
            const double damping = -2.0 * rate * row_sums(i);
            const auto rhs = [&](const Matrix& c) { return Matrix(damping * c + eye); };
            const Matrix k1 = rhs(covs[i]);
            const Matrix k2 = rhs(covs[i] + 0.5 * h * k1);
            const Matrix k3 = rhs(covs[i] + 0.5 * h * k2);
            const Matrix k4 = rhs(covs[i] + h * k3);
            covs[i] += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
    }
    std::vector<GaussianLaw> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.emplace_back(Vector(m.segment(i * d, d)), covs[i]);
    return out;
}

std::vector<GaussianLaw> evolve_block_meanfield_gaussian(const Graphon& g, double rate,
                                                         const std::vector<GaussianLaw>& init,
                                                         double T, double dt) {
    const int m = g.block_count();
    require(static_cast<int>(init.size()) == m,
            "evolve_block_meanfield_gaussian: need one law per block");
    // Block u of the mean-field system is an OU particle coupled to the block
    // laws through weights g(u,v)/m, which is exactly the projection dynamics
    // for that interaction matrix.
    InteractionMatrix coupling(m, g.values() / m);
    return evolve_projection_gaussian(coupling, rate, init, T, dt);
}

GaussianLaw marginal_subset(const JointGaussianState& joint, const std::vector<int>& v) {
    const auto idx = sorted_subset(v, joint.particles, "marginal_subset");
    const int d = joint.dim;
    const int k = static_cast<int>(idx.size());
    Vector mean(k * d);
    Matrix cov(k * d, k * d);
    for (int a = 0; a < k; ++a) {
        mean.segment(a * d, d) = joint.mean.segment(idx[a] * d, d);
        for (int b = 0; b < k; ++b)
            cov.block(a * d, b * d, d, d) = joint.cov.block(idx[a] * d, idx[b] * d, d, d);
    }
    return GaussianLaw(std::move(mean), std::move(cov));
}

double relative_entropy_gaussian(const GaussianLaw& p, const GaussianLaw& q) {
    require(p.dim() == q.dim(), "relative_entropy_gaussian: dimension mismatch");
    const int d = p.dim();
    const auto llt_q = guarded_llt(q.cov, "relative_entropy_gaussian(q)");
    const auto llt_p = guarded_llt(p.cov, "relative_entropy_gaussian(p)");
    const Matrix solved = llt_q.solve(p.cov);
    const Vector dm = q.mean - p.mean;
    const double quad = dm.dot(llt_q.solve(dm));
    const double h = 0.5 * (solved.trace() - d + quad + log_det_from_llt(llt_q) -
                            log_det_from_llt(llt_p));
    return std::max(0.0, h);
}

double relative_fisher_gaussian(const GaussianLaw& p, const GaussianLaw& q) {
    require(p.dim() == q.dim(), "relative_fisher_gaussian: dimension mismatch");
    const int d = p.dim();
    const auto llt_q = guarded_llt(q.cov, "relative_fisher_gaussian(q)");
    const auto llt_p = guarded_llt(p.cov, "relative_fisher_gaussian(p)");
    const Matrix eye = Matrix::Identity(d, d);
    const Matrix a = llt_q.solve(eye) - llt_p.solve(eye);
    const Vector c = llt_q.solve(p.mean - q.mean);
    // grad log (dp/dq)(x) = A (x - m_p) + c under x ~ p.
    const double fisher = (a * p.cov * a.transpose()).trace() + c.squaredNorm();
    return std::max(0.0, fisher);
}

std::pair<double, double> subset_info(const JointGaussianState& joint,
                                      const std::vector<GaussianLaw>& marginals,
                                      const std::vector<int>& v) {
    require(static_cast<int>(marginals.size()) == joint.particles,
            "subset_info: need one marginal per particle");
    const auto idx = sorted_subset(v, joint.particles, "subset_info");
    const int d = joint.dim;
    const int k = static_cast<int>(idx.size());
    const GaussianLaw p = marginal_subset(joint, idx);
    Vector mean(k * d);
    Matrix cov = Matrix::Zero(k * d, k * d);
    for (int a = 0; a < k; ++a) {
        const GaussianLaw& law = marginals[idx[a]];
        require(law.dim() == d, "subset_info: marginal dimension mismatch");
        mean.segment(a * d, d) = law.mean;
        cov.block(a * d, a * d, d, d) = law.cov;
    }
    const GaussianLaw q(std::move(mean), std::move(cov));
    return {relative_entropy_gaussian(p, q), relative_fisher_gaussian(p, q)};
}

GaussianLaw conditional_gaussian(const JointGaussianState& joint, const std::vector<int>& v,
                                 int k, const Vector& x_v) {
    const auto idx = sorted_subset(v, joint.particles, "conditional_gaussian");
    require(k >= 0 && k < joint.particles, "conditional_gaussian: index out of range");
    require(std::find(idx.begin(), idx.end(), k) == idx.end(),
            "conditional_gaussian: k must not belong to v");
    const int d = joint.dim;
    const int kv = static_cast<int>(idx.size());
    require(x_v.size() == kv * d, "conditional_gaussian: x_v must stack the blocks of v");

    Matrix cov_vv(kv * d, kv * d);
    Matrix cov_kv(d, kv * d);
    Vector mean_v(kv * d);
    for (int a = 0; a < kv; ++a) {
        mean_v.segment(a * d, d) = joint.mean.segment(idx[a] * d, d);
        cov_kv.block(0, a * d, d, d) = joint.cov.block(k * d, idx[a] * d, d, d);
        for (int b = 0; b < kv; ++b)
            cov_vv.block(a * d, b * d, d, d) = joint.cov.block(idx[a] * d, idx[b] * d, d, d);
    }
    Eigen::LLT<Matrix> llt(cov_vv);
    require(llt.info() == Eigen::Success, "conditional_gaussian: singular conditioning block");
    const Matrix gain = llt.solve(cov_kv.transpose()).transpose();
    Vector mean = joint.mean.segment(k * d, d) + gain * (x_v - mean_v);
    Matrix cov = joint.cov.block(k * d, k * d, d, d) - gain * cov_kv.transpose();
    cov = 0.5 * (cov + cov.transpose());
    return GaussianLaw(std::move(mean), std::move(cov));
}

}  // namespace graphonlab
