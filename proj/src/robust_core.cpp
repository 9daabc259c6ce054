#include "drkf/robust_core.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

namespace drkf {

namespace {

Vec spd_eigenvalues(const Mat& P, Mat* vectors = nullptr) {
    Eigen::SelfAdjointEigenSolver<Mat> es(symmetrized(P));
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("eigendecomposition of covariance failed");
    }
    if (vectors) *vectors = es.eigenvectors();
    return es.eigenvalues();
}

// gamma(., theta) is strictly increasing on [0, 1/dmax) and unbounded at the
// right end, so the root is always bracketed.
double bisect_theta(const Vec& eigs, double c, double tol, int max_iter) {
    const double dmax = eigs.maxCoeff();
    if (!(dmax > 0.0)) throw std::invalid_argument("P must be positive definite");
    double lo = 0.0;
    double hi = (1.0 - 1e-12) / dmax;
    double mid = 0.5 * hi;
    for (int it = 0; it < max_iter; ++it) {
        mid = 0.5 * (lo + hi);
        const double g = gamma_from_eigs(eigs, mid);
        if (std::abs(g - c) <= tol) return mid;
        if (g < c) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return mid;
}

}  // namespace

double gamma_from_eigs(const Vec& eigs, double theta) {
    const double dmax = eigs.maxCoeff();
    if (theta < 0.0 || theta * dmax >= 1.0) {
        throw std::domain_error("theta outside [0, 1/lambda_max)");
    }
    KahanSum acc;
    for (Eigen::Index i = 0; i < eigs.size(); ++i) {
        const double m = 1.0 - theta * eigs(i);
        acc.add(std::log(m) + 1.0 / m - 1.0);
    }
    return acc.value();
}

double gamma(const Mat& P, double theta) {
    return gamma_from_eigs(spd_eigenvalues(P), theta);
}

double solve_theta(const Mat& P, Tolerance c, double tol, int max_iter) {
    if (c.zero()) return 0.0;
    return bisect_theta(spd_eigenvalues(P), c.value(), tol, max_iter);
}

Mat inflate_covariance(const Mat& P, double theta) {
    if (theta == 0.0) return symmetrized(P);
    Mat U;
    const Vec d = spd_eigenvalues(P, &U);
    if (theta < 0.0 || theta * d.maxCoeff() >= 1.0) {
        throw std::domain_error("theta outside [0, 1/lambda_max)");
    }
    Vec inflated(d.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) inflated(i) = d(i) / (1.0 - theta * d(i));
    return symmetrized(U * inflated.asDiagonal() * U.transpose());
}

RobustFilterState make_filter_state(const Vec& xhat0, const Mat& V0) {
    RobustFilterState s;
    s.xhat = xhat0;
    s.V = symmetrized(V0);
    s.theta = 0.0;
    s.P = s.V;
    s.G = Mat();
    return s;
}

CovarianceStep covariance_step(const Mat& A, const Mat& BBt, const Mat& S, const Mat& V,
                               Tolerance c, double theta_tol) {
    CovarianceStep out;
    const Mat Vinv = spd_inverse(V, "prediction covariance V");
    const Mat inner = spd_inverse(symmetrized(Vinv + S), "information matrix V^{-1} + S");
    out.P = symmetrized(A * inner * A.transpose() + BBt);

    if (c.zero()) {
        out.theta = 0.0;
        out.V = out.P;
        return out;
    }

    Mat U;
    const Vec d = spd_eigenvalues(out.P, &U);
    const double theta = bisect_theta(d, c.value(), theta_tol, 200);
    out.theta = theta;
    Vec inflated(d.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) inflated(i) = d(i) / (1.0 - theta * d(i));
    out.V = symmetrized(U * inflated.asDiagonal() * U.transpose());
    return out;
}

RobustFilterState robust_predict_step(const GlobalModel& model, const RobustFilterState& state,
                                      const Vec& y, Tolerance c, const Vec* r) {
    if (y.size() != model.total_p()) {
        throw std::invalid_argument("measurement dimension mismatch: got " +
                                    std::to_string(y.size()) + ", expected " +
                                    std::to_string(model.total_p()));
    }
    RobustFilterState next;

    const Mat innov_cov = symmetrized(model.C * state.V * model.C.transpose() + model.R);
    next.G = spd_solve(innov_cov, model.C * state.V * model.A.transpose(),
                       "innovation covariance C V C^T + R")
                 .transpose();

    next.xhat = model.A * state.xhat + next.G * (y - model.C * state.xhat);
    if (r) next.xhat += *r;

    const CovarianceStep cov = covariance_step(model.A, model.BBt(), model.S_tot, state.V, c);
    next.P = cov.P;
    next.theta = cov.theta;
    next.V = cov.V;
    return next;
}

SteadyState steady_state(const GlobalModel& model, Tolerance c, double tol, int max_iter,
                         const Mat* V0) {
    const int n = model.n();
    Mat V = V0 ? symmetrized(*V0) : Mat::Identity(n, n);
    const Mat BBt = model.BBt();

    double change = std::numeric_limits<double>::infinity();
    CovarianceStep cov;
    for (int it = 1; it <= max_iter; ++it) {
        cov = covariance_step(model.A, BBt, model.S_tot, V, c);
        change = (cov.V - V).norm();
        V = cov.V;
        if (change <= tol) {
            SteadyState out;
            out.P = cov.P;
            out.theta = cov.theta;
            out.V = V;
            const Mat innov_cov = symmetrized(model.C * V * model.C.transpose() + model.R);
            out.G = spd_solve(innov_cov, model.C * V * model.A.transpose(),
                              "steady innovation covariance")
                        .transpose();
            out.iterations = it;
            const Mat rhs = symmetrized(
                model.A *
                    spd_inverse(symmetrized(spd_inverse(out.P, "steady P") -
                                            out.theta * Mat::Identity(n, n) + model.S_tot),
                                "steady information matrix") *
                    model.A.transpose() +
                BBt);
            out.riccati_residual = (out.P - rhs).norm();
            return out;
        }
    }
    throw SteadyStateError("covariance iteration did not settle after " +
                               std::to_string(max_iter) + " steps (last change " +
                               std::to_string(change) + "); tolerance c may be too large",
                           V, change, max_iter);
}

}  // namespace drkf
