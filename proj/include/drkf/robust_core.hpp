#pragma once

#include <stdexcept>

#include "drkf/linalg.hpp"
#include "drkf/model.hpp"

namespace drkf {

/// Per-step relative-entropy budget (nats) between the actual and the nominal
/// transition density.
class Tolerance {
public:
    explicit Tolerance(double c) : c_(c) {
        if (!(c >= 0.0)) throw std::invalid_argument("tolerance must be nonnegative");
    }
    double value() const { return c_; }
    bool zero() const { return c_ == 0.0; }

private:
    double c_;
};

/// gamma(P, theta) = log det(I - theta P) + tr((I - theta P)^{-1} - I).
/// Defined for 0 <= theta < 1/lambda_max(P); zero at theta = 0 and strictly
/// increasing to +inf at the right end of the domain.
double gamma(const Mat& P, double theta);

/// Same map evaluated from the eigenvalues of P.
double gamma_from_eigs(const Vec& eigs, double theta);

/// Solves gamma(P, theta) = c by bisection on [0, (1-1e-12)/lambda_max(P)].
/// Returns exactly 0 for c = 0. Stops at |gamma - c| <= tol or after max_iter
/// halvings, whichever comes first.
double solve_theta(const Mat& P, Tolerance c, double tol = 1e-10, int max_iter = 200);

/// (P^{-1} - theta I)^{-1} computed from the eigendecomposition of P, which
/// stays stable as theta approaches 1/lambda_max(P).
Mat inflate_covariance(const Mat& P, double theta);

/// State of a risk-sensitive predictor: the one-step prediction xhat, the
/// inflated covariance V used for the next gain, and the last P / theta / G
/// that produced them.
struct RobustFilterState {
    Vec xhat;
    Mat V;
    double theta = 0.0;
    Mat P;
    Mat G;
};

RobustFilterState make_filter_state(const Vec& xhat0, const Mat& V0);

/// Shared covariance update: P' = A (V^{-1} + S)^{-1} A^T + BBt, theta from
/// gamma(P', theta) = c, V' = (P'^{-1} - theta I)^{-1}. V' is assembled from
/// the eigendecomposition of P', which stays stable as theta approaches
/// 1/lambda_max(P').
struct CovarianceStep {
    Mat P;
    double theta = 0.0;
    Mat V;
};

CovarianceStep covariance_step(const Mat& A, const Mat& BBt, const Mat& S, const Mat& V,
                               Tolerance c, double theta_tol = 1e-10);

/// One prediction step of the centralized risk-sensitive filter. With c = 0
/// it coincides with the standard Kalman predictor. The optional deterministic
/// input r enters the state prediction only.
RobustFilterState robust_predict_step(const GlobalModel& model, const RobustFilterState& state,
                                      const Vec& y, Tolerance c, const Vec* r = nullptr);

struct SteadyState {
    Mat P;
    double theta = 0.0;
    Mat V;
    Mat G;
    int iterations = 0;
    double riccati_residual = 0.0;  // Frobenius residual of the fixed-point equation
};

/// Thrown when the covariance iteration fails to settle; carries the last
/// iterate so the caller can inspect how far it got (typically a sign that the
/// tolerance c is too large for this model).
class SteadyStateError : public std::runtime_error {
public:
    SteadyStateError(const std::string& msg, Mat last_v, double last_change, int iterations)
        : std::runtime_error(msg),
          last_V(std::move(last_v)),
          last_change(last_change),
          iterations(iterations) {}

    Mat last_V;
    double last_change;
    int iterations;
};

/// Fixed point of the V -> P -> theta -> V map, found by iteration from V0
/// (identity when not given). Converged when the Frobenius change of V drops
/// below tol.
SteadyState steady_state(const GlobalModel& model, Tolerance c, double tol = 1e-10,
                         int max_iter = 20000, const Mat* V0 = nullptr);

}  // namespace drkf
