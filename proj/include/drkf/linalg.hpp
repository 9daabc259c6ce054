#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace drkf {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Exact symmetrization; applied after every covariance update to keep
/// round-off from accumulating into an asymmetric matrix.
inline Mat symmetrized(const Mat& x) { return 0.5 * (x + x.transpose()); }

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
/// Throws std::runtime_error (with eigenvalue bounds in the message) if the
/// factorization fails.
Mat chol_lower(const Mat& s, const std::string& what);

/// Inverse of a symmetric positive definite matrix via Cholesky solves.
Mat spd_inverse(const Mat& s, const std::string& what);

/// Solves s * x = b for symmetric positive definite s.
Mat spd_solve(const Mat& s, const Mat& b, const std::string& what);

/// Symmetric square root of a positive semidefinite matrix. Eigenvalues in
/// [-tol, 0) are clamped to zero; anything more negative throws.
Mat psd_sqrt(const Mat& s, const std::string& what);

Mat kron(const Mat& a, const Mat& b);

Mat block_diag(const std::vector<Mat>& blocks);

/// Numerical rank: singular values below rel_tol * sigma_max count as zero.
int numerical_rank(const Mat& m, double rel_tol = 1e-9);

double spectral_radius(const Mat& m);

double min_eigenvalue(const Mat& symmetric);

/// Compensated (Kahan) accumulator for long reductions.
class KahanSum {
public:
    void add(double v) {
        const double y = v - comp_;
        const double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace drkf
