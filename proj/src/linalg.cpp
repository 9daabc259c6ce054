#include "drkf/linalg.hpp"

#include <Eigen/Eigenvalues>

namespace drkf {

namespace {

std::string eig_range(const Mat& s) {
    Eigen::SelfAdjointEigenSolver<Mat> es(symmetrized(s), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) return "eigenvalues unavailable";
    return "min eig " + std::to_string(es.eigenvalues().minCoeff()) +
           ", max eig " + std::to_string(es.eigenvalues().maxCoeff());
}

}  // namespace

Mat chol_lower(const Mat& s, const std::string& what) {
    Eigen::LLT<Mat> llt(symmetrized(s));
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error(what + ": not positive definite (" + eig_range(s) + ")");
    }
    return llt.matrixL();
}

Mat spd_inverse(const Mat& s, const std::string& what) {
    Eigen::LLT<Mat> llt(symmetrized(s));
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error(what + ": not positive definite (" + eig_range(s) + ")");
    }
    return symmetrized(llt.solve(Mat::Identity(s.rows(), s.cols())));
}

Mat spd_solve(const Mat& s, const Mat& b, const std::string& what) {
    Eigen::LLT<Mat> llt(symmetrized(s));
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error(what + ": not positive definite (" + eig_range(s) + ")");
    }
    return llt.solve(b);
}

Mat psd_sqrt(const Mat& s, const std::string& what) {
    Eigen::SelfAdjointEigenSolver<Mat> es(symmetrized(s));
    if (es.info() != Eigen::Success) {
        throw std::runtime_error(what + ": eigendecomposition failed");
    }
    Vec d = es.eigenvalues();
    const double tol = 1e-12 * std::max(1.0, d.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (d(i) < -tol) {
            throw std::runtime_error(what + ": not positive semidefinite (min eig " +
                                     std::to_string(d.minCoeff()) + ")");
        }
        d(i) = std::sqrt(std::max(d(i), 0.0));
    }
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Mat block_diag(const std::vector<Mat>& blocks) {
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    for (const Mat& b : blocks) {
        rows += b.rows();
        cols += b.cols();
    }
    Mat out = Mat::Zero(rows, cols);
    Eigen::Index r = 0;
    Eigen::Index c = 0;
    for (const Mat& b : blocks) {
        out.block(r, c, b.rows(), b.cols()) = b;
        r += b.rows();
        c += b.cols();
    }
    return out;
}

int numerical_rank(const Mat& m, double rel_tol) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Mat> svd(m);
    const Vec& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    const double cutoff = rel_tol * sv(0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff) ++rank;
    }
    return rank;
}

double spectral_radius(const Mat& m) {
    Eigen::EigenSolver<Mat> es(m, /*computeEigenvectors=*/false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Mat& symmetric) {
    Eigen::SelfAdjointEigenSolver<Mat> es(symmetrized(symmetric), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

}  // namespace drkf
