#include "linalg_detail.hpp"

#include <Eigen/SVD>

#include <algorithm>

namespace ethsim::detail {

Eigen::MatrixXcd null_space(const Eigen::MatrixXcd& m, double tol, double scale) {
    const Index cols = m.cols();
    if (cols == 0) return Eigen::MatrixXcd(0, 0);
    if (m.rows() == 0) return Eigen::MatrixXcd::Identity(cols, cols);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double smax = s.size() > 0 ? s(0) : 0.0;
    const double cutoff = tol * std::max(smax, scale);
    Index rank = 0;
    for (Index i = 0; i < s.size(); ++i)
        if (s(i) > cutoff) ++rank;
    return svd.matrixV().rightCols(cols - rank);
}

Eigen::MatrixXcd joint_null_space(Index dim, Index n_blocks,
                                  const std::function<Eigen::MatrixXcd(Index, const Eigen::MatrixXcd&)>& apply,
                                  double tol, double scale) {
    Eigen::MatrixXcd z = Eigen::MatrixXcd::Identity(dim, dim);
    for (Index k = 0; k < n_blocks && z.cols() > 0; ++k) {
        const Eigen::MatrixXcd block = apply(k, z);
        if (block.size() == 0) continue;
        const Eigen::MatrixXcd kernel = null_space(block, tol, scale);
        if (kernel.cols() == z.cols()) continue;
        z = z * kernel;
    }
    return z;
}

Eigen::MatrixXcd orthonormal_columns(const Eigen::MatrixXcd& m, double tol) {
    if (m.cols() == 0) return Eigen::MatrixXcd(m.rows(), 0);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return Eigen::MatrixXcd(m.rows(), 0);
    Index rank = 0;
    for (Index i = 0; i < s.size(); ++i)
        if (s(i) > tol * s(0)) ++rank;
    return svd.matrixU().leftCols(rank);
}

}  // namespace ethsim::detail
