// linalg_detail.hpp: rank decisions shared by the algebra routines (internal)

#pragma once

#include "ethsim/operator.hpp"

#include <functional>

namespace ethsim::detail {

/// Orthonormal basis of ker(m). Singular values below tol * max(sigma_max, scale)
/// count as zero; `scale` keeps an all-but-zero matrix from being promoted to full rank.
Eigen::MatrixXcd null_space(const Eigen::MatrixXcd& m, double tol, double scale);

/// Orthonormal basis of {c in C^dim : apply(k, c) = 0 for k = 0..n_blocks-1}.
/// apply(k, Z) returns the k-th constraint block evaluated on the columns of Z; the
/// candidate space shrinks block by block.
Eigen::MatrixXcd joint_null_space(Index dim, Index n_blocks,
                                  const std::function<Eigen::MatrixXcd(Index, const Eigen::MatrixXcd&)>& apply,
                                  double tol, double scale);

/// Orthonormal basis of the column span, dropping directions with relative singular
/// value below tol.
Eigen::MatrixXcd orthonormal_columns(const Eigen::MatrixXcd& m, double tol);

}  // namespace ethsim::detail
