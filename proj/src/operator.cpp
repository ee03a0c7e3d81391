#include "ethsim/operator.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace ethsim {

double op_norm(const Operator& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<Operator> svd(a);
    return svd.singularValues()(0);
}

bool is_hermitian(const Operator& a, double tol) {
    if (a.rows() != a.cols()) return false;
    return (a - a.adjoint()).norm() <= tol * std::max(1.0, a.norm());
}

bool is_projection(const Operator& a, double tol) {
    if (a.rows() != a.cols()) return false;
    if (op_norm(a - a.adjoint()) > tol) return false;
    return op_norm(a * a - a) <= tol;
}

bool is_unitary(const Operator& a, double tol) {
    if (a.rows() != a.cols()) return false;
    return op_norm(a.adjoint() * a - identity(a.rows())) <= tol;
}

Operator kron(const Operator& a, const Operator& b) {
    Operator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Operator spin_along(const Eigen::Vector3d& n) {
    return n.x() * pauli_x() + n.y() * pauli_y() + n.z() * pauli_z();
}

Operator spin_projection(const Eigen::Vector3d& n, int sign) {
    return 0.5 * (identity(2) + static_cast<double>(sign) * spin_along(n));
}

}  // namespace ethsim
