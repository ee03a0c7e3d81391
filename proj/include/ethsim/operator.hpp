// operator.hpp: dense complex operators and the small helpers every module uses

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>

namespace ethsim {

using cplx = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline Operator identity(Index n) { return Operator::Identity(n, n); }

inline Operator pauli_x() {
    Operator m(2, 2);
    m << 0.0, 1.0,
         1.0, 0.0;
    return m;
}

inline Operator pauli_y() {
    Operator m(2, 2);
    m << 0.0, cplx(0.0, -1.0),
         cplx(0.0, 1.0), 0.0;
    return m;
}

inline Operator pauli_z() {
    Operator m(2, 2);
    m << 1.0, 0.0,
         0.0, -1.0;
    return m;
}

/// |i><j| on C^n.
inline Operator matrix_unit(Index n, Index i, Index j) {
    Operator m = Operator::Zero(n, n);
    m(i, j) = 1.0;
    return m;
}

inline Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

/// <A,B>_HS = tr(A* B)
inline cplx hs_inner(const Operator& a, const Operator& b) {
    return (a.adjoint() * b).trace();
}

/// Column-major flattening; HS inner products become vector dot products.
inline Vector vec(const Operator& a) {
    return Eigen::Map<const Vector>(a.data(), a.size());
}

inline Operator unvec(const Eigen::Ref<const Vector>& v, Index n) {
    return Eigen::Map<const Operator>(v.data(), n, n);
}

/// Spectral norm (largest singular value).
double op_norm(const Operator& a);

bool is_hermitian(const Operator& a, double tol);

/// Orthogonal projection: P = P* = P^2 within tol (operator norm).
bool is_projection(const Operator& a, double tol);

bool is_unitary(const Operator& a, double tol);

Operator kron(const Operator& a, const Operator& b);

/// sigma . n for a real 3-vector n.
Operator spin_along(const Eigen::Vector3d& n);

/// (1 + s sigma.n)/2, s = ±1.
Operator spin_projection(const Eigen::Vector3d& n, int sign);

}  // namespace ethsim
