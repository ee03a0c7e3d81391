// algebra.hpp: finite-dimensional *-algebras of matrices
//
// An OperatorAlgebra is stored as a Hilbert–Schmidt orthonormal basis, kept as the
// columns of an n^2 × m matrix of vectorized operators. All constructions below are
// null-space or grow-and-orthonormalize computations on that representation.

#pragma once

#include "ethsim/operator.hpp"
#include "ethsim/policy.hpp"

#include <vector>

namespace ethsim {

class State;

class OperatorAlgebra {
public:
    /// Columns of `basis` must already be HS-orthonormal vectorized n×n operators.
    OperatorAlgebra(Index ambient_dim, Eigen::MatrixXcd basis);

    Index ambient_dim() const { return n_; }
    Index dim() const { return basis_.cols(); }

    const Eigen::MatrixXcd& basis_matrix() const { return basis_; }
    Operator basis(Index i) const { return unvec(basis_.col(i), n_); }
    std::vector<Operator> basis_ops() const;

    /// HS coordinates <B_i, A>.
    Vector coordinates(const Operator& a) const;
    /// Orthogonal (HS) projection of `a` onto the span.
    Operator project(const Operator& a) const;
    /// ||a - project(a)||_HS
    double residual(const Operator& a) const;
    bool contains(const Operator& a, double tol) const;
    bool contains_identity(double tol) const;

    /// Max deviation of the basis Gram matrix from the identity.
    double orthonormality_defect() const;
    /// Max residual of B_i B_j and B_i* outside the span (closure invariant).
    double closure_defect() const;

private:
    Index n_;
    Eigen::MatrixXcd basis_;
};

/// Smallest *-closed, identity-containing span containing `generators`.
OperatorAlgebra algebra_closure(const std::vector<Operator>& generators, Index ambient_dim,
                                const NumericPolicy& policy = default_policy());

/// Orthonormal basis for the span of `ops` with no closure step.
OperatorAlgebra span_of(const std::vector<Operator>& ops, Index ambient_dim,
                        const NumericPolicy& policy = default_policy());

OperatorAlgebra full_algebra(Index n);
OperatorAlgebra scalar_algebra(Index n);

OperatorAlgebra commutant(const OperatorAlgebra& alg, const NumericPolicy& policy = default_policy());
OperatorAlgebra center(const OperatorAlgebra& alg, const NumericPolicy& policy = default_policy());
OperatorAlgebra centralizer(const OperatorAlgebra& alg, const State& omega,
                            const NumericPolicy& policy = default_policy());
OperatorAlgebra center_of_centralizer(const OperatorAlgebra& alg, const State& omega,
                                      const NumericPolicy& policy = default_policy());
OperatorAlgebra intersect(const OperatorAlgebra& a, const OperatorAlgebra& b,
                          const NumericPolicy& policy = default_policy());

/// Max over basis elements of `sub` of their residual outside `super`.
double subspace_residual(const OperatorAlgebra& super, const OperatorAlgebra& sub);
bool is_contained(const OperatorAlgebra& sub, const OperatorAlgebra& super, double tol);
/// Two-sided span equality; basis choice is not canonical.
bool algebras_equal(const OperatorAlgebra& a, const OperatorAlgebra& b, double tol);
double max_basis_commutator(const OperatorAlgebra& alg);
bool is_abelian(const OperatorAlgebra& alg, double tol);

}  // namespace ethsim
