// state.hpp: density-matrix states omega(A) = tr(rho A)

#pragma once

#include "ethsim/operator.hpp"
#include "ethsim/policy.hpp"

#include <vector>

namespace ethsim {

class OperatorAlgebra;

class State {
public:
    /// Validates hermiticity, positivity (eigenvalues >= -tol_psd) and unit trace.
    explicit State(Operator rho, const NumericPolicy& policy = default_policy());

    static State trace_state(Index n);
    static State pure(const Vector& psi);
    static State diagonal(const std::vector<double>& weights);
    /// For matrices positive by construction (pi rho pi / tr, U rho U*): checks the
    /// trace only, skipping the eigenvalue test.
    static State positive_by_construction(Operator rho, const NumericPolicy& policy = default_policy());

    Index dim() const { return rho_.rows(); }
    const Operator& rho() const { return rho_; }

    cplx operator()(const Operator& a) const { return rho_.transpose().cwiseProduct(a).sum(); }
    /// Re omega(p); the Born weight for a projection.
    double weight(const Operator& p) const { return (*this)(p).real(); }

    /// Eigenvalues in ascending order.
    Eigen::VectorXd spectrum() const;

private:
    struct Unchecked {};
    State(Operator rho, Unchecked) : rho_(std::move(rho)) {}

    Operator rho_;
};

/// Builds a State from an unnormalized positive operator (divides by its trace).
State normalized_state(const Operator& positive, const NumericPolicy& policy = default_policy());

struct RestrictedState {
    State state;
    Operator support;  // projection onto the retained eigenspaces
    int clamped = 0;   // eigenvalues set to zero
};

/// Clamps eigenvalues below tol_psd to zero and renormalizes.
RestrictedState support_restrict(const State& omega, const OperatorAlgebra& alg,
                                 const NumericPolicy& policy = default_policy());

}  // namespace ethsim
