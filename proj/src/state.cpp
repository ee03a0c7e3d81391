#include "ethsim/state.hpp"
#include "ethsim/algebra.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace ethsim {

State::State(Operator rho, const NumericPolicy& policy) : rho_(std::move(rho)) {
    if (rho_.rows() == 0 || rho_.rows() != rho_.cols()) throw InvalidInput("State: density matrix must be square");
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > 1e3 * policy.tol_psd)
        throw InvalidInput("State: density matrix is not self-adjoint");
    rho_ = 0.5 * (rho_ + rho_.adjoint()).eval();
    const double tr = rho_.trace().real();
    if (std::abs(tr - 1.0) >= policy.tol_trace)
        throw InvalidInput("State: trace deviates from 1 by " + std::to_string(tr - 1.0));
    const double lo = spectrum()(0);
    if (lo < -policy.tol_psd) throw InvalidInput("State: negative eigenvalue " + std::to_string(lo));
}

State State::trace_state(Index n) { return State(identity(n) / static_cast<double>(n)); }

State State::pure(const Vector& psi) {
    const double norm = psi.norm();
    if (norm == 0.0) throw InvalidInput("State::pure: zero vector");
    const Vector u = psi / norm;
    return State(u * u.adjoint());
}

State State::diagonal(const std::vector<double>& weights) {
    Operator rho = Operator::Zero(static_cast<Index>(weights.size()), static_cast<Index>(weights.size()));
    for (std::size_t i = 0; i < weights.size(); ++i) rho(static_cast<Index>(i), static_cast<Index>(i)) = weights[i];
    return State(rho);
}

State State::positive_by_construction(Operator rho, const NumericPolicy& policy) {
    if (rho.rows() == 0 || rho.rows() != rho.cols()) throw InvalidInput("State: density matrix must be square");
    rho = 0.5 * (rho + rho.adjoint()).eval();
    const double tr = rho.trace().real();
    if (std::abs(tr - 1.0) >= policy.tol_trace)
        throw InvalidInput("State: trace deviates from 1 by " + std::to_string(tr - 1.0));
    return State(std::move(rho), Unchecked{});
}

Eigen::VectorXd State::spectrum() const {
    Eigen::SelfAdjointEigenSolver<Operator> es(rho_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

State normalized_state(const Operator& positive, const NumericPolicy& policy) {
    const double tr = positive.trace().real();
    if (!(tr > 0.0)) throw NumericFailure("normalized_state: operator has non-positive trace");
    return State::positive_by_construction(positive / tr, policy);
}

RestrictedState support_restrict(const State& omega, const OperatorAlgebra& alg, const NumericPolicy& policy) {
    if (omega.dim() != alg.ambient_dim()) throw InvalidInput("support_restrict: state and algebra dimensions differ");
    Eigen::SelfAdjointEigenSolver<Operator> es(omega.rho());
    Eigen::VectorXd vals = es.eigenvalues();
    int clamped = 0;
    for (Index i = 0; i < vals.size(); ++i)
        if (vals(i) < policy.tol_psd) {
            vals(i) = 0.0;
            ++clamped;
        }
    const double total = vals.sum();
    if (total < policy.trace_floor) throw NumericFailure("support_restrict: nothing left after clamping");
    const Operator& v = es.eigenvectors();
    Operator rho = v * (vals / total).cast<cplx>().asDiagonal() * v.adjoint();
    Operator support = Operator::Zero(omega.dim(), omega.dim());
    for (Index i = 0; i < vals.size(); ++i)
        if (vals(i) > 0.0) support += v.col(i) * v.col(i).adjoint();
    if (clamped == 0) return {omega, support, 0};
    return {State(rho, policy), support, clamped};
}

}  // namespace ethsim
