#include "ethsim/gns.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace ethsim {

GnsSpace::GnsSpace(const OperatorAlgebra& alg, const State& omega, const NumericPolicy& policy)
    : alg_(alg), rho_(omega.rho()), tol_member_(policy.tol_closure) {
    const Index n = alg.ambient_dim();
    if (omega.dim() != n) throw InvalidInput("GnsSpace: state and algebra live on different spaces");
    const Index m = alg.dim();
    const Eigen::MatrixXcd& q = alg.basis_matrix();
    // Column j of q_rho is vec(B_j rho), so q* q_rho holds tr(B_i* B_j rho).
    Eigen::MatrixXcd q_rho(n * n, m);
    for (Index j = 0; j < m; ++j) q_rho.col(j) = vec(alg.basis(j) * rho_);
    Eigen::MatrixXcd gram = q.adjoint() * q_rho;  // omega(B_i* B_j)
    gram = 0.5 * (gram + gram.adjoint()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
    std::vector<Index> kept;
    for (Index i = 0; i < m; ++i)
        if (es.eigenvalues()(i) >= policy.tol_gns_null) kept.push_back(i);
    transform_.resize(static_cast<Index>(kept.size()), m);
    for (std::size_t r = 0; r < kept.size(); ++r) {
        const Index i = kept[r];
        transform_.row(static_cast<Index>(r)) = std::sqrt(es.eigenvalues()(i)) * es.eigenvectors().col(i).adjoint();
    }
    cyclic_ = embed(identity(n));
}

Vector GnsSpace::embed(const Operator& a) const {
    if (!alg_.contains(a, std::max(tol_member_, 1e-9)))
        throw InvalidInput("GnsSpace::embed: operator is outside the algebra");
    return transform_ * alg_.coordinates(a);
}

double GnsSpace::inner_product_defect() const {
    double worst = 0.0;
    const auto ops = alg_.basis_ops();
    std::vector<Vector> images;
    for (const auto& b : ops) images.push_back(embed(b));
    for (std::size_t i = 0; i < ops.size(); ++i)
        for (std::size_t j = 0; j < ops.size(); ++j) {
            const cplx expected = (rho_ * ops[i].adjoint() * ops[j]).trace();
            worst = std::max(worst, std::abs(images[i].dot(images[j]) - expected));
        }
    return worst;
}

namespace {

void require_resolvable(const State& omega, const PotentialEvent& event, const NumericPolicy& policy) {
    if (event.dim() != omega.dim()) throw InvalidInput("conditional expectation: event and state dimensions differ");
    for (std::size_t j = 0; j < event.size(); ++j)
        if (omega.weight(event.projection(j)) < policy.eps_floor)
            throw NumericFailure("conditional expectation: omega(pi_" + event.label(j) + ") below eps_floor");
}

}  // namespace

Operator conditional_expectation(const OperatorAlgebra& alg, const State& omega, const PotentialEvent& event,
                                 const Operator& a, const NumericPolicy& policy) {
    require_resolvable(omega, event, policy);
    if (a.rows() != alg.ambient_dim()) throw InvalidInput("conditional expectation: operator dimension mismatch");
    Operator out = Operator::Zero(a.rows(), a.cols());
    for (const auto& p : event.projections()) out += (omega(p * a * p) / omega.weight(p)) * p;
    return out;
}

Operator conditional_expectation_gns(const GnsSpace& gns, const PotentialEvent& event, const Operator& a,
                                     const State& omega, const NumericPolicy& policy) {
    require_resolvable(omega, event, policy);
    const Vector target = gns.embed(a);
    Eigen::MatrixXcd span(gns.dim(), static_cast<Index>(event.size()));
    for (std::size_t j = 0; j < event.size(); ++j) span.col(static_cast<Index>(j)) = gns.embed(event.projection(j));
    const Eigen::MatrixXcd gram = span.adjoint() * span;
    const Vector coeffs = gram.ldlt().solve(span.adjoint() * target);
    Operator out = Operator::Zero(a.rows(), a.cols());
    for (std::size_t j = 0; j < event.size(); ++j) out += coeffs(static_cast<Index>(j)) * event.projection(j);
    return out;
}

Operator conditional_expectation_gns(const OperatorAlgebra& alg, const State& omega, const PotentialEvent& event,
                                     const Operator& a, const NumericPolicy& policy) {
    return conditional_expectation_gns(GnsSpace(alg, omega, policy), event, a, omega, policy);
}

}  // namespace ethsim
