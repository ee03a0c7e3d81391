// gns.hpp: GNS representation of (algebra, state) and conditional expectations
// onto the span of an event family

#pragma once

#include "ethsim/algebra.hpp"
#include "ethsim/projections.hpp"
#include "ethsim/state.hpp"

namespace ethsim {

class GnsSpace {
public:
    GnsSpace(const OperatorAlgebra& alg, const State& omega, const NumericPolicy& policy = default_policy());

    /// Dimension after quotienting the omega-null directions.
    Index dim() const { return transform_.rows(); }
    /// Image of A in H_omega; throws InvalidInput if A is outside the algebra.
    Vector embed(const Operator& a) const;
    const Vector& cyclic_vector() const { return cyclic_; }

    /// Max |<embed(B_i), embed(B_j)> - omega(B_i* B_j)| over basis pairs.
    double inner_product_defect() const;

private:
    OperatorAlgebra alg_;
    Operator rho_;
    Eigen::MatrixXcd transform_;  // k × m: coordinates -> GNS vector
    Vector cyclic_;
    double tol_member_;
};

/// eps_omega(A) = sum_j omega(pi_j A pi_j)/omega(pi_j) pi_j. Throws NumericFailure when
/// some omega(pi_j) < eps_floor.
Operator conditional_expectation(const OperatorAlgebra& alg, const State& omega, const PotentialEvent& event,
                                 const Operator& a, const NumericPolicy& policy = default_policy());

/// Same map built geometrically: orthogonal projection of embed(A) onto
/// span{embed(pi_j)} in the GNS space, read back as a combination of the pi_j.
Operator conditional_expectation_gns(const GnsSpace& gns, const PotentialEvent& event, const Operator& a,
                                     const State& omega, const NumericPolicy& policy = default_policy());

Operator conditional_expectation_gns(const OperatorAlgebra& alg, const State& omega, const PotentialEvent& event,
                                     const Operator& a, const NumericPolicy& policy = default_policy());

}  // namespace ethsim
