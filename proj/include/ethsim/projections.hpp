// projections.hpp: families of orthogonal projections (potential events)

#pragma once

#include "ethsim/operator.hpp"
#include "ethsim/policy.hpp"

#include <string>
#include <vector>

namespace ethsim {

class OperatorAlgebra;

class PotentialEvent {
public:
    enum class Coverage { complete, partial };

    /// Checks idempotence, self-adjointness and mutual orthogonality; with
    /// Coverage::complete also that the projections sum to the identity.
    PotentialEvent(std::vector<Operator> projections, std::vector<std::string> labels,
                   Coverage coverage = Coverage::complete, const NumericPolicy& policy = default_policy());

    /// Skips validation; for families derived from an already-validated one (e.g. by
    /// tensoring with the identity).
    static PotentialEvent unchecked(std::vector<Operator> projections, std::vector<std::string> labels,
                                    Coverage coverage);

    std::size_t size() const { return projections_.size(); }
    Index dim() const { return projections_.empty() ? 0 : projections_.front().rows(); }
    const Operator& projection(std::size_t i) const { return projections_[i]; }
    const std::string& label(std::size_t i) const { return labels_[i]; }
    const std::vector<Operator>& projections() const { return projections_; }
    const std::vector<std::string>& labels() const { return labels_; }
    Coverage coverage() const { return coverage_; }

    /// ||sum_i pi_i - 1||
    double completeness_defect() const;

private:
    PotentialEvent() = default;

    std::vector<Operator> projections_;
    std::vector<std::string> labels_;
    Coverage coverage_ = Coverage::complete;
};

/// Labels "0", "1", ... for n projections.
std::vector<std::string> index_labels(std::size_t n);

/// Minimal projections of an abelian *-algebra. A seeded generic self-adjoint
/// element is diagonalized and its eigenspaces grouped; the element is redrawn when
/// two distinct eigenvalues are closer than gap_min.
PotentialEvent minimal_projections(const OperatorAlgebra& abelian, const NumericPolicy& policy = default_policy());

/// Max operator-norm distance between two projection families after matching each
/// member of `a` to its nearest member of `b`. Infinite if sizes differ.
double projection_set_distance(const std::vector<Operator>& a, const std::vector<Operator>& b);

}  // namespace ethsim
