// measurement.hpp: recording of physical quantities by events
//
// Operators here live on H_{S_P}, the tensor factor that carries E_P.

#pragma once

#include "ethsim/events.hpp"
#include "ethsim/gns.hpp"

#include <map>
#include <string>
#include <vector>

namespace ethsim {

struct PhysicalQuantity {
    std::string name;
    std::map<Point, Operator> representative;  // X(P) on H_{S_P}
};

/// Local representative of a net-level operator X at p. Throws InvalidInput unless X is
/// self-adjoint and lies in E_P (within tol_closure).
Operator local_representative(const AlgebraNet& net, const Point& p, const Operator& global,
                              const NumericPolicy& policy = default_policy());

/// Checks every representative: self-adjoint, and sized for H_{S_P}.
void validate_quantity(const AlgebraNet& net, const PhysicalQuantity& q, const NumericPolicy& policy = default_policy());

struct SpectralDecomposition {
    std::vector<double> eigenvalues;  // x_k, aligned with projections
    PotentialEvent projections;       // Pi_k, by decreasing weight
    std::vector<double> weights;      // omega(Pi_k), decreasing
    std::size_t L = 0;                // minimal with omega(1 - sum_{k<=L} Pi_k) < epsilon

    /// ||X - sum x_k Pi_k||
    double reconstruction_defect(const Operator& x) const;
};

SpectralDecomposition spectral_decompose(const Operator& x, const State& omega, double epsilon = 0.05,
                                         const NumericPolicy& policy = default_policy());

/// The members of the detection with weight >= epsilon. Throws NumericFailure when the
/// discarded weight is not below epsilon.
PotentialEvent event_basis(const EventDetection& detection, double epsilon);

struct MatchedPair {
    std::size_t spectral_index = 0;
    std::size_t event_index = 0;
    double distance = 0.0;
};

struct RecordingReport {
    Point point;
    std::string quantity;
    double epsilon = 0.0;
    std::size_t L = 0;
    std::vector<double> spectral_weights;
    std::vector<double> basic_assumption_norms;  // ||Pi_k - eps_omega(Pi_k)||, k <= L
    double mixture_residual = 0.0;               // max_A |omega(A) - sum omega(Pi_k A Pi_k)| / ||A||
    double mixture_constant = 0.0;               // mixture_residual / (L epsilon)
    std::vector<MatchedPair> matched_pairs;
    bool matches_unique = true;
    double expectation_gap = 0.0;  // closed form vs GNS projection, operator norm
    std::size_t event_count = 0;   // N

    bool basic_assumption() const;
    bool is_recording() const { return basic_assumption(); }
};

RecordingReport recording_check(const AlgebraNet& net, const Point& p, const State& omega,
                                const PhysicalQuantity& quantity, double epsilon,
                                const NumericPolicy& policy = default_policy());

/// Same, against a given detection (e.g. a prescribed one).
RecordingReport recording_check(const AlgebraNet& net, const EventDetection& detection, const State& omega,
                                const PhysicalQuantity& quantity, double epsilon,
                                const NumericPolicy& policy = default_policy());

}  // namespace ethsim
