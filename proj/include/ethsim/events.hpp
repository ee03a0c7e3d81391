// events.hpp: event detection, Born sampling and state collapse
//
// The event algebra at P is the center of the centralizer of omega restricted to E_P.
// Because E_P = B(H_{S_P}) ⊗ 1, every computation runs on H_{S_P} with the reduced
// density matrix; projections are lifted back to the full space at the end.

#pragma once

#include "ethsim/algebra.hpp"
#include "ethsim/projections.hpp"
#include "ethsim/spacetime.hpp"
#include "ethsim/state.hpp"

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace ethsim {

struct EventDetection {
    Point point;
    CellSet support;                    // S_P
    OperatorAlgebra event_algebra;      // Z_{omega_P} on H_{S_P}
    PotentialEvent local_projections;   // minimal projections of event_algebra, on H_{S_P}
    PotentialEvent projections;         // the same, lifted to the net Hilbert space
    std::vector<double> probabilities;  // omega(pi_i)
    bool happened = false;
    bool dense = true;  // generic centralizer route (false: eigenprojections of the reduced state)

    /// Number of projections with weight >= prob_floor.
    int positive_count(double prob_floor) const;
};

struct ActualEvent {
    Point point;
    std::string label;
    std::size_t index = 0;  // position in the detection's family
    Operator projection;    // on the net Hilbert space
    double born_prob = 0.0;
    // Local form, used to collapse without forming global products.
    CellSet support;
    Operator local_projection;
    std::optional<CellLayout> layout;
};

/// Reduced state on H_{S_P}.
State local_state(const AlgebraNet& net, const Point& p, const State& omega);

EventDetection detect_event(const AlgebraNet& net, const Point& p, const State& omega,
                            const NumericPolicy& policy = default_policy());

/// Wraps an externally prescribed projective measurement at `p` (given on H_{S_P})
/// in the same record type; probabilities come from omega.
EventDetection prescribed_event(const AlgebraNet& net, const Point& p, const State& omega, PotentialEvent local,
                                const NumericPolicy& policy = default_policy());

/// ActualEvent for member `index` of a detection.
ActualEvent actual_from(const AlgebraNet& net, const EventDetection& detection, std::size_t index, double born_prob);

/// rho' = pi rho pi / tr(rho pi). Throws NumericFailure when tr(rho pi) < prob_floor.
State collapse(const State& omega, const ActualEvent& actual, const NumericPolicy& policy = default_policy());

/// Born-rule draw among members with weight >= prob_floor. Throws if the detection
/// did not happen.
ActualEvent sample_actual(const AlgebraNet& net, const EventDetection& detection, std::mt19937_64& rng,
                          const NumericPolicy& policy = default_policy());
ActualEvent sample_actual(const AlgebraNet& net, const EventDetection& detection, unsigned long long seed,
                          const NumericPolicy& policy = default_policy());

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double uniform01(std::mt19937_64& rng);

/// max over basis X of E_P of |omega(X) - sum_xi omega(pi_xi X pi_xi)|, evaluated with
/// the detection's local projections.
double mixture_check(const AlgebraNet& net, const Point& p, const State& omega, const EventDetection& detection);

/// max ||[pi^P_xi, pi^Q_eta]|| for detections at spacelike points.
double verify_axiom2(const AlgebraNet& net, const EventDetection& at_p, const EventDetection& at_q);

}  // namespace ethsim
