// policy.hpp: numeric tolerances shared by every module, plus the error types

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ethsim {

/// Every threshold that can change a result lives here so a run report can echo it
/// and every test reads the same values.
struct NumericPolicy {
    double tol_basis = 1e-10;      // Hilbert–Schmidt orthonormality of algebra bases
    double tol_closure = 1e-10;    // span membership / closure residual
    double tol_proj = 1e-9;        // projection identities, probability sums
    double tol_psd = 1e-12;        // eigenvalue clamp for states
    double tol_trace = 1e-12;      // |tr(rho) - 1|
    double tol_gns = 1e-10;        // GNS inner-product reproduction
    double tol_gns_null = 1e-10;   // Gram eigenvalues treated as null
    double tol_ce = 1e-9;          // conditional expectation agreement
    double gap_min = 1e-6;         // eigengap needed to separate minimal projections
    double eps_floor = 1e-6;       // smallest admissible omega(pi_j) in conditional expectations
    int max_retries = 8;           // generic-element resampling in minimal_projections

    double prob_floor = 1e-9;      // "strictly positive" Born weight
    double trace_floor = 1e-9;     // support_restrict refuses to renormalize below this
    double tol_mixture = 1e-10;    // mixture identity on detected events
    double tol_axiom2 = 1e-9;      // spacelike event commutators
    double tol_tree = 1e-9;        // tree normalization / chain rule
    double match_threshold = 0.5;  // spectral projection to event projection matching

    // Dense-route limits. Above these the structured (tensor-factor) routes are used.
    std::size_t dense_event_basis_cap = 256;  // dim of E_P handled by the generic centralizer
    std::size_t dense_pdp_dim = 16;           // Hilbert dim of S_P ∪ S_Q for dense PDP checks
    std::size_t hilbert_cap = 4096;           // total net Hilbert dimension
    std::size_t max_branches = 10000;         // enumerated tree leaves

    unsigned long long generic_seed = 0x5eedc0ffeeULL;  // minimal_projections sampling
};

inline const NumericPolicy& default_policy() {
    static const NumericPolicy policy{};
    return policy;
}

/// Base for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inputs violate a documented precondition (shapes, membership, unit vectors...).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A numerical procedure could not certify its result (eigengap, null branch, ...).
class NumericFailure : public Error {
public:
    using Error::Error;
};

/// Hilbert dimension or branch count above the configured cap.
class CapExceeded : public Error {
public:
    using Error::Error;
};

/// Spacelike events failed to commute and the policy says abort.
class Axiom2Violation : public NumericFailure {
public:
    using NumericFailure::NumericFailure;
};

}  // namespace ethsim
