// histories.hpp: history operators and the branching process along a foliation
//
// Every point of a leaf is tested against the leaf-entry state; collapses are then
// applied in canonical (left-to-right) order, each outcome weighted by the state left
// by the previous collapses on the same leaf.

#pragma once

#include "ethsim/events.hpp"

#include <map>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

namespace ethsim {

struct HistoryOperator {
    struct SpacelikePair {
        std::size_t first = 0;
        std::size_t second = 0;
        double commutator_norm = 0.0;
    };

    std::vector<ActualEvent> factors;  // causal order, earliest first (rightmost in the product)
    Operator matrix;                   // factors.back() * ... * factors.front()
    std::vector<SpacelikePair> spacelike;
    bool flagged = false;              // some spacelike pair fails to commute within tol_axiom2
};

/// Orders the factors past-to-future (ties between spacelike points by tau, then x) and
/// multiplies them. Throws InvalidInput for two events at the same point.
HistoryOperator history_operator(const std::vector<ActualEvent>& events, const AlgebraNet& net,
                                 const NumericPolicy& policy = default_policy());

/// rho' = H rho H* / tr(H rho H*). Throws NumericFailure below prob_floor.
State propagate_state(const State& initial, const HistoryOperator& h, const NumericPolicy& policy = default_policy());

/// tr(rho H* H)
double history_probability(const State& initial, const HistoryOperator& h);

/// U rho U*; U must be unitary within tol_proj.
State apply_propagator(const AlgebraNet& net, const Operator& u, const State& state,
                       const NumericPolicy& policy = default_policy());

enum class Axiom2Mode { warn, abort };

struct BranchOptions {
    std::size_t max_branches = 10000;
    Axiom2Mode axiom2 = Axiom2Mode::warn;
    /// Projective measurements imposed at given points (on H_{S_P}) instead of detection.
    std::map<Point, PotentialEvent> prescribed;
    /// Unitary applied after leaf k, for k < leaves - 1. Missing entries mean no dynamics.
    std::map<int, Operator> propagators;
    /// Keep the post-event state on interior nodes (terminal nodes always keep theirs).
    bool retain_interior_states = true;
};

struct BranchNode {
    int leaf_index = -1;  // -1 for the root
    Point point;
    std::optional<ActualEvent> actual;
    std::optional<State> state_after;
    double cond_prob = 1.0;
    double path_prob = 1.0;
    bool happened = false;
    Index event_algebra_dim = 0;
    double axiom2_norm = 0.0;  // max spacelike commutator among the leaf's detections
    std::vector<BranchNode> children;
};

struct SpectrumEntry {
    Point point;
    Index event_algebra_dim = 0;
    std::size_t projections = 0;
    auto operator<=>(const SpectrumEntry&) const = default;
};

struct HistoryTree {
    BranchNode root;
    State initial;
    Foliation foliation;
    double pruned_mass = 0.0;
    std::size_t leaf_count = 0;
    double max_axiom2 = 0.0;
    /// Distinct event algebras met during the expansion (non-commutative spectrum snapshot).
    std::vector<SpectrumEntry> spectrum;
};

struct LeafPath {
    std::vector<const BranchNode*> nodes;  // root excluded
    double probability = 1.0;
    std::string key;  // "(tau,x):label ..." over nodes with an actual event
};

HistoryTree enumerate_tree(const AlgebraNet& net, const Foliation& foliation, const State& initial,
                           const BranchOptions& options = {}, const NumericPolicy& policy = default_policy());

std::vector<LeafPath> leaf_paths(const HistoryTree& tree);

/// Max over leaves of |tr(rho H* H) - product of cond_probs|. Propagators are not part
/// of the history operator, so the check requires a tree built without them.
double chain_rule_defect(const HistoryTree& tree, const AlgebraNet& net, const NumericPolicy& policy = default_policy());

struct SampledHistory {
    std::vector<ActualEvent> events;
    State final_state;
    double probability = 1.0;  // product of the drawn conditional probabilities
    std::string key;
};

SampledHistory sample_history(const AlgebraNet& net, const Foliation& foliation, const State& initial,
                              std::mt19937_64& rng, const BranchOptions& options = {},
                              const NumericPolicy& policy = default_policy());
SampledHistory sample_history(const AlgebraNet& net, const Foliation& foliation, const State& initial,
                              unsigned long long seed, const BranchOptions& options = {},
                              const NumericPolicy& policy = default_policy());

/// Draws histories repeatedly from one (net, foliation, initial state); `net` must outlive
/// the sampler. Leaf scans are memoized on the exact leaf-entry density matrix, so the
/// results equal sample_history's.
class HistorySampler {
public:
    HistorySampler(const AlgebraNet& net, Foliation foliation, State initial, BranchOptions options = {},
                   NumericPolicy policy = default_policy());

    SampledHistory sample(std::mt19937_64& rng);
    SampledHistory sample(unsigned long long seed);

    double max_axiom2() const { return max_axiom2_; }
    std::size_t cached_scans() const { return cache_.size(); }

private:
    struct Scan {
        std::size_t leaf = 0;
        Operator entry;
        std::vector<EventDetection> detections;
        double axiom2 = 0.0;
    };
    const Scan& scan(std::size_t leaf, const State& entry);

    const AlgebraNet& net_;
    Foliation foliation_;
    State initial_;
    BranchOptions options_;
    NumericPolicy policy_;
    std::unordered_multimap<std::size_t, Scan> cache_;
    Scan scratch_;
    double max_axiom2_ = 0.0;
};

/// Seed for sample i of a run seeded with `seed` (splitmix64 of the pair).
unsigned long long derive_seed(unsigned long long seed, unsigned long long i);

}  // namespace ethsim
