#include "ethsim/histories.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string_view>
#include <set>

namespace ethsim {

HistoryOperator history_operator(const std::vector<ActualEvent>& events, const AlgebraNet& net,
                                 const NumericPolicy& policy) {
    HistoryOperator h;
    h.factors = events;
    std::stable_sort(h.factors.begin(), h.factors.end(),
                     [](const ActualEvent& a, const ActualEvent& b) { return a.point < b.point; });
    for (std::size_t i = 1; i < h.factors.size(); ++i)
        if (h.factors[i].point == h.factors[i - 1].point)
            throw InvalidInput("history_operator: two events at " + to_string(h.factors[i].point));

    h.matrix = identity(net.ambient_dim());
    for (const auto& f : h.factors) {
        if (f.projection.rows() != net.ambient_dim()) throw InvalidInput("history_operator: factor dimension mismatch");
        h.matrix = f.projection * h.matrix;
    }
    for (std::size_t i = 0; i < h.factors.size(); ++i)
        for (std::size_t j = i + 1; j < h.factors.size(); ++j) {
            if (causal_relate(net.lattice(), h.factors[i].point, h.factors[j].point) != Relation::spacelike) continue;
            const double norm = op_norm(commutator(h.factors[i].projection, h.factors[j].projection));
            h.spacelike.push_back({i, j, norm});
            if (norm > policy.tol_axiom2) h.flagged = true;
        }
    return h;
}

State propagate_state(const State& initial, const HistoryOperator& h, const NumericPolicy& policy) {
    if (h.matrix.rows() != initial.dim()) throw InvalidInput("propagate_state: dimension mismatch");
    const Operator projected = h.matrix * initial.rho() * h.matrix.adjoint();
    const double norm = projected.trace().real();
    if (norm < policy.prob_floor) throw NumericFailure("propagate_state: history has probability below prob_floor");
    return State::positive_by_construction(projected / norm, policy);
}

double history_probability(const State& initial, const HistoryOperator& h) {
    return initial(h.matrix.adjoint() * h.matrix).real();
}

State apply_propagator(const AlgebraNet& net, const Operator& u, const State& state, const NumericPolicy& policy) {
    if (u.rows() != net.ambient_dim() || state.dim() != net.ambient_dim())
        throw InvalidInput("apply_propagator: dimension mismatch");
    if (!is_unitary(u, policy.tol_proj)) throw InvalidInput("apply_propagator: operator is not unitary");
    return State::positive_by_construction(u * state.rho() * u.adjoint(), policy);
}

unsigned long long derive_seed(unsigned long long seed, unsigned long long i) {
    unsigned long long z = seed + 0x9e3779b97f4a7c15ULL * (i + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

std::string event_key(const ActualEvent& e) { return to_string(e.point) + ":" + e.label; }

struct LeafScan {
    std::vector<EventDetection> detections;
    double axiom2 = 0.0;
};

LeafScan scan_leaf(const AlgebraNet& net, const std::vector<Point>& leaf, const State& entry,
                   const BranchOptions& options, const NumericPolicy& policy) {
    LeafScan scan;
    for (const auto& p : leaf) {
        auto it = options.prescribed.find(p);
        scan.detections.push_back(it != options.prescribed.end() ? prescribed_event(net, p, entry, it->second, policy)
                                                                 : detect_event(net, p, entry, policy));
    }
    for (std::size_t i = 0; i < scan.detections.size(); ++i)
        for (std::size_t j = i + 1; j < scan.detections.size(); ++j) {
            const auto& a = scan.detections[i];
            const auto& b = scan.detections[j];
            if (!a.happened || !b.happened) continue;
            if (causal_relate(net.lattice(), a.point, b.point) != Relation::spacelike) continue;
            scan.axiom2 = std::max(scan.axiom2, verify_axiom2(net, a, b));
        }
    if (options.axiom2 == Axiom2Mode::abort && scan.axiom2 > policy.tol_axiom2)
        throw Axiom2Violation("spacelike events on a leaf fail to commute: norm " + std::to_string(scan.axiom2));
    return scan;
}

// Weights of the detection's members in the current (partially collapsed) state.
std::vector<double> current_weights(const AlgebraNet& net, const EventDetection& d, const State& state) {
    const State reduced = local_state(net, d.point, state);
    std::vector<double> w;
    for (const auto& pi : d.local_projections.projections()) w.push_back(reduced.weight(pi));
    return w;
}

class TreeBuilder {
public:
    TreeBuilder(const AlgebraNet& net, const Foliation& foliation, const BranchOptions& options,
                const NumericPolicy& policy, HistoryTree& tree)
        : net_(net), foliation_(foliation), options_(options), policy_(policy), tree_(tree) {}

    void expand_leaf(BranchNode& parent, std::size_t leaf, const State& entry) {
        if (leaf == foliation_.leaves.size()) {
            finish(parent, entry);
            return;
        }
        LeafScan scan = scan_leaf(net_, foliation_.leaves[leaf], entry, options_, policy_);
        tree_.max_axiom2 = std::max(tree_.max_axiom2, scan.axiom2);
        for (const auto& d : scan.detections)
            if (d.happened) spectrum_.insert({d.point, d.event_algebra.dim(), d.projections.size()});
        process_point(parent, leaf, 0, scan, entry);
    }

private:
    void process_point(BranchNode& parent, std::size_t leaf, std::size_t j, const LeafScan& scan,
                       const State& state) {
        const auto& points = foliation_.leaves[leaf];
        if (j == points.size()) {
            auto u = options_.propagators.find(static_cast<int>(leaf));
            if (u != options_.propagators.end() && leaf + 1 < foliation_.leaves.size())
                expand_leaf(parent, leaf + 1, apply_propagator(net_, u->second, state, policy_));
            else
                expand_leaf(parent, leaf + 1, state);
            return;
        }
        const EventDetection& d = scan.detections[j];
        auto make_node = [&](double cond) {
            BranchNode node;
            node.leaf_index = static_cast<int>(leaf);
            node.point = points[j];
            node.cond_prob = cond;
            node.path_prob = parent.path_prob * cond;
            node.happened = d.happened;
            node.event_algebra_dim = d.event_algebra.dim();
            node.axiom2_norm = scan.axiom2;
            return node;
        };

        if (!d.happened) {
            BranchNode node = make_node(1.0);
            if (options_.retain_interior_states) node.state_after = state;
            process_point(node, leaf, j + 1, scan, state);
            parent.children.push_back(std::move(node));
            return;
        }
        const auto weights = current_weights(net_, d, state);
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (weights[i] < policy_.prob_floor) {
                tree_.pruned_mass += parent.path_prob * std::max(weights[i], 0.0);
                continue;
            }
            BranchNode node = make_node(weights[i]);
            node.actual = actual_from(net_, d, i, weights[i]);
            const State after = collapse(state, *node.actual, policy_);
            if (options_.retain_interior_states) node.state_after = after;
            process_point(node, leaf, j + 1, scan, after);
            parent.children.push_back(std::move(node));
        }
    }

    void finish(BranchNode& node, const State& state) {
        node.state_after = state;
        if (++tree_.leaf_count > options_.max_branches)
            throw CapExceeded("history tree exceeds " + std::to_string(options_.max_branches) + " branches");
    }

public:
    std::set<SpectrumEntry> spectrum_;

private:
    const AlgebraNet& net_;
    const Foliation& foliation_;
    const BranchOptions& options_;
    const NumericPolicy& policy_;
    HistoryTree& tree_;
};

}  // namespace

HistoryTree enumerate_tree(const AlgebraNet& net, const Foliation& foliation, const State& initial,
                           const BranchOptions& options, const NumericPolicy& policy) {
    if (initial.dim() != net.ambient_dim()) throw InvalidInput("enumerate_tree: initial state has wrong dimension");
    const std::string defect = foliation_defect(net.lattice(), foliation);
    if (!defect.empty()) throw InvalidInput("enumerate_tree: invalid foliation: " + defect);
    HistoryTree tree{BranchNode{}, initial, foliation, 0.0, 0, 0.0, {}};
    tree.root.state_after = initial;
    TreeBuilder builder(net, foliation, options, policy, tree);
    builder.expand_leaf(tree.root, 0, initial);
    tree.spectrum.assign(builder.spectrum_.begin(), builder.spectrum_.end());
    return tree;
}

std::vector<LeafPath> leaf_paths(const HistoryTree& tree) {
    std::vector<LeafPath> out;
    std::vector<const BranchNode*> stack;
    auto walk = [&](auto&& self, const BranchNode& node) -> void {
        if (node.children.empty()) {
            LeafPath path{stack, node.path_prob, {}};
            for (const auto* n : stack)
                if (n->actual) path.key += (path.key.empty() ? "" : " ") + event_key(*n->actual);
            out.push_back(std::move(path));
            return;
        }
        for (const auto& c : node.children) {
            stack.push_back(&c);
            self(self, c);
            stack.pop_back();
        }
    };
    walk(walk, tree.root);
    return out;
}

double chain_rule_defect(const HistoryTree& tree, const AlgebraNet& net, const NumericPolicy& policy) {
    double worst = 0.0;
    for (const auto& path : leaf_paths(tree)) {
        std::vector<ActualEvent> events;
        double product = 1.0;
        for (const auto* n : path.nodes) {
            product *= n->cond_prob;
            if (n->actual) events.push_back(*n->actual);
        }
        const HistoryOperator h = history_operator(events, net, policy);
        worst = std::max(worst, std::abs(history_probability(tree.initial, h) - product));
    }
    return worst;
}

HistorySampler::HistorySampler(const AlgebraNet& net, Foliation foliation, State initial, BranchOptions options,
                               NumericPolicy policy)
    : net_(net),
      foliation_(std::move(foliation)),
      initial_(std::move(initial)),
      options_(std::move(options)),
      policy_(policy) {
    if (initial_.dim() != net.ambient_dim()) throw InvalidInput("sample_history: initial state has wrong dimension");
    const std::string defect = foliation_defect(net.lattice(), foliation_);
    if (!defect.empty()) throw InvalidInput("sample_history: invalid foliation: " + defect);
}

const HistorySampler::Scan& HistorySampler::scan(std::size_t leaf, const State& entry) {
    constexpr std::size_t max_cached = 4096;
    const Operator& rho = entry.rho();
    const std::string_view bytes(reinterpret_cast<const char*>(rho.data()),
                                 static_cast<std::size_t>(rho.size()) * sizeof(cplx));
    const std::size_t h = std::hash<std::string_view>{}(bytes) ^ (leaf * 0x9e3779b97f4a7c15ULL);
    auto [lo, hi] = cache_.equal_range(h);
    for (auto it = lo; it != hi; ++it)
        if (it->second.leaf == leaf && it->second.entry.size() == rho.size() &&
            std::memcmp(it->second.entry.data(), rho.data(), bytes.size()) == 0)
            return it->second;
    LeafScan fresh = scan_leaf(net_, foliation_.leaves[leaf], entry, options_, policy_);
    Scan s{leaf, rho, std::move(fresh.detections), fresh.axiom2};
    max_axiom2_ = std::max(max_axiom2_, s.axiom2);
    if (cache_.size() >= max_cached) {
        scratch_ = std::move(s);
        return scratch_;
    }
    return cache_.emplace(h, std::move(s))->second;
}

SampledHistory HistorySampler::sample(std::mt19937_64& rng) {
    SampledHistory out{{}, initial_, 1.0, {}};
    State state = initial_;
    for (std::size_t leaf = 0; leaf < foliation_.leaves.size(); ++leaf) {
        const Scan& sc = scan(leaf, state);
        for (const auto& d : sc.detections) {
            if (!d.happened) continue;
            const auto weights = current_weights(net_, d, state);
            std::vector<std::size_t> live;
            double total = 0.0;
            for (std::size_t i = 0; i < weights.size(); ++i)
                if (weights[i] >= policy_.prob_floor) {
                    live.push_back(i);
                    total += weights[i];
                }
            if (live.empty()) throw NumericFailure("sample_history: no outcome above prob_floor at " + to_string(d.point));
            std::size_t chosen = live.front();
            if (live.size() > 1) {
                const double u = uniform01(rng) * total;
                double acc = 0.0;
                for (std::size_t i : live) {
                    chosen = i;
                    acc += weights[i];
                    if (u < acc) break;
                }
            }
            ActualEvent actual = actual_from(net_, d, chosen, weights[chosen]);
            state = collapse(state, actual, policy_);
            out.probability *= weights[chosen];
            out.key += (out.key.empty() ? "" : " ") + event_key(actual);
            out.events.push_back(std::move(actual));
        }
        auto u = options_.propagators.find(static_cast<int>(leaf));
        if (u != options_.propagators.end() && leaf + 1 < foliation_.leaves.size())
            state = apply_propagator(net_, u->second, state, policy_);
    }
    out.final_state = state;
    return out;
}

SampledHistory HistorySampler::sample(unsigned long long seed) {
    std::mt19937_64 rng(seed);
    return sample(rng);
}

SampledHistory sample_history(const AlgebraNet& net, const Foliation& foliation, const State& initial,
                              std::mt19937_64& rng, const BranchOptions& options, const NumericPolicy& policy) {
    return HistorySampler(net, foliation, initial, options, policy).sample(rng);
}

SampledHistory sample_history(const AlgebraNet& net, const Foliation& foliation, const State& initial,
                              unsigned long long seed, const BranchOptions& options, const NumericPolicy& policy) {
    std::mt19937_64 rng(seed);
    return sample_history(net, foliation, initial, rng, options, policy);
}

}  // namespace ethsim
