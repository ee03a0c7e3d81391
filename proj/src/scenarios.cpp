#include "ethsim/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace ethsim {

namespace {

PotentialEvent spin_event(const Eigen::Vector3d& n) {
    return PotentialEvent({spin_projection(n, 1), spin_projection(n, -1)}, {"+", "-"});
}

std::string leaf_name(const std::string& key) { return "leaf[" + key + "]"; }

}  // namespace

State singlet_state() {
    Vector psi = Vector::Zero(4);
    psi(1) = 1.0 / std::sqrt(2.0);
    psi(2) = -1.0 / std::sqrt(2.0);
    return State::pure(psi);
}

EprModel epr_model(const Eigen::Vector3d& n, const Eigen::Vector3d& n_prime, bool colocated) {
    if (std::abs(n.norm() - 1.0) > 1e-12 || std::abs(n_prime.norm() - 1.0) > 1e-12)
        throw InvalidInput("epr: measurement directions must be unit vectors");
    const Operator one = identity(2);
    EprModel m{n, n_prime, {}, {}, colocated};
    for (int i = 0; i < 2; ++i) {
        const int sign = i == 0 ? 1 : -1;
        m.pi_p[i] = kron(spin_projection(n, sign), one);
        m.pi_p_prime[i] =
            colocated ? kron(spin_projection(n_prime, sign), one) : kron(one, spin_projection(n_prime, sign));
    }
    return m;
}

Scenario epr_scenario(const Eigen::Vector3d& n, const Eigen::Vector3d& n_prime, const std::optional<State>& initial) {
    EprModel model = epr_model(n, n_prime);
    const State omega = initial.value_or(singlet_state());
    if (omega.dim() != 4) throw InvalidInput("epr: initial state must be 4x4");
    const CausalLattice lattice{1, 2, 1};
    Scenario s{"epr", build_tensor_net(lattice, 2), omega, foliate(lattice), {}, {}, 0.05, {}, model};
    s.options.prescribed.emplace(Point{0, 0}, spin_event(n));
    s.options.prescribed.emplace(Point{0, 1}, spin_event(n_prime));

    s.expected.push_back({"commutator_norm", 0.0, 0.0, "definition"});
    s.expected.push_back({"order_independence", 0.0, 1e-12, "definition"});
    s.expected.push_back({"probability_sum", 1.0, 1e-9, "definition"});
    s.expected.push_back({"chain_rule_defect", 0.0, 1e-9, "definition"});
    if (!initial) {
        // Singlet: P(a, b) = (1 - a b n.n') / 4.
        const double c = n.dot(n_prime);
        const char* sign[] = {"+", "-"};
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                const double sa = a == 0 ? 1 : -1, sb = b == 0 ? 1 : -1;
                s.expected.push_back({leaf_name(std::string("(0,0):") + sign[a] + " (0,1):" + sign[b]),
                                      (1.0 - sa * sb * c) / 4.0, 1e-9, "oracle"});
            }
        s.expected.push_back({"nonlocality.unconditioned", 0.5, 1e-12, "oracle"});
        s.expected.push_back({"nonlocality.conditioned", (1.0 - c) / 2.0, 1e-12, "oracle"});
    }
    return s;
}

double epr_commutator_norm(const EprModel& model) {
    double worst = 0.0;
    for (const auto& a : model.pi_p)
        for (const auto& b : model.pi_p_prime) worst = std::max(worst, op_norm(commutator(a, b)));
    return worst;
}

double order_independence_check(const EprModel& model, const State& omega, const NumericPolicy& policy) {
    if (omega.dim() != 4) throw InvalidInput("order_independence_check: state must be 4x4");
    double worst = 0.0;
    for (const auto& p : model.pi_p)
        for (const auto& q : model.pi_p_prime) {
            const Operator first = q * p * omega.rho() * p * q;
            const Operator second = p * q * omega.rho() * q * p;
            const double n1 = first.trace().real();
            const double n2 = second.trace().real();
            if (n1 < policy.prob_floor || n2 < policy.prob_floor) continue;
            worst = std::max(worst, (first / n1 - second / n2).cwiseAbs().maxCoeff());
        }
    return worst;
}

double order_independence_check(const Scenario& scenario, const NumericPolicy& policy) {
    if (!scenario.epr) throw InvalidInput("order_independence_check: not an EPR scenario");
    return order_independence_check(*scenario.epr, scenario.initial, policy);
}

NonlocalityReport nonlocality_demo(const EprModel& model, const State& omega, int sigma, int sigma_prime,
                                   const NumericPolicy& policy) {
    if (std::abs(sigma) != 1 || std::abs(sigma_prime) != 1) throw InvalidInput("nonlocality_demo: signs must be +-1");
    const Operator& p = model.pi_p[sigma == 1 ? 0 : 1];
    const Operator& a = model.pi_p_prime[sigma_prime == 1 ? 0 : 1];
    NonlocalityReport r;
    r.unconditioned = omega.weight(a);
    const Operator projected = p * omega.rho() * p;
    const double norm = projected.trace().real();
    if (norm < policy.prob_floor) throw NumericFailure("nonlocality_demo: conditioning outcome has probability zero");
    r.conditioned = (projected * a).trace().real() / norm;
    return r;
}

NonlocalityReport nonlocality_demo(const Scenario& scenario, int sigma, int sigma_prime, const NumericPolicy& policy) {
    if (!scenario.epr) throw InvalidInput("nonlocality_demo: not an EPR scenario");
    return nonlocality_demo(*scenario.epr, scenario.initial, sigma, sigma_prime, policy);
}

Scenario massive_control(int extent, const std::optional<State>& initial, const NumericPolicy& policy) {
    if (extent < 1) throw InvalidInput("massive_control: extent must be positive");
    const CausalLattice lattice{extent, 1, 1};
    const State omega = initial.value_or(State::diagonal({0.75, 0.25}));
    if (omega.dim() != 2) throw InvalidInput("massive_control: initial state must be 2x2");
    Scenario s{"massive-control", build_constant_net(lattice, 2, 1, policy), omega, foliate(lattice), {}, {}, 0.05, {},
               std::nullopt};
    s.expected.push_back({"probability_sum", 1.0, 1e-9, "definition"});
    s.expected.push_back({"chain_rule_defect", 0.0, 1e-9, "definition"});
    if (!initial) {
        s.expected.push_back({"branching_leaves", 1.0, 0.0, "closed-form"});
        s.expected.push_back({"leaf_count", 2.0, 0.0, "closed-form"});
        s.expected.push_back({"depth", static_cast<double>(extent), 0.0, "closed-form"});
        s.expected.push_back({leaf_name("(0,0):0"), 0.75, 1e-9, "closed-form"});
        s.expected.push_back({leaf_name("(0,0):1"), 0.25, 1e-9, "closed-form"});
    }
    return s;
}

Scenario two_leaf_scenario() {
    const double c = std::sqrt(0.6), s = std::sqrt(0.4);
    Vector psi1 = Vector::Zero(4), psi2 = Vector::Zero(4);
    psi1(0) = c;
    psi1(3) = s;
    psi2(0) = s;
    psi2(3) = -c;
    const Operator rho = 0.75 * psi1 * psi1.adjoint() + 0.25 * psi2 * psi2.adjoint();
    const CausalLattice lattice{2, 1, 1};
    Scenario sc{"two-leaf", build_tensor_net(lattice, 2), State(rho), foliate(lattice), {}, {}, 0.05, {},
                std::nullopt};
    sc.expected.push_back({"probability_sum", 1.0, 1e-9, "definition"});
    sc.expected.push_back({"chain_rule_defect", 0.0, 1e-9, "definition"});
    sc.expected.push_back({"leaf_count", 4.0, 0.0, "closed-form"});
    sc.expected.push_back({leaf_name("(0,0):0 (1,0):0"), 0.45, 1e-9, "closed-form"});
    sc.expected.push_back({leaf_name("(0,0):0 (1,0):1"), 0.30, 1e-9, "closed-form"});
    sc.expected.push_back({leaf_name("(0,0):1 (1,0):0"), 0.10, 1e-9, "closed-form"});
    sc.expected.push_back({leaf_name("(0,0):1 (1,0):1"), 0.15, 1e-9, "closed-form"});
    return sc;
}

Operator rotated_z(double angle) { return std::cos(2 * angle) * pauli_z() + std::sin(2 * angle) * pauli_x(); }

Scenario qubit_scenario(const std::optional<State>& initial) {
    const CausalLattice lattice{1, 1, 1};
    const State omega = initial.value_or(State::diagonal({0.75, 0.25}));
    if (omega.dim() != 2) throw InvalidInput("qubit: initial state must be 2x2");
    Scenario s{"qubit", build_tensor_net(lattice, 2), omega, foliate(lattice), {}, {}, 0.05, {}, std::nullopt};
    const Point p{0, 0};
    s.quantities.push_back({"event-aligned", {{p, pauli_z()}}});
    s.quantities.push_back({"pauli-x", {{p, pauli_x()}}});
    s.quantities.push_back({"perturbed-z", {{p, rotated_z(0.01)}}});
    s.expected.push_back({"probability_sum", 1.0, 1e-9, "definition"});
    s.expected.push_back({"chain_rule_defect", 0.0, 1e-9, "definition"});
    if (!initial) {
        s.expected.push_back({leaf_name("(0,0):0"), 0.75, 1e-9, "closed-form"});
        s.expected.push_back({leaf_name("(0,0):1"), 0.25, 1e-9, "closed-form"});
        s.expected.push_back({"recording[event-aligned].max_norm", 0.0, 1e-10, "closed-form"});
        s.expected.push_back({"recording[pauli-x].max_norm", 0.5, 1e-10, "closed-form"});
        s.expected.push_back({"recording[perturbed-z].max_norm", std::sin(0.02) / 2.0, 1e-10, "closed-form"});
    }
    return s;
}

std::vector<std::string> scenario_names() { return {"epr", "massive-control", "two-leaf", "qubit"}; }

Scenario make_scenario(const std::string& name) {
    if (name == "epr") return epr_scenario();
    if (name == "massive-control") return massive_control(2);
    if (name == "two-leaf") return two_leaf_scenario();
    if (name == "qubit") return qubit_scenario();
    throw InvalidInput("unknown scenario: " + name);
}

std::vector<ExpectedCheck> check_expected(const Scenario& scenario, const NumericPolicy& policy) {
    std::optional<HistoryTree> tree;
    auto get_tree = [&]() -> const HistoryTree& {
        if (!tree) tree = enumerate_tree(scenario.net, scenario.foliation, scenario.initial, scenario.options, policy);
        return *tree;
    };
    auto measure = [&](const std::string& name) -> double {
        if (name == "commutator_norm") return epr_commutator_norm(scenario.epr.value());
        if (name == "order_independence") return order_independence_check(scenario, policy);
        if (name == "nonlocality.unconditioned") return nonlocality_demo(scenario, 1, 1, policy).unconditioned;
        if (name == "nonlocality.conditioned") return nonlocality_demo(scenario, 1, 1, policy).conditioned;
        if (name == "chain_rule_defect") return chain_rule_defect(get_tree(), scenario.net, policy);
        if (name == "leaf_count") return static_cast<double>(get_tree().leaf_count);
        if (name == "probability_sum" || name == "depth" || name.rfind("leaf[", 0) == 0) {
            const auto paths = leaf_paths(get_tree());
            if (name == "depth") {
                std::size_t depth = 0;
                for (const auto& path : paths) depth = std::max(depth, path.nodes.size());
                return static_cast<double>(depth);
            }
            double total = 0.0;
            for (const auto& path : paths) {
                if (name != "probability_sum" && leaf_name(path.key) == name) return path.probability;
                total += path.probability;
            }
            if (name == "probability_sum") return total;
            return 0.0;
        }
        if (name == "branching_leaves") {
            std::set<int> branching;
            auto walk = [&](auto&& self, const BranchNode& node) -> void {
                if (node.children.size() > 1) branching.insert(node.children.front().leaf_index);
                for (const auto& c : node.children) self(self, c);
            };
            walk(walk, get_tree().root);
            return static_cast<double>(branching.size());
        }
        if (name.rfind("recording[", 0) == 0) {
            const std::string q = name.substr(10, name.find(']') - 10);
            for (const auto& quantity : scenario.quantities)
                if (quantity.name == q) {
                    const Point p = quantity.representative.begin()->first;
                    const auto r = recording_check(scenario.net, p, scenario.initial, quantity, scenario.epsilon, policy);
                    return *std::max_element(r.basic_assumption_norms.begin(), r.basic_assumption_norms.end());
                }
        }
        throw InvalidInput("check_expected: unknown expected value " + name);
    };
    std::vector<ExpectedCheck> out;
    for (const auto& e : scenario.expected) {
        const double actual = measure(e.name);
        out.push_back({e, actual, std::abs(actual - e.value) <= e.tolerance});
    }
    return out;
}

}  // namespace ethsim
