#include "ethsim/run.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>

namespace ethsim {

NumericPolicy policy_for(const RunConfig& config) {
    NumericPolicy p = default_policy();
    p.prob_floor = config.prob_floor;
    p.hilbert_cap = config.hilbert_cap;
    p.max_branches = config.max_branches;
    return p;
}

State build_state(const StateSpec& spec, Index dim, const NumericPolicy& policy) {
    try {
        if (spec.matrix) {
            if (spec.matrix->rows() != dim) throw ConfigError("initial_state.matrix", "must be " + std::to_string(dim) + "x" + std::to_string(dim));
            return State(*spec.matrix, policy);
        }
        if (!spec.spectrum.empty()) {
            if (static_cast<Index>(spec.spectrum.size()) != dim)
                throw ConfigError("initial_state.spectrum", "needs " + std::to_string(dim) + " weights");
            return State(State::diagonal(spec.spectrum).rho(), policy);
        }
        if (spec.builtin == "trace") return State::trace_state(dim);
        if (spec.builtin == "singlet") {
            if (dim != 4) throw ConfigError("initial_state.builtin", "singlet needs a 4-dimensional space");
            return singlet_state();
        }
        if (spec.builtin.rfind("basis:", 0) == 0) {
            const std::string digits = spec.builtin.substr(6);
            if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
                throw ConfigError("initial_state.builtin", "basis:<index> needs a number");
            const long long i = std::stoll(digits);
            if (i >= dim) throw ConfigError("initial_state.builtin", "basis index out of range");
            Vector psi = Vector::Zero(dim);
            psi(static_cast<Index>(i)) = 1.0;
            return State::pure(psi);
        }
        throw ConfigError("initial_state.builtin", "unknown state " + spec.builtin);
    } catch (const ConfigError&) {
        throw;
    } catch (const InvalidInput& e) {
        throw ConfigError("initial_state", e.what());
    }
}

Scenario scenario_for(const RunConfig& config, const NumericPolicy& policy) {
    std::optional<Scenario> s;
    if (config.scenario == "epr") {
        std::optional<State> initial;
        if (config.initial) initial = build_state(*config.initial, 4, policy);
        try {
            s = epr_scenario(config.epr_n.value_or(Eigen::Vector3d::UnitZ()),
                             config.epr_n_prime.value_or(Eigen::Vector3d::UnitX()), initial);
        } catch (const CapExceeded&) {
            throw;
        } catch (const InvalidInput& e) {
            throw ConfigError("epr", e.what());
        }
    } else if (config.scenario == "massive-control") {
        std::optional<State> initial;
        if (config.initial) initial = build_state(*config.initial, 2, policy);
        s = massive_control(config.massive_extent, initial, policy);
    } else if (config.scenario == "qubit") {
        std::optional<State> initial;
        if (config.initial) initial = build_state(*config.initial, 2, policy);
        s = qubit_scenario(initial);
    } else if (!config.scenario.empty()) {
        s = make_scenario(config.scenario);
        if (config.initial) {
            s->initial = build_state(*config.initial, s->net.ambient_dim(), policy);
            std::erase_if(s->expected, [](const ExpectedValue& e) { return e.source != "definition"; });
        }
    } else {
        const NetSpec& n = *config.net;
        const CausalLattice lattice{n.extent_tau, n.extent_x, n.speed};
        AlgebraNet net = n.kind == "constant" ? build_constant_net(lattice, n.cell_dim, n.n_cells, policy)
                                              : build_tensor_net(lattice, n.cell_dim, policy);
        State initial = build_state(*config.initial, net.ambient_dim(), policy);
        s = Scenario{"custom", std::move(net), std::move(initial), foliate(lattice), {}, {}, config.epsilon, {},
                     std::nullopt};
        s->expected.push_back({"probability_sum", 1.0, policy.tol_tree, "definition"});
        s->expected.push_back({"chain_rule_defect", 0.0, policy.tol_tree, "definition"});
    }
    if (config.foliation) {
        const std::string defect = foliation_defect(s->net.lattice(), *config.foliation);
        if (!defect.empty()) throw ConfigError("foliation", defect);
        s->foliation = *config.foliation;
    }
    s->epsilon = config.epsilon;
    s->options.axiom2 = config.axiom2;
    s->options.max_branches = config.max_branches;
    return std::move(*s);
}

PhysicalQuantity build_quantity(const QuantitySpec& spec, const Scenario& scenario) {
    const AlgebraNet& net = scenario.net;
    if (!net.lattice().contains(spec.point)) throw ConfigError("quantity.point", "outside the lattice");
    const CellSet& support = net.support(spec.point);
    if (spec.builtin.empty() && !spec.matrix) {
        for (const auto& q : scenario.quantities)
            if (q.name == spec.name) {
                if (!q.representative.count(spec.point))
                    throw ConfigError("quantity.point", "quantity " + q.name + " is not defined there");
                return {q.name, {{spec.point, q.representative.at(spec.point)}}};
            }
        throw ConfigError("quantity.name", "scenario " + scenario.name + " has no quantity " + spec.name);
    }
    Operator local;
    if (spec.matrix) {
        if (spec.matrix->rows() != net.local_dim(spec.point))
            throw ConfigError("quantity.matrix", "must act on H_{S_P} of dimension " + std::to_string(net.local_dim(spec.point)));
        if (!is_hermitian(*spec.matrix, default_policy().tol_proj)) throw ConfigError("quantity.matrix", "not self-adjoint");
        local = *spec.matrix;
    } else {
        if (net.cell_dim() != 2) throw ConfigError("quantity.builtin", "Pauli builtins need cell_dim 2");
        int cell = spec.cell;
        if (cell < 0) cell = net.n_cells() == net.lattice().size() ? net.lattice().index(spec.point) : support.front();
        if (!std::binary_search(support.begin(), support.end(), cell))
            throw ConfigError("quantity.cell", "cell " + std::to_string(cell) + " is not in S_P");
        const Operator pauli = spec.builtin == "pauli_x" ? pauli_x() : spec.builtin == "pauli_y" ? pauli_y() : pauli_z();
        local = net.layout().widen(pauli, CellSet{cell}, support);
    }
    return {spec.name.empty() ? spec.builtin.empty() ? std::string("matrix") : spec.builtin : spec.name,
            {{spec.point, local}}};
}

namespace {

using Clock = std::chrono::steady_clock;

ReportNode to_report(const BranchNode& n) {
    ReportNode r;
    r.leaf_index = n.leaf_index;
    if (n.leaf_index >= 0) r.point = n.point;
    if (n.actual) r.label = n.actual->label;
    r.cond_prob = n.cond_prob;
    r.path_prob = n.path_prob;
    r.happened = n.happened;
    r.event_algebra_dim = n.event_algebra_dim;
    r.axiom2_norm = n.axiom2_norm;
    for (const auto& c : n.children) r.children.push_back(to_report(c));
    return r;
}

TreeSection tree_section(const HistoryTree& tree, const Scenario& s, const NumericPolicy& policy) {
    TreeSection t;
    t.root = to_report(tree.root);
    for (const auto& path : leaf_paths(tree)) {
        t.leaves.push_back({path.key, path.probability});
        t.probability_sum += path.probability;
    }
    t.leaf_count = static_cast<long long>(tree.leaf_count);
    t.pruned_mass = tree.pruned_mass;
    if (s.options.propagators.empty()) t.chain_rule_defect = chain_rule_defect(tree, s.net, policy);
    for (const auto& e : tree.spectrum)
        t.spectrum.push_back({e.point, static_cast<long long>(e.event_algebra_dim), static_cast<long long>(e.projections)});
    return t;
}

RecordingSection recording_section(const RecordingReport& r, const SpectralDecomposition& spec) {
    RecordingSection s;
    s.point = r.point;
    s.quantity = r.quantity;
    s.epsilon = r.epsilon;
    s.L = static_cast<long long>(r.L);
    s.event_count = static_cast<long long>(r.event_count);
    s.eigenvalues = spec.eigenvalues;
    s.spectral_weights = r.spectral_weights;
    s.basic_assumption_norms = r.basic_assumption_norms;
    s.basic_assumption = r.basic_assumption();
    s.mixture_residual = r.mixture_residual;
    s.mixture_constant = r.mixture_constant;
    for (const auto& m : r.matched_pairs)
        s.matched_pairs.push_back({static_cast<long long>(m.spectral_index), static_cast<long long>(m.event_index), m.distance});
    s.matches_unique = r.matches_unique;
    s.expectation_gap = r.expectation_gap;
    return s;
}

}  // namespace

RunReport run(const RunConfig& config) {
    config.validate();
    const NumericPolicy policy = policy_for(config);
    std::map<std::string, double> timings;
    auto stage = [&](const std::string& name, auto&& body) {
        const auto t0 = Clock::now();
        body();
        timings[name] = std::chrono::duration<double>(Clock::now() - t0).count();
    };

    RunReport report;
    report.config = config_to_json(config);
    report.policy = policy_to_json(policy);
    report.mode = to_string(config.mode);

    std::optional<Scenario> scenario;
    stage("setup", [&] { scenario = scenario_for(config, policy); });
    Scenario& s = *scenario;
    report.scenario = s.name;
    report.axiom2.mode = config.axiom2 == Axiom2Mode::abort ? "abort" : "warn";

    switch (config.mode) {
        case RunMode::enumerate: {
            stage("enumerate", [&] {
                const HistoryTree tree = enumerate_tree(s.net, s.foliation, s.initial, s.options, policy);
                report.tree = tree_section(tree, s, policy);
                report.axiom2.max_norm = tree.max_axiom2;
            });
            stage("checks", [&] {
                for (const auto& c : check_expected(s, policy))
                    report.checks.push_back(
                        {c.expected.name, c.expected.value, c.actual, c.expected.tolerance, c.expected.source, c.passed});
            });
            break;
        }
        case RunMode::sample: {
            stage("sample", [&] {
                HistorySampler sampler(s.net, s.foliation, s.initial, s.options, policy);
                std::map<std::string, long long> counts;
                for (std::size_t i = 0; i < config.samples; ++i) ++counts[sampler.sample(derive_seed(*config.seed, i)).key];
                SampleSection sec{static_cast<long long>(config.samples), *config.seed, {}};
                const double n = static_cast<double>(config.samples);
                for (const auto& [key, count] : counts) {
                    const double f = static_cast<double>(count) / n;
                    sec.rows.push_back({key, count, f, std::sqrt(f * (1.0 - f) / n)});
                }
                report.sample = std::move(sec);
                report.axiom2.max_norm = sampler.max_axiom2();
            });
            break;
        }
        case RunMode::record: {
            stage("record", [&] {
                const PhysicalQuantity q = build_quantity(*config.quantity, s);
                const Point p = config.quantity->point;
                auto prescribed = s.options.prescribed.find(p);
                const EventDetection d = prescribed != s.options.prescribed.end()
                                             ? prescribed_event(s.net, p, s.initial, prescribed->second, policy)
                                             : detect_event(s.net, p, s.initial, policy);
                const RecordingReport r = recording_check(s.net, d, s.initial, q, s.epsilon, policy);
                const SpectralDecomposition spec =
                    spectral_decompose(q.representative.at(p), local_state(s.net, p, s.initial), s.epsilon, policy);
                report.recording = recording_section(r, spec);
            });
            break;
        }
    }
    report.axiom2.flagged = report.axiom2.max_norm > policy.tol_axiom2;

    if (config.pdp_table) {
        stage("pdp", [&] {
            const DerivedOrder order = derive_causal_order(s.net, policy);
            PdpSection sec;
            for (const auto& e : order.entries)
                sec.rows.push_back({e.p, e.q, e.derived, e.geometric, e.report.strict_inclusion,
                                    static_cast<long long>(e.report.rel_commutant_dim), e.report.rel_commutant_abelian,
                                    e.report.dense});
            sec.mismatches = order.mismatches;
            report.pdp = std::move(sec);
        });
    }
    if (config.timings) report.timings = timings;
    return report;
}

void emit_report(const RunReport& report, OutputFormat format, const std::string& path) {
    const std::string text = format == OutputFormat::csv ? report_csv(report) : serialize_report(report);
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path);
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const CapExceeded*>(&e)) return 3;
    if (dynamic_cast<const NumericFailure*>(&e)) return 2;
    if (dynamic_cast<const InvalidInput*>(&e)) return 1;
    return 2;
}

}  // namespace ethsim
