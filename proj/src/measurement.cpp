#include "ethsim/measurement.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace ethsim {

Operator local_representative(const AlgebraNet& net, const Point& p, const Operator& global,
                              const NumericPolicy& policy) {
    if (global.rows() != net.ambient_dim() || global.cols() != net.ambient_dim())
        throw InvalidInput("local_representative: operator does not act on the net Hilbert space");
    if (!is_hermitian(global, policy.tol_proj)) throw InvalidInput("local_representative: operator is not self-adjoint");
    double residual = 0.0;
    Operator local = net.layout().extract(global, net.support(p), &residual);
    if (residual >= policy.tol_closure * std::max(1.0, global.norm()))
        throw InvalidInput("local_representative: operator is not in E_" + to_string(p));
    return local;
}

void validate_quantity(const AlgebraNet& net, const PhysicalQuantity& q, const NumericPolicy& policy) {
    for (const auto& [p, x] : q.representative) {
        if (!net.lattice().contains(p)) throw InvalidInput("quantity " + q.name + ": point outside the lattice");
        if (x.rows() != net.local_dim(p) || x.cols() != net.local_dim(p))
            throw InvalidInput("quantity " + q.name + ": representative at " + to_string(p) +
                               " does not act on H_{S_P}");
        if (!is_hermitian(x, policy.tol_proj))
            throw InvalidInput("quantity " + q.name + ": representative at " + to_string(p) + " is not self-adjoint");
    }
}

double SpectralDecomposition::reconstruction_defect(const Operator& x) const {
    Operator sum = Operator::Zero(x.rows(), x.cols());
    for (std::size_t k = 0; k < eigenvalues.size(); ++k) sum += eigenvalues[k] * projections.projection(k);
    return op_norm(x - sum);
}

SpectralDecomposition spectral_decompose(const Operator& x, const State& omega, double epsilon,
                                         const NumericPolicy& policy) {
    if (x.rows() != x.cols() || x.rows() != omega.dim())
        throw InvalidInput("spectral_decompose: operator and state dimensions differ");
    if (!is_hermitian(x, policy.tol_proj)) throw InvalidInput("spectral_decompose: operator is not self-adjoint");
    if (!(epsilon > 0.0)) throw InvalidInput("spectral_decompose: epsilon must be positive");

    const Operator sym = 0.5 * (x + x.adjoint());
    Eigen::SelfAdjointEigenSolver<Operator> es(sym);
    const Eigen::VectorXd& vals = es.eigenvalues();
    struct Group {
        double value;
        Operator projection;
        double weight;
    };
    std::vector<Group> groups;
    Index start = 0;
    for (Index i = 1; i <= vals.size(); ++i) {
        if (i < vals.size() && vals(i) - vals(i - 1) < policy.gap_min) continue;
        const auto v = es.eigenvectors().middleCols(start, i - start);
        Operator pi = v * v.adjoint();
        groups.push_back({vals.segment(start, i - start).mean(), pi, omega.weight(pi)});
        start = i;
    }
    std::stable_sort(groups.begin(), groups.end(), [](const Group& a, const Group& b) { return a.weight > b.weight; });

    SpectralDecomposition out{{}, PotentialEvent::unchecked({}, {}, PotentialEvent::Coverage::complete), {}, 0};
    std::vector<Operator> projections;
    for (const auto& g : groups) {
        out.eigenvalues.push_back(g.value);
        out.weights.push_back(g.weight);
        projections.push_back(g.projection);
    }
    out.projections = PotentialEvent::unchecked(std::move(projections), index_labels(groups.size()),
                                                PotentialEvent::Coverage::complete);
    double covered = 0.0;
    out.L = groups.size();
    for (std::size_t k = 0; k < groups.size(); ++k) {
        covered += groups[k].weight;
        if (1.0 - covered < epsilon) {
            out.L = k + 1;
            break;
        }
    }
    return out;
}

PotentialEvent event_basis(const EventDetection& detection, double epsilon) {
    if (!(epsilon > 0.0)) throw InvalidInput("event_basis: epsilon must be positive");
    const PotentialEvent& family = detection.local_projections;
    std::vector<Operator> kept;
    std::vector<std::string> labels;
    // Summed from the discarded side: 1 - (kept sum) loses the small tail to rounding.
    double residual = 0.0, total = 0.0;
    for (std::size_t i = 0; i < family.size(); ++i) {
        total += detection.probabilities[i];
        if (detection.probabilities[i] < epsilon) {
            residual += detection.probabilities[i];
            continue;
        }
        kept.push_back(family.projection(i));
        labels.push_back(family.label(i));
    }
    if (family.coverage() == PotentialEvent::Coverage::partial) residual += std::max(0.0, 1.0 - total);
    if (residual >= epsilon)
        throw NumericFailure("event_basis: discarded weight " + std::to_string(residual) + " at " +
                             to_string(detection.point) + " is not below epsilon; lower epsilon");
    const auto coverage = kept.size() == family.size() ? family.coverage() : PotentialEvent::Coverage::partial;
    return PotentialEvent::unchecked(std::move(kept), std::move(labels), coverage);
}

bool RecordingReport::basic_assumption() const {
    return std::all_of(basic_assumption_norms.begin(), basic_assumption_norms.end(),
                       [&](double n) { return n < epsilon; });
}

RecordingReport recording_check(const AlgebraNet& net, const Point& p, const State& omega,
                                const PhysicalQuantity& quantity, double epsilon, const NumericPolicy& policy) {
    return recording_check(net, detect_event(net, p, omega, policy), omega, quantity, epsilon, policy);
}

RecordingReport recording_check(const AlgebraNet& net, const EventDetection& detection, const State& omega,
                                const PhysicalQuantity& quantity, double epsilon, const NumericPolicy& policy) {
    const Point& p = detection.point;
    auto it = quantity.representative.find(p);
    if (it == quantity.representative.end())
        throw InvalidInput("recording_check: quantity " + quantity.name + " has no representative at " + to_string(p));
    if (!detection.happened) throw InvalidInput("recording_check: no event happened at " + to_string(p));
    const Operator& x = it->second;
    if (x.rows() != net.local_dim(p)) throw InvalidInput("recording_check: representative does not act on H_{S_P}");

    const State reduced = local_state(net, p, omega);
    const PotentialEvent events = event_basis(detection, epsilon);
    const SpectralDecomposition spec = spectral_decompose(x, reduced, epsilon, policy);

    RecordingReport r;
    r.point = p;
    r.quantity = quantity.name;
    r.epsilon = epsilon;
    r.L = spec.L;
    r.spectral_weights = spec.weights;
    r.event_count = events.size();

    std::vector<Operator> generators = events.projections();
    for (std::size_t k = 0; k < spec.L; ++k) generators.push_back(spec.projections.projection(k));
    const OperatorAlgebra joint = algebra_closure(generators, reduced.dim(), policy);
    const GnsSpace gns(joint, reduced, policy);

    Operator dephased = Operator::Zero(reduced.dim(), reduced.dim());
    for (std::size_t k = 0; k < spec.L; ++k) {
        const Operator& pk = spec.projections.projection(k);
        const Operator closed = conditional_expectation(joint, reduced, events, pk, policy);
        const Operator geometric = conditional_expectation_gns(gns, events, pk, reduced, policy);
        r.basic_assumption_norms.push_back(op_norm(pk - closed));
        r.expectation_gap = std::max(r.expectation_gap, op_norm(closed - geometric));
        dephased += pk * reduced.rho() * pk;

        MatchedPair best{k, 0, std::numeric_limits<double>::infinity()};
        int within = 0;
        for (std::size_t j = 0; j < events.size(); ++j) {
            const double d = op_norm(pk - events.projection(j));
            if (d < policy.match_threshold) ++within;
            if (d < best.distance) best = {k, j, d};
        }
        if (within > 1) r.matches_unique = false;
        if (best.distance < policy.match_threshold) r.matched_pairs.push_back(best);
    }
    for (std::size_t a = 0; a < r.matched_pairs.size(); ++a)
        for (std::size_t b = a + 1; b < r.matched_pairs.size(); ++b)
            if (r.matched_pairs[a].event_index == r.matched_pairs[b].event_index) r.matches_unique = false;

    // On matrix units E_ij (norm 1): omega(E_ij) - sum omega(Pi E_ij Pi) = (rho - sum Pi rho Pi)_ji.
    r.mixture_residual = (reduced.rho() - dephased).cwiseAbs().maxCoeff();
    r.mixture_constant = r.mixture_residual / (static_cast<double>(std::max<std::size_t>(r.L, 1)) * epsilon);
    return r;
}

}  // namespace ethsim
