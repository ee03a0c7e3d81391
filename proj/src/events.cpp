#include "ethsim/events.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace ethsim {

int EventDetection::positive_count(double prob_floor) const {
    return static_cast<int>(std::count_if(probabilities.begin(), probabilities.end(),
                                          [&](double w) { return w >= prob_floor; }));
}

State local_state(const AlgebraNet& net, const Point& p, const State& omega) {
    if (omega.dim() != net.ambient_dim()) throw InvalidInput("state does not live on the net Hilbert space");
    return State::positive_by_construction(net.layout().reduce(omega.rho(), net.support(p)));
}

namespace {

// On a full factor B(H_S) the centralizer of rho is {rho}' and its center is the
// algebra generated by rho: the span of rho's eigenprojections.
OperatorAlgebra eigenprojection_algebra(const State& local, const NumericPolicy& policy) {
    Eigen::SelfAdjointEigenSolver<Operator> es(local.rho());
    const Eigen::VectorXd& vals = es.eigenvalues();
    std::vector<Operator> projections;
    Index start = 0;
    for (Index i = 1; i <= vals.size(); ++i) {
        if (i < vals.size() && vals(i) - vals(i - 1) < policy.tol_closure) continue;
        const auto v = es.eigenvectors().middleCols(start, i - start);
        projections.push_back(v * v.adjoint());
        start = i;
    }
    return span_of(projections, local.dim(), policy);
}

EventDetection assemble(const AlgebraNet& net, const Point& p, const State& omega, OperatorAlgebra algebra,
                        PotentialEvent local, bool dense, const NumericPolicy& policy) {
    const CellSet& s = net.support(p);
    const State reduced = local_state(net, p, omega);
    std::vector<Operator> lifted;
    std::vector<double> probabilities;
    for (const auto& pi : local.projections()) {
        lifted.push_back(net.layout().embed(pi, s));
        probabilities.push_back(reduced.weight(pi));
    }
    auto global = PotentialEvent::unchecked(std::move(lifted), local.labels(), local.coverage());
    EventDetection d{p, s, std::move(algebra), std::move(local), std::move(global), std::move(probabilities), false,
                     dense};
    d.happened = d.positive_count(policy.prob_floor) >= 2;
    return d;
}

}  // namespace

EventDetection detect_event(const AlgebraNet& net, const Point& p, const State& omega, const NumericPolicy& policy) {
    const State reduced = local_state(net, p, omega);
    const bool dense = static_cast<std::size_t>(net.algebra_dim(p)) <= policy.dense_event_basis_cap;
    OperatorAlgebra z = dense ? center_of_centralizer(net.local_algebra(p), reduced, policy)
                              : eigenprojection_algebra(reduced, policy);
    PotentialEvent family = minimal_projections(z, policy);
    return assemble(net, p, omega, std::move(z), std::move(family), dense, policy);
}

EventDetection prescribed_event(const AlgebraNet& net, const Point& p, const State& omega, PotentialEvent local,
                                const NumericPolicy& policy) {
    if (local.dim() != net.local_dim(p)) throw InvalidInput("prescribed_event: projections do not act on H_{S_P}");
    OperatorAlgebra algebra = span_of(local.projections(), local.dim(), policy);
    return assemble(net, p, omega, std::move(algebra), std::move(local), false, policy);
}

ActualEvent actual_from(const AlgebraNet& net, const EventDetection& detection, std::size_t index, double born_prob) {
    if (index >= detection.projections.size()) throw InvalidInput("actual_from: label index out of range");
    return ActualEvent{detection.point,
                       detection.projections.label(index),
                       index,
                       detection.projections.projection(index),
                       born_prob,
                       detection.support,
                       detection.local_projections.projection(index),
                       net.layout()};
}

State collapse(const State& omega, const ActualEvent& actual, const NumericPolicy& policy) {
    Operator projected;
    if (actual.layout && actual.layout->dim() == omega.dim() && actual.local_projection.size() > 0) {
        const auto& lay = *actual.layout;
        projected = lay.apply_right(lay.apply_left(actual.local_projection, actual.support, omega.rho()),
                                    actual.local_projection, actual.support);
    } else {
        if (actual.projection.rows() != omega.dim()) throw InvalidInput("collapse: projection dimension mismatch");
        projected = actual.projection * omega.rho() * actual.projection;
    }
    const double weight = projected.trace().real();
    if (weight < policy.prob_floor)
        throw NumericFailure("collapse: branch " + actual.label + " at " + to_string(actual.point) +
                             " has probability below prob_floor");
    return State::positive_by_construction(projected / weight, policy);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

ActualEvent sample_actual(const AlgebraNet& net, const EventDetection& detection, std::mt19937_64& rng,
                          const NumericPolicy& policy) {
    if (!detection.happened) throw InvalidInput("sample_actual: no event happened at " + to_string(detection.point));
    double total = 0.0;
    for (double w : detection.probabilities)
        if (w >= policy.prob_floor) total += w;
    const double u = uniform01(rng) * total;
    double acc = 0.0;
    std::size_t chosen = 0;
    for (std::size_t i = 0; i < detection.probabilities.size(); ++i) {
        const double w = detection.probabilities[i];
        if (w < policy.prob_floor) continue;
        chosen = i;
        acc += w;
        if (u < acc) break;
    }
    return actual_from(net, detection, chosen, detection.probabilities[chosen]);
}

ActualEvent sample_actual(const AlgebraNet& net, const EventDetection& detection, unsigned long long seed,
                          const NumericPolicy& policy) {
    std::mt19937_64 rng(seed);
    return sample_actual(net, detection, rng, policy);
}

double mixture_check(const AlgebraNet& net, const Point& p, const State& omega, const EventDetection& detection) {
    const State reduced = local_state(net, p, omega);
    const Operator& rho = reduced.rho();
    if (detection.local_projections.dim() != rho.rows())
        throw InvalidInput("mixture_check: detection does not belong to this point");
    Operator dephased = Operator::Zero(rho.rows(), rho.cols());
    for (const auto& pi : detection.local_projections.projections()) dephased += pi * rho * pi;
    // omega(X) - sum omega(pi X pi) = tr((rho - sum pi rho pi) X) = vec(D^T) . vec(X)
    const Operator diff = rho - dephased;
    const OperatorAlgebra alg = net.local_algebra(p);
    const Vector values = alg.basis_matrix().transpose() * vec(diff.transpose());
    return values.cwiseAbs().maxCoeff();
}

double verify_axiom2(const AlgebraNet& net, const EventDetection& at_p, const EventDetection& at_q) {
    if (causal_relate(net.lattice(), at_p.point, at_q.point) != Relation::spacelike)
        throw InvalidInput("verify_axiom2: " + to_string(at_p.point) + " and " + to_string(at_q.point) +
                           " are not spacelike");
    const CellSet frame = set_union(at_p.support, at_q.support);
    const CellLayout& lay = net.layout();
    double worst = 0.0;
    for (const auto& a : at_p.local_projections.projections()) {
        const Operator wa = lay.widen(a, at_p.support, frame);
        for (const auto& b : at_q.local_projections.projections()) {
            const Operator wb = lay.widen(b, at_q.support, frame);
            worst = std::max(worst, op_norm(commutator(wa, wb)));
        }
    }
    return worst;
}

}  // namespace ethsim
