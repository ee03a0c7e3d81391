#include "doctest.h"

#include "ethsim/events.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace ethsim;
using namespace ethsim::testing;

namespace {

Operator diag(std::initializer_list<double> d) {
    Operator m = Operator::Zero(static_cast<Index>(d.size()), static_cast<Index>(d.size()));
    Index i = 0;
    for (double v : d) {
        m(i, i) = v;
        ++i;
    }
    return m;
}

PotentialEvent spin_event(const Eigen::Vector3d& n) {
    return PotentialEvent({spin_projection(n, 1), spin_projection(n, -1)}, {"+", "-"});
}

State singlet() {
    Vector psi = Vector::Zero(4);
    psi(1) = 1.0 / std::sqrt(2.0);
    psi(2) = -1.0 / std::sqrt(2.0);
    return State::pure(psi);
}

}  // namespace

TEST_CASE("detect_event examples") {
    const auto net = build_tensor_net({1, 1, 1}, 2);
    SUBCASE("trace state: trivial center, nothing happens") {
        const auto d = detect_event(net, {0, 0}, State::trace_state(2));
        CHECK(d.event_algebra.dim() == 1);
        CHECK(d.projections.size() == 1);
        CHECK_FALSE(d.happened);
    }
    SUBCASE("diag(0.75, 0.25)") {
        const auto d = detect_event(net, {0, 0}, State::diagonal({0.75, 0.25}));
        REQUIRE(d.projections.size() == 2);
        CHECK(projection_set_distance(d.projections.projections(), {diag({1, 0}), diag({0, 1})}) < 1e-10);
        std::vector<double> probs = d.probabilities;
        std::sort(probs.begin(), probs.end());
        CHECK(probs[0] == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(probs[1] == doctest::Approx(0.75).epsilon(1e-12));
        CHECK(d.happened);
    }
    SUBCASE("pure |0><0|") {
        const auto d = detect_event(net, {0, 0}, State::diagonal({1.0, 0.0}));
        REQUIRE(d.projections.size() == 2);
        CHECK(d.positive_count(default_policy().prob_floor) == 1);
        CHECK_FALSE(d.happened);
    }
    SUBCASE("state on the wrong space") {
        CHECK_THROWS_AS(detect_event(net, {0, 0}, State::trace_state(3)), InvalidInput);
    }
}

TEST_CASE("collapse examples") {
    const auto net = build_tensor_net({1, 1, 1}, 2);
    const State omega = State::diagonal({0.75, 0.25});
    const auto trivial = prescribed_event(net, {0, 0}, omega, PotentialEvent({identity(2)}, {"1"}));
    CHECK((collapse(omega, actual_from(net, trivial, 0, 1.0)).rho() - omega.rho()).norm() < 1e-15);

    const auto d = prescribed_event(net, {0, 0}, omega, PotentialEvent({diag({1, 0}), diag({0, 1})}, {"0", "1"}));
    CHECK((collapse(omega, actual_from(net, d, 0, 0.75)).rho() - diag({1, 0})).norm() < 1e-15);

    const State pure = State::diagonal({1.0, 0.0});
    const auto null = prescribed_event(net, {0, 0}, pure, PotentialEvent({diag({1, 0}), diag({0, 1})}, {"0", "1"}));
    CHECK_THROWS_AS(collapse(pure, actual_from(net, null, 1, 0.0)), NumericFailure);
    CHECK_THROWS_AS(actual_from(net, null, 2, 0.0), InvalidInput);
}

TEST_CASE("collapse of the singlet fixes the partner spin") {
    const CausalLattice l{1, 2, 1};
    const auto net = build_tensor_net(l, 2);
    const State s = singlet();
    const auto at_p = prescribed_event(net, {0, 0}, s, spin_event(Eigen::Vector3d::UnitZ()));
    CHECK(at_p.probabilities[0] == doctest::Approx(0.5));
    const State after = collapse(s, actual_from(net, at_p, 0, at_p.probabilities[0]));
    const auto at_q = prescribed_event(net, {0, 1}, after, spin_event(Eigen::Vector3d::UnitZ()));
    CHECK(at_q.probabilities[1] == doctest::Approx(1.0).epsilon(1e-14));
    // oracle: (pi_+ ⊗ 1) rho (pi_+ ⊗ 1) normalized is |01><01|
    CHECK((after.rho() - matrix_unit(4, 1, 1)).norm() < 1e-14);
}

TEST_CASE("sample_actual examples") {
    const auto net = build_tensor_net({1, 1, 1}, 2);
    const auto d = detect_event(net, {0, 0}, State::diagonal({0.75, 0.25}));
    const std::size_t big = d.probabilities[0] > 0.5 ? 0 : 1;

    std::mt19937_64 rng(2024);
    const int n = 100000;
    int hits = 0;
    for (int i = 0; i < n; ++i) hits += sample_actual(net, d, rng).index == big;
    const double sigma = std::sqrt(0.75 * 0.25 / n);
    CHECK(std::abs(hits / static_cast<double>(n) - 0.75) < 4 * sigma);

    std::vector<std::size_t> a, b;
    for (unsigned long long seed = 0; seed < 50; ++seed) {
        a.push_back(sample_actual(net, d, seed).index);
        b.push_back(sample_actual(net, d, seed).index);
    }
    CHECK(a == b);

    const auto sure = detect_event(net, {0, 0}, State::diagonal({1.0, 0.0}));
    CHECK_THROWS_AS(sample_actual(net, sure, 1ULL), InvalidInput);

    // a single positive label is always drawn
    const auto pruned = prescribed_event(net, {0, 0}, State::diagonal({1.0 - 1e-12, 1e-12}),
                                         PotentialEvent({diag({1, 0}), diag({0, 1})}, {"0", "1"}));
    CHECK_FALSE(pruned.happened);
}

TEST_CASE("uniform01 is in [0, 1) and reproducible") {
    std::mt19937_64 a(7), b(7);
    for (int i = 0; i < 1000; ++i) {
        const double u = uniform01(a);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(u == uniform01(b));
    }
}

TEST_CASE("mixture_check examples") {
    const auto net = build_tensor_net({1, 1, 1}, 2);
    const State omega = State::diagonal({0.75, 0.25});
    CHECK(mixture_check(net, {0, 0}, omega, detect_event(net, {0, 0}, omega)) < 1e-10);
    const auto sideways = prescribed_event(net, {0, 0}, omega, spin_event(Eigen::Vector3d::UnitX()));
    CHECK(mixture_check(net, {0, 0}, omega, sideways) > 0.1);
    const auto trivial = prescribed_event(net, {0, 0}, omega, PotentialEvent({identity(2)}, {"1"}));
    CHECK(mixture_check(net, {0, 0}, omega, trivial) == 0.0);
}

TEST_CASE("verify_axiom2 examples") {
    SUBCASE("disjoint cells") {
        const auto net = build_tensor_net({1, 2, 1}, 2);
        const State s = singlet();
        const auto p = prescribed_event(net, {0, 0}, s, spin_event(Eigen::Vector3d::UnitZ()));
        const auto q = prescribed_event(net, {0, 1}, s, spin_event(Eigen::Vector3d::UnitX()));
        CHECK(verify_axiom2(net, p, q) == 0.0);
    }
    SUBCASE("same detection") {
        const auto net = build_tensor_net({1, 1, 1}, 2);
        const auto d = detect_event(net, {0, 0}, State::diagonal({0.6, 0.4}));
        CHECK_THROWS_AS(verify_axiom2(net, d, d), InvalidInput);  // equal points are not spacelike
        double worst = 0.0;
        for (const auto& a : d.projections.projections())
            for (const auto& b : d.projections.projections()) worst = std::max(worst, op_norm(commutator(a, b)));
        CHECK(worst < 1e-12);
    }
    SUBCASE("overlapping cones with events on the shared cell") {
        // 2x2 lattice: S_(0,0) = {0, 2, 3}, S_(0,1) = {1, 2, 3}; cell 2 is shared.
        const auto net = build_tensor_net({2, 2, 1}, 2);
        const CellLayout local(3, 2);
        const State omega = State::trace_state(16);
        auto on_shared = [&](const Eigen::Vector3d& n) {
            return PotentialEvent({local.embed(spin_projection(n, 1), {1}), local.embed(spin_projection(n, -1), {1})},
                                  {"+", "-"});
        };
        const auto p = prescribed_event(net, {0, 0}, omega, on_shared(Eigen::Vector3d::UnitZ()));
        const auto q = prescribed_event(net, {0, 1}, omega, on_shared(Eigen::Vector3d::UnitX()));
        const double norm = verify_axiom2(net, p, q);
        CHECK(norm > 0.1);
        // oracle: ||[P_z+, P_x+]|| on one qubit is 1/2
        CHECK(norm == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("timelike pair") {
        const auto net = build_tensor_net({2, 1, 1}, 2);
        const State omega = State::trace_state(4);
        const auto p = detect_event(net, {0, 0}, omega);
        const auto q = detect_event(net, {1, 0}, omega);
        CHECK_THROWS_AS(verify_axiom2(net, p, q), InvalidInput);
    }
}

TEST_CASE("prescribed_event validation") {
    const auto net = build_tensor_net({1, 2, 1}, 2);
    CHECK_THROWS_AS(prescribed_event(net, {0, 0}, State::trace_state(4), PotentialEvent({identity(4)}, {"1"})),
                    InvalidInput);
}

// Properties on random faithful states over small tensor nets.

TEST_CASE("property: detections are probability vectors with Born weights and mixtures") {
    Rng rng(404);
    const std::vector<CausalLattice> lattices = {{1, 1, 1}, {2, 1, 1}, {1, 2, 1}, {2, 2, 1}};
    for (int trial = 0; trial < 16; ++trial) {
        const CausalLattice l = lattices[static_cast<std::size_t>(trial) % lattices.size()];
        const auto net = build_tensor_net(l, 2);
        const State omega(random_density(net.ambient_dim(), rng));
        for (const auto& p : l.points()) {
            const auto d = detect_event(net, p, omega);
            double sum = 0.0;
            for (std::size_t i = 0; i < d.projections.size(); ++i) {
                CHECK(d.probabilities[i] >= -1e-9);
                CHECK(std::abs(d.probabilities[i] - omega.weight(d.projections.projection(i))) < 1e-12);
                sum += d.probabilities[i];
            }
            CHECK(std::abs(sum - 1.0) < 1e-9);
            CHECK(d.projections.completeness_defect() < 1e-9);
            CHECK(mixture_check(net, p, omega, d) < 1e-10);

            // a faithful nondegenerate reduced state has a maximal abelian event algebra
            CHECK(d.event_algebra.dim() == net.local_dim(p));
            const auto expected = eigenprojections(local_state(net, p, omega).rho());
            CHECK(projection_set_distance(d.local_projections.projections(), expected) < 1e-8);

            for (std::size_t i = 0; i < d.projections.size(); ++i) {
                if (d.probabilities[i] < 1e-6) continue;
                const auto act = actual_from(net, d, i, d.probabilities[i]);
                const State once = collapse(omega, act);
                CHECK((collapse(once, act).rho() - once.rho()).norm() < 1e-12);
            }
        }
    }
}

TEST_CASE("property: dense and eigenprojection routes agree") {
    Rng rng(405);
    NumericPolicy factor = default_policy();
    factor.dense_event_basis_cap = 0;
    for (int trial = 0; trial < 8; ++trial) {
        const CausalLattice l = trial % 2 ? CausalLattice{2, 1, 1} : CausalLattice{1, 2, 1};
        const auto net = build_tensor_net(l, 2);
        const State omega(random_density(net.ambient_dim(), rng));
        for (const auto& p : l.points()) {
            const auto a = detect_event(net, p, omega);
            const auto b = detect_event(net, p, omega, factor);
            CHECK(a.dense);
            CHECK_FALSE(b.dense);
            CHECK(projection_set_distance(a.projections.projections(), b.projections.projections()) < 1e-8);
            CHECK(algebras_equal(a.event_algebra, b.event_algebra, 1e-8));
        }
    }
}

TEST_CASE("property: degenerate reduced states give coarser events") {
    // rho = diag(w) ⊗ 1/2 on two cells: the reduced state on the first cell is diag(w),
    // the second cell's reduced state is 1/2 (no event there).
    const auto net = build_tensor_net({1, 2, 1}, 2);
    const State omega(kron(diag({0.7, 0.3}), identity(2) / 2));
    const auto first = detect_event(net, {0, 0}, omega);
    const auto second = detect_event(net, {0, 1}, omega);
    CHECK(first.happened);
    CHECK(first.projections.size() == 2);
    CHECK_FALSE(second.happened);
    CHECK(second.event_algebra.dim() == 1);
}
