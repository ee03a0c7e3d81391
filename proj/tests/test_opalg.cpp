#include "doctest.h"

#include "ethsim/gns.hpp"
#include "ethsim/tensor.hpp"
#include "test_support.hpp"

using namespace ethsim;
using namespace ethsim::testing;

namespace {

Operator diag(std::initializer_list<double> d) {
    Operator m = Operator::Zero(static_cast<Index>(d.size()), static_cast<Index>(d.size()));
    Index i = 0;
    for (double v : d) { m(i, i) = v; ++i; }
    return m;
}

OperatorAlgebra diagonal_algebra(Index n) {
    std::vector<Operator> units;
    for (Index i = 0; i < n; ++i) units.push_back(matrix_unit(n, i, i));
    return span_of(units, n);
}

// M2 ⊕ M3 on C^5.
OperatorAlgebra block_m2_m3() {
    std::vector<Operator> gens;
    for (Index i = 0; i < 2; ++i)
        for (Index j = 0; j < 2; ++j) gens.push_back(matrix_unit(5, i, j));
    for (Index i = 2; i < 5; ++i)
        for (Index j = 2; j < 5; ++j) gens.push_back(matrix_unit(5, i, j));
    return algebra_closure(gens, 5);
}

}  // namespace

TEST_CASE("operator helpers") {
    CHECK(is_projection(matrix_unit(3, 1, 1), 1e-12));
    CHECK_FALSE(is_projection(pauli_x(), 1e-12));
    CHECK(is_unitary(pauli_y(), 1e-12));
    CHECK(op_norm(pauli_z()) == doctest::Approx(1.0));
    CHECK(op_norm(commutator(pauli_x(), pauli_z())) == doctest::Approx(2.0));
    const Operator a = diag({1, 2});
    CHECK((kron(a, identity(2)) - diag({1, 1, 2, 2})).norm() == 0.0);
    const Operator up = spin_projection(Eigen::Vector3d::UnitX(), 1);
    CHECK((up - 0.5 * (identity(2) + pauli_x())).norm() < 1e-15);
    CHECK((unvec(vec(pauli_y()), 2) - pauli_y()).norm() == 0.0);
}

TEST_CASE("adjoint is an involution") {
    Rng rng(11);
    const Operator a = random_matrix(4, rng);
    CHECK((a.adjoint().adjoint() - a).norm() == 0.0);
}

TEST_CASE("algebra_closure examples") {
    SUBCASE("empty generators give the scalars") {
        const auto alg = algebra_closure({}, 3);
        CHECK(alg.dim() == 1);
        CHECK(alg.contains_identity(1e-12));
    }
    SUBCASE("Pauli X and Z generate M2") {
        const auto alg = algebra_closure({pauli_x(), pauli_z()}, 2);
        CHECK(alg.dim() == 4);
        CHECK(algebras_equal(alg, full_algebra(2), 1e-10));
    }
    SUBCASE("a nondegenerate diagonal generates the diagonal algebra") {
        const auto alg = algebra_closure({diag({1, 2, 3})}, 3);
        CHECK(alg.dim() == 3);
        CHECK(is_abelian(alg, 1e-10));
        CHECK(algebras_equal(alg, diagonal_algebra(3), 1e-10));
    }
    SUBCASE("dimension mismatch") { CHECK_THROWS_AS(algebra_closure({pauli_x()}, 3), InvalidInput); }
}

TEST_CASE("commutant examples") {
    CHECK(commutant(full_algebra(3)).dim() == 1);
    CHECK(commutant(scalar_algebra(3)).dim() == 9);
    CHECK(algebras_equal(commutant(diagonal_algebra(3)), diagonal_algebra(3), 1e-10));
}

TEST_CASE("center examples") {
    CHECK(center(full_algebra(4)).dim() == 1);
    CHECK(algebras_equal(center(diagonal_algebra(3)), diagonal_algebra(3), 1e-10));
    const auto z = center(block_m2_m3());
    CHECK(z.dim() == 2);
    const Operator p1 = diag({1, 1, 0, 0, 0});
    const Operator p2 = diag({0, 0, 1, 1, 1});
    CHECK(z.contains(p1, 1e-10));
    CHECK(z.contains(p2, 1e-10));
}

TEST_CASE("centralizer examples") {
    CHECK(centralizer(full_algebra(3), State::trace_state(3)).dim() == 9);
    const State omega = State::diagonal({0.9, 0.1});
    const auto c = centralizer(full_algebra(2), omega);
    CHECK(c.dim() == 2);
    CHECK(algebras_equal(c, diagonal_algebra(2), 1e-10));
    const auto ab = diagonal_algebra(3);
    CHECK(algebras_equal(centralizer(ab, State::diagonal({0.5, 0.3, 0.2})), ab, 1e-10));
}

TEST_CASE("center_of_centralizer examples") {
    CHECK(center_of_centralizer(full_algebra(3), State::trace_state(3)).dim() == 1);
    CHECK(algebras_equal(center_of_centralizer(full_algebra(2), State::diagonal({0.9, 0.1})), diagonal_algebra(2), 1e-10));

    Rng rng(4);
    const Operator rho = random_density(4, rng);
    const auto z = center_of_centralizer(full_algebra(4), State(rho));
    CHECK(z.dim() == 4);
    for (const auto& p : eigenprojections(rho)) CHECK(z.contains(p, 1e-9));
}

TEST_CASE("minimal_projections examples") {
    SUBCASE("scalars") {
        const auto e = minimal_projections(scalar_algebra(3));
        REQUIRE(e.size() == 1);
        CHECK((e.projection(0) - identity(3)).norm() < 1e-12);
    }
    SUBCASE("diagonal algebra") {
        const auto e = minimal_projections(diagonal_algebra(3));
        REQUIRE(e.size() == 3);
        CHECK(projection_set_distance(e.projections(), {matrix_unit(3, 0, 0), matrix_unit(3, 1, 1), matrix_unit(3, 2, 2)}) <
              1e-10);
        // canonical order: by first index carrying weight
        CHECK((e.projection(0) - matrix_unit(3, 0, 0)).norm() < 1e-10);
    }
    SUBCASE("block identities") {
        const auto e = minimal_projections(center(block_m2_m3()));
        REQUIRE(e.size() == 2);
        CHECK(projection_set_distance(e.projections(), {diag({1, 1, 0, 0, 0}), diag({0, 0, 1, 1, 1})}) < 1e-10);
    }
    SUBCASE("non-abelian input") { CHECK_THROWS_AS(minimal_projections(full_algebra(2)), InvalidInput); }
    SUBCASE("deterministic") {
        const auto a = minimal_projections(center(block_m2_m3()));
        const auto b = minimal_projections(center(block_m2_m3()));
        CHECK((a.projection(0) - b.projection(0)).norm() == 0.0);
    }
}

TEST_CASE("PotentialEvent validation") {
    CHECK_NOTHROW(PotentialEvent({matrix_unit(2, 0, 0), matrix_unit(2, 1, 1)}, {"a", "b"}));
    CHECK_THROWS_AS(PotentialEvent({matrix_unit(2, 0, 0)}, {"a"}), InvalidInput);
    CHECK_NOTHROW(PotentialEvent({matrix_unit(2, 0, 0)}, {"a"}, PotentialEvent::Coverage::partial));
    CHECK_THROWS_AS(PotentialEvent({matrix_unit(2, 0, 0), identity(2)}, {"a", "b"}), InvalidInput);
    CHECK_THROWS_AS(PotentialEvent({pauli_x(), identity(2)}, {"a", "b"}), InvalidInput);
    CHECK_THROWS_AS(PotentialEvent({matrix_unit(2, 0, 0)}, {"a", "b"}), InvalidInput);
}

TEST_CASE("State validation and factories") {
    CHECK_THROWS_AS(State{pauli_x()}, InvalidInput);                  // trace 0
    CHECK_THROWS_AS(State(diag({1.5, -0.5})), InvalidInput);          // negative eigenvalue
    CHECK_THROWS_AS(State(matrix_unit(2, 0, 1) + identity(2) / 2), InvalidInput);  // not self-adjoint
    const State t = State::trace_state(4);
    CHECK(t(identity(4)).real() == doctest::Approx(1.0));
    Vector psi(2);
    psi << 3.0, 4.0;
    const State p = State::pure(psi);
    CHECK(p.weight(matrix_unit(2, 0, 0)) == doctest::Approx(0.36));
    CHECK(State::diagonal({0.75, 0.25}).weight(matrix_unit(2, 1, 1)) == doctest::Approx(0.25));
}

TEST_CASE("support_restrict examples") {
    SUBCASE("tiny eigenvalue is clamped") {
        const auto r = support_restrict(State(diag({1 - 1e-15, 1e-15})), full_algebra(2));
        CHECK((r.state.rho() - diag({1, 0})).norm() < 1e-14);
        CHECK(r.clamped == 1);
    }
    SUBCASE("faithful state is unchanged") {
        Rng rng(2);
        const State s(random_density(3, rng));
        const auto r = support_restrict(s, full_algebra(3));
        CHECK((r.state.rho() - s.rho()).norm() < 1e-14);
        CHECK(r.clamped == 0);
    }
    SUBCASE("slightly negative eigenvalue") {
        const auto r = support_restrict(State(diag({0.5, 0.5, -1e-13})), full_algebra(3));
        CHECK((r.state.rho() - diag({0.5, 0.5, 0})).norm() < 1e-14);
    }
}

TEST_CASE("GNS examples") {
    Rng rng(5);
    for (Index n = 2; n <= 3; ++n) {
        const GnsSpace g(full_algebra(n), State(random_density(n, rng)));
        CHECK(g.dim() == n * n);
        CHECK(g.inner_product_defect() < 1e-10);
        CHECK(g.cyclic_vector().norm() == doctest::Approx(1.0));
    }
    const GnsSpace pure(full_algebra(2), State::diagonal({1.0, 0.0}));
    CHECK(pure.dim() == 2);
    CHECK(pure.inner_product_defect() < 1e-10);
    const GnsSpace scalar(scalar_algebra(3), State::trace_state(3));
    CHECK(scalar.dim() == 1);
    CHECK(std::abs((scalar.embed(identity(3)) - scalar.cyclic_vector()).norm()) < 1e-12);
    CHECK_THROWS_AS(scalar.embed(matrix_unit(3, 0, 1)), InvalidInput);
}

TEST_CASE("conditional expectation examples") {
    const auto alg = full_algebra(2);
    const State omega = State::diagonal({0.75, 0.25});
    const PotentialEvent event({matrix_unit(2, 0, 0), matrix_unit(2, 1, 1)}, {"0", "1"});
    for (std::size_t k = 0; k < 2; ++k)
        CHECK((conditional_expectation(alg, omega, event, event.projection(k)) - event.projection(k)).norm() < 1e-12);
    CHECK((conditional_expectation(alg, omega, event, identity(2)) - identity(2)).norm() < 1e-12);
    CHECK(conditional_expectation(alg, omega, event, pauli_x()).norm() < 1e-12);
    CHECK(conditional_expectation_gns(alg, omega, event, pauli_x()).norm() < 1e-10);

    const State thin = State::diagonal({1.0 - 1e-8, 1e-8});
    CHECK_THROWS_AS(conditional_expectation(alg, thin, event, pauli_x()), NumericFailure);
}

TEST_CASE("tensor layout agrees with Kronecker products") {
    Rng rng(8);
    const CellLayout lay(3, 2);
    const Operator a = random_matrix(2, rng), b = random_matrix(2, rng), c = random_matrix(2, rng);
    const Operator abc = kron(kron(a, b), c);
    CHECK((lay.embed(a, {0}) - kron(a, identity(4))).norm() < 1e-12);
    CHECK((lay.embed(c, {2}) - kron(identity(4), c)).norm() < 1e-12);
    CHECK((lay.embed(kron(a, c), {0, 2}) - kron(kron(a, identity(2)), c)).norm() < 1e-12);
    CHECK((lay.reduce(abc, {0, 2}) - b.trace() * kron(a, c)).norm() < 1e-10);
    double residual = 1.0;
    CHECK((lay.extract(lay.embed(kron(b, c), {1, 2}), {1, 2}, &residual) - kron(b, c)).norm() < 1e-12);
    CHECK(residual < 1e-12);
    lay.extract(abc, {0, 1}, &residual);
    CHECK(residual > 1e-3);
    const Operator m = random_matrix(8, rng);
    CHECK((lay.apply_left(b, {1}, m) - lay.embed(b, {1}) * m).norm() < 1e-12);
    CHECK((lay.apply_right(m, b, {1}) - m * lay.embed(b, {1})).norm() < 1e-12);
    CHECK((lay.embed(lay.widen(a, {0}, {0, 2}), {0, 2}) - lay.embed(a, {0})).norm() < 1e-12);
    CHECK(complement({0, 2}, 4) == CellSet{1, 3});
    CHECK(set_union({0, 2}, {1, 2}) == CellSet{0, 1, 2});
    CHECK(set_difference({0, 1, 2}, {1}) == CellSet{0, 2});
    CHECK(set_intersection({0, 1}, {1, 2}) == CellSet{1});
    CHECK(is_subset({1}, {0, 1}));
}

// Properties over seeded random block algebras U (⊕ M_k ⊗ 1_m) U*.

TEST_CASE("property: closure, commutant and center dimensions match the block structure") {
    Rng rng(20240601);
    for (int trial = 0; trial < 25; ++trial) {
        const BlockSpec s = random_block_spec(6, rng);
        const Index n = s.dim();
        const Operator u = random_unitary(n, rng);
        const auto gens = random_block_generators(s, u, rng);
        const auto alg = algebra_closure(gens, n);
        CAPTURE(trial);
        CHECK(alg.dim() == s.algebra_dim());
        CHECK(alg.orthonormality_defect() < 1e-10);
        CHECK(alg.closure_defect() < 1e-10);
        const auto com = commutant(alg);
        CHECK(com.dim() == s.commutant_dim());
        CHECK(com.dim() == brute_commutant_dim(gens, n));
        CHECK(center(alg).dim() == static_cast<Index>(s.blocks.size()));
        CHECK(is_abelian(center(alg), 1e-9));
        CHECK(subspace_residual(commutant(com), alg) < 1e-10);
        CHECK(subspace_residual(alg, commutant(com)) < 1e-10);
    }
}

TEST_CASE("property: centralizer is tracial and has the brute-force dimension") {
    Rng rng(77);
    for (int trial = 0; trial < 15; ++trial) {
        const BlockSpec s = random_block_spec(6, rng);
        const Index n = s.dim();
        const Operator u = random_unitary(n, rng);
        const auto alg = algebra_closure(random_block_generators(s, u, rng), n);
        const Operator rho = random_density(n, rng);
        const State omega(rho);
        const auto c = centralizer(alg, omega);
        CAPTURE(trial);
        CHECK(c.dim() == brute_centralizer_dim(alg.basis_ops(), rho));
        CHECK(is_contained(c, alg, 1e-10));
        CHECK(c.contains_identity(1e-10));
        double worst = 0.0;
        const auto basis = c.basis_ops();
        for (const auto& x : basis)
            for (const auto& y : basis) worst = std::max(worst, std::abs(omega(x * y) - omega(y * x)));
        CHECK(worst < 1e-11);
    }
}

TEST_CASE("property: minimal projections regenerate the abelian algebra") {
    Rng rng(99);
    for (int trial = 0; trial < 15; ++trial) {
        const BlockSpec s = random_block_spec(6, rng);
        const Index n = s.dim();
        const Operator u = random_unitary(n, rng);
        const auto alg = algebra_closure(random_block_generators(s, u, rng), n);
        const auto z = center_of_centralizer(alg, State(random_density(n, rng)));
        const auto e = minimal_projections(z);
        CAPTURE(trial);
        CHECK(static_cast<Index>(e.size()) == z.dim());
        CHECK_NOTHROW(PotentialEvent(e.projections(), e.labels()));
        CHECK(algebras_equal(algebra_closure(e.projections(), n), z, 1e-9));
    }
}

TEST_CASE("property: conditional expectation constructions agree and preserve omega") {
    Rng rng(123);
    for (int trial = 0; trial < 10; ++trial) {
        const Index n = 2 + trial % 3;
        const auto alg = full_algebra(n);
        const Operator rho = random_density(n, rng);
        const State omega(rho);
        const auto z = center_of_centralizer(alg, omega);
        const auto event = minimal_projections(z);
        const GnsSpace gns(alg, omega);
        double gap = 0.0, drift = 0.0;
        for (const auto& a : alg.basis_ops()) {
            const Operator closed = conditional_expectation(alg, omega, event, a);
            gap = std::max(gap, op_norm(closed - conditional_expectation_gns(gns, event, a, omega)));
            drift = std::max(drift, std::abs(omega(closed) - omega(a)));
            // idempotent
            CHECK(op_norm(conditional_expectation(alg, omega, event, closed) - closed) < 1e-9);
        }
        CAPTURE(trial);
        CHECK(gap < 1e-9);
        CHECK(drift < 1e-9);
    }
}
