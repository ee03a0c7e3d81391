// scenarios.hpp: shipped worked examples: the EPR pair, a full-algebra (no new
// events) control, a two-leaf branching model and a single qubit

#pragma once

#include "ethsim/histories.hpp"
#include "ethsim/measurement.hpp"

#include <Eigen/Core>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace ethsim {

struct ExpectedValue {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    std::string source;  // "closed-form", "oracle" or "definition"
};

/// Two spin-1/2 particles on C^2 ⊗ C^2. Pi^p acts on the first factor and Pi^{p'} on the
/// second, unless `colocated`, where both act on the first (a negative control).
struct EprModel {
    Eigen::Vector3d n;
    Eigen::Vector3d n_prime;
    std::array<Operator, 2> pi_p;        // [0] = +, [1] = -
    std::array<Operator, 2> pi_p_prime;  // [0] = +, [1] = -
    bool colocated = false;
};

struct Scenario {
    std::string name;
    AlgebraNet net;
    State initial;
    Foliation foliation;
    BranchOptions options;
    std::vector<PhysicalQuantity> quantities;
    double epsilon = 0.05;
    std::vector<ExpectedValue> expected;
    std::optional<EprModel> epr;
};

/// Singlet (|01> - |10>)/sqrt(2).
State singlet_state();

/// Throws InvalidInput unless both directions have unit norm within 1e-12.
EprModel epr_model(const Eigen::Vector3d& n, const Eigen::Vector3d& n_prime, bool colocated = false);

/// Two spacelike lattice points, one spin each, with the spin measurements along n and
/// n' prescribed as the events. Default initial state: the singlet.
Scenario epr_scenario(const Eigen::Vector3d& n = Eigen::Vector3d::UnitZ(),
                      const Eigen::Vector3d& n_prime = Eigen::Vector3d::UnitX(),
                      const std::optional<State>& initial = std::nullopt);

/// max ||[Pi^p_a, Pi^{p'}_b]|| over the four pairs.
double epr_commutator_norm(const EprModel& model);

/// Max over outcome pairs (with nonzero normalization) and matrix units A of
/// |tr(Omega_pp' A) - tr(Omega_p'p A)|.
double order_independence_check(const EprModel& model, const State& omega,
                                const NumericPolicy& policy = default_policy());
double order_independence_check(const Scenario& scenario, const NumericPolicy& policy = default_policy());

struct NonlocalityReport {
    double unconditioned = 0.0;  // tr(Omega A), A = Pi^{p'}_{n', sigma'}
    double conditioned = 0.0;    // tr(Omega_{(n, sigma)} A)
    double difference() const { return conditioned - unconditioned; }
};

/// sigma, sigma_prime in {+1, -1}.
NonlocalityReport nonlocality_demo(const EprModel& model, const State& omega, int sigma = 1, int sigma_prime = 1,
                                   const NumericPolicy& policy = default_policy());
NonlocalityReport nonlocality_demo(const Scenario& scenario, int sigma = 1, int sigma_prime = 1,
                                   const NumericPolicy& policy = default_policy());

/// A chain of `extent` points sharing one qubit, so E_P = B(C^2) everywhere. Default
/// initial state diag(0.75, 0.25).
Scenario massive_control(int extent, const std::optional<State>& initial = std::nullopt,
                         const NumericPolicy& policy = default_policy());

/// Points a = (0,0) and b = (1,0) with S_a = {a, b}, S_b = {b}. The initial state mixes
/// two entangled vectors with weights 0.75 / 0.25; leaf probabilities 0.45, 0.30, 0.10, 0.15.
Scenario two_leaf_scenario();

/// One lattice point carrying one qubit, with the recording quantities
/// event-aligned (Z), pauli-x and perturbed-z. Default state diag(0.75, 0.25).
Scenario qubit_scenario(const std::optional<State>& initial = std::nullopt);

/// Pauli Z rotated about y by `angle`: eigenvectors (cos a, sin a), (-sin a, cos a).
Operator rotated_z(double angle);

/// Names accepted by make_scenario: epr, massive-control, two-leaf, qubit.
std::vector<std::string> scenario_names();
Scenario make_scenario(const std::string& name);

struct ExpectedCheck {
    ExpectedValue expected;
    double actual = 0.0;
    bool passed = false;
};

/// Recomputes every expected value of the scenario.
std::vector<ExpectedCheck> check_expected(const Scenario& scenario, const NumericPolicy& policy = default_policy());

}  // namespace ethsim
