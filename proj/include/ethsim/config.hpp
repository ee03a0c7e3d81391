// config.hpp: run configuration parsed from a JSON file plus command-line overrides

#pragma once

#include "ethsim/histories.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ethsim {

/// A configuration problem; `field` is the dotted path of the offending entry.
class ConfigError : public InvalidInput {
public:
    ConfigError(std::string field, const std::string& message)
        : InvalidInput("config field '" + field + "': " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

enum class RunMode { enumerate, sample, record };
enum class OutputFormat { structured, csv };

std::string to_string(RunMode m);
std::string to_string(OutputFormat f);

struct NetSpec {
    std::string kind = "tensor";  // "tensor" | "constant"
    int extent_tau = 1;
    int extent_x = 1;
    int speed = 1;
    int cell_dim = 2;
    int n_cells = 1;  // constant nets only
};

/// One of: a builtin name ("trace", "singlet", "basis:<i>"), an explicit density
/// matrix, or a diagonal spectrum.
struct StateSpec {
    std::string builtin;
    std::optional<Operator> matrix;
    std::vector<double> spectrum;
};

/// A quantity by scenario name, a builtin Pauli on one cell, or an explicit matrix on
/// H_{S_P}.
struct QuantitySpec {
    std::string name;
    Point point;
    std::string builtin;  // pauli_x | pauli_y | pauli_z
    int cell = -1;        // defaults to the cell owned by `point`
    std::optional<Operator> matrix;
};

struct RunConfig {
    std::string scenario;  // empty when a custom net is given
    std::optional<NetSpec> net;
    std::optional<StateSpec> initial;
    std::optional<Foliation> foliation;  // default: constant-tau leaves
    std::optional<Eigen::Vector3d> epr_n;
    std::optional<Eigen::Vector3d> epr_n_prime;
    int massive_extent = 2;

    double epsilon = 0.05;
    double prob_floor = 1e-9;
    std::size_t hilbert_cap = 4096;
    std::size_t max_branches = 10000;
    Axiom2Mode axiom2 = Axiom2Mode::warn;

    RunMode mode = RunMode::enumerate;
    std::size_t samples = 0;
    std::optional<std::uint64_t> seed;
    std::optional<QuantitySpec> quantity;
    bool pdp_table = true;

    std::string output;  // empty: standard output
    OutputFormat format = OutputFormat::structured;
    bool timings = false;

    /// Throws ConfigError naming the field.
    void validate() const;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// Canonical echo; parse_config(config_to_json(c)) reproduces c.
nlohmann::json config_to_json(const RunConfig& c);

/// Complex matrices as rows of [re, im] pairs; plain numbers are read as real entries.
nlohmann::json matrix_to_json(const Operator& m);
Operator matrix_from_json(const nlohmann::json& j, const std::string& field);

nlohmann::json policy_to_json(const NumericPolicy& p);

}  // namespace ethsim
