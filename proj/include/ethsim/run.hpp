// run.hpp: executes a RunConfig end to end

#pragma once

#include "ethsim/config.hpp"
#include "ethsim/report.hpp"
#include "ethsim/scenarios.hpp"

#include <exception>
#include <string>

namespace ethsim {

/// Defaults with the config's overrides (prob_floor, caps).
NumericPolicy policy_for(const RunConfig& config);

/// The scenario a config describes: a shipped one (with overrides) or a custom net.
Scenario scenario_for(const RunConfig& config, const NumericPolicy& policy);

State build_state(const StateSpec& spec, Index dim, const NumericPolicy& policy = default_policy());

/// Quantity for record mode, with its representative on H_{S_P}.
PhysicalQuantity build_quantity(const QuantitySpec& spec, const Scenario& scenario);

/// Validates the config and runs it. Deterministic given the config.
RunReport run(const RunConfig& config);

/// Writes the report in the config's format to `path`, or to standard output when
/// `path` is empty.
void emit_report(const RunReport& report, OutputFormat format, const std::string& path);

/// 1 config error, 2 numeric failure (including Axiom 2 aborts), 3 cap exceeded.
int exit_code_for(const std::exception& e);

}  // namespace ethsim
