// report.hpp: run report: structured (JSON) and CSV forms

#pragma once

#include "ethsim/spacetime.hpp"

#include "json.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ethsim {

struct ReportNode {
    int leaf_index = -1;
    std::optional<Point> point;  // empty for the root
    std::string label;           // empty when no event happened at the point
    double cond_prob = 1.0;
    double path_prob = 1.0;
    bool happened = false;
    long long event_algebra_dim = 0;
    double axiom2_norm = 0.0;
    std::vector<ReportNode> children;
    bool operator==(const ReportNode&) const = default;
};

struct ReportLeaf {
    std::string path;
    double probability = 0.0;
    bool operator==(const ReportLeaf&) const = default;
};

struct SpectrumRow {
    Point point;
    long long event_algebra_dim = 0;
    long long projections = 0;
    bool operator==(const SpectrumRow&) const = default;
};

struct TreeSection {
    ReportNode root;
    std::vector<ReportLeaf> leaves;
    long long leaf_count = 0;
    double probability_sum = 0.0;
    double pruned_mass = 0.0;
    std::optional<double> chain_rule_defect;  // absent when propagators are used
    std::vector<SpectrumRow> spectrum;
    bool operator==(const TreeSection&) const = default;
};

struct SampleRow {
    std::string path;
    long long count = 0;
    double frequency = 0.0;
    double std_error = 0.0;
    bool operator==(const SampleRow&) const = default;
};

struct SampleSection {
    long long samples = 0;
    std::uint64_t seed = 0;
    std::vector<SampleRow> rows;
    bool operator==(const SampleSection&) const = default;
};

struct MatchedRow {
    long long spectral_index = 0;
    long long event_index = 0;
    double distance = 0.0;
    bool operator==(const MatchedRow&) const = default;
};

struct RecordingSection {
    Point point;
    std::string quantity;
    double epsilon = 0.0;
    long long L = 0;
    long long event_count = 0;
    std::vector<double> eigenvalues;
    std::vector<double> spectral_weights;
    std::vector<double> basic_assumption_norms;
    bool basic_assumption = false;
    double mixture_residual = 0.0;
    double mixture_constant = 0.0;
    std::vector<MatchedRow> matched_pairs;
    bool matches_unique = true;
    double expectation_gap = 0.0;
    bool operator==(const RecordingSection&) const = default;
};

struct Axiom2Section {
    std::string mode;
    double max_norm = 0.0;
    bool flagged = false;
    bool operator==(const Axiom2Section&) const = default;
};

struct PdpRow {
    Point p;
    Point q;
    bool derived = false;
    bool geometric = false;
    bool strict_inclusion = false;
    long long rel_commutant_dim = 0;
    bool rel_commutant_abelian = true;
    bool dense = false;
    bool operator==(const PdpRow&) const = default;
};

struct PdpSection {
    std::vector<PdpRow> rows;
    long long mismatches = 0;
    bool operator==(const PdpSection&) const = default;
};

struct CheckRow {
    std::string name;
    double expected = 0.0;
    double actual = 0.0;
    double tolerance = 0.0;
    std::string source;
    bool passed = false;
    bool operator==(const CheckRow&) const = default;
};

struct RunReport {
    nlohmann::json config;  // canonical echo
    nlohmann::json policy;  // every tolerance in effect
    std::string scenario;
    std::string mode;
    std::optional<TreeSection> tree;
    std::optional<SampleSection> sample;
    std::optional<RecordingSection> recording;
    Axiom2Section axiom2;
    std::optional<PdpSection> pdp;
    std::vector<CheckRow> checks;
    std::optional<std::map<std::string, double>> timings;  // seconds per stage
    bool operator==(const RunReport&) const = default;
};

nlohmann::json report_to_json(const RunReport& r);
/// Throws InvalidInput on schema mismatch.
RunReport report_from_json(const nlohmann::json& j);

std::string serialize_report(const RunReport& r);
RunReport parse_report(const std::string& text);

/// enumerate: path,probability per leaf; sample: path,count,frequency,std_error;
/// record: one row per spectral projection.
std::string report_csv(const RunReport& r);

}  // namespace ethsim
