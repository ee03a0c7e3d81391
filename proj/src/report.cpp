#include "ethsim/report.hpp"

#include <cstdio>
#include <sstream>

namespace ethsim {

using nlohmann::json;

void to_json(json& j, const Point& p) { j = json::array({p.tau, p.x}); }
void from_json(const json& j, Point& p) {
    if (!j.is_array() || j.size() != 2) throw InvalidInput("report: point must be [tau, x]");
    p = {j.at(0).get<int>(), j.at(1).get<int>()};
}

void to_json(json& j, const ReportNode& n) {
    j = json{{"leaf_index", n.leaf_index},     {"label", n.label},         {"cond_prob", n.cond_prob},
             {"path_prob", n.path_prob},       {"happened", n.happened},   {"event_algebra_dim", n.event_algebra_dim},
             {"axiom2_norm", n.axiom2_norm},   {"children", n.children}};
    if (n.point) j["point"] = *n.point;
}
void from_json(const json& j, ReportNode& n) {
    n.leaf_index = j.at("leaf_index").get<int>();
    n.point = j.contains("point") ? std::optional<Point>(j.at("point").get<Point>()) : std::nullopt;
    n.label = j.at("label").get<std::string>();
    n.cond_prob = j.at("cond_prob").get<double>();
    n.path_prob = j.at("path_prob").get<double>();
    n.happened = j.at("happened").get<bool>();
    n.event_algebra_dim = j.at("event_algebra_dim").get<long long>();
    n.axiom2_norm = j.at("axiom2_norm").get<double>();
    n.children = j.at("children").get<std::vector<ReportNode>>();
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ReportLeaf, path, probability)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SpectrumRow, point, event_algebra_dim, projections)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SampleRow, path, count, frequency, std_error)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SampleSection, samples, seed, rows)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(MatchedRow, spectral_index, event_index, distance)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RecordingSection, point, quantity, epsilon, L, event_count, eigenvalues,
                                   spectral_weights, basic_assumption_norms, basic_assumption, mixture_residual,
                                   mixture_constant, matched_pairs, matches_unique, expectation_gap)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Axiom2Section, mode, max_norm, flagged)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PdpRow, p, q, derived, geometric, strict_inclusion, rel_commutant_dim,
                                   rel_commutant_abelian, dense)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PdpSection, rows, mismatches)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CheckRow, name, expected, actual, tolerance, source, passed)

void to_json(json& j, const TreeSection& t) {
    j = json{{"root", t.root},
             {"leaves", t.leaves},
             {"leaf_count", t.leaf_count},
             {"probability_sum", t.probability_sum},
             {"pruned_mass", t.pruned_mass},
             {"spectrum", t.spectrum}};
    if (t.chain_rule_defect) j["chain_rule_defect"] = *t.chain_rule_defect;
}
void from_json(const json& j, TreeSection& t) {
    t.root = j.at("root").get<ReportNode>();
    t.leaves = j.at("leaves").get<std::vector<ReportLeaf>>();
    t.leaf_count = j.at("leaf_count").get<long long>();
    t.probability_sum = j.at("probability_sum").get<double>();
    t.pruned_mass = j.at("pruned_mass").get<double>();
    t.chain_rule_defect =
        j.contains("chain_rule_defect") ? std::optional<double>(j.at("chain_rule_defect").get<double>()) : std::nullopt;
    t.spectrum = j.at("spectrum").get<std::vector<SpectrumRow>>();
}

json report_to_json(const RunReport& r) {
    json j{{"config", r.config}, {"policy", r.policy}, {"scenario", r.scenario}, {"mode", r.mode},
           {"axiom2", r.axiom2}, {"checks", r.checks}};
    if (r.tree) j["tree"] = *r.tree;
    if (r.sample) j["sample"] = *r.sample;
    if (r.recording) j["recording"] = *r.recording;
    if (r.pdp) j["pdp"] = *r.pdp;
    if (r.timings) j["timings"] = *r.timings;
    return j;
}

namespace {

template <class T>
std::optional<T> optional_field(const json& j, const char* key) {
    return j.contains(key) ? std::optional<T>(j.at(key).get<T>()) : std::nullopt;
}

}  // namespace

RunReport report_from_json(const json& j) {
    try {
        RunReport r;
        r.config = j.at("config");
        r.policy = j.at("policy");
        r.scenario = j.at("scenario").get<std::string>();
        r.mode = j.at("mode").get<std::string>();
        r.axiom2 = j.at("axiom2").get<Axiom2Section>();
        r.checks = j.at("checks").get<std::vector<CheckRow>>();
        r.tree = optional_field<TreeSection>(j, "tree");
        r.sample = optional_field<SampleSection>(j, "sample");
        r.recording = optional_field<RecordingSection>(j, "recording");
        r.pdp = optional_field<PdpSection>(j, "pdp");
        r.timings = optional_field<std::map<std::string, double>>(j, "timings");
        return r;
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("report does not match the schema: ") + e.what());
    }
}

std::string serialize_report(const RunReport& r) { return report_to_json(r).dump(2) + "\n"; }

RunReport parse_report(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("report is not valid JSON: ") + e.what());
    }
    return report_from_json(j);
}

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string report_csv(const RunReport& r) {
    std::ostringstream out;
    if (r.tree) {
        out << "path,probability\n";
        for (const auto& leaf : r.tree->leaves) out << quoted(leaf.path) << "," << num(leaf.probability) << "\n";
    } else if (r.sample) {
        out << "path,count,frequency,std_error\n";
        for (const auto& row : r.sample->rows)
            out << quoted(row.path) << "," << row.count << "," << num(row.frequency) << "," << num(row.std_error)
                << "\n";
    } else if (r.recording) {
        const auto& rec = *r.recording;
        out << "k,eigenvalue,weight,norm,matched_event,distance\n";
        for (std::size_t k = 0; k < rec.eigenvalues.size(); ++k) {
            out << k << "," << num(rec.eigenvalues[k]) << "," << num(rec.spectral_weights[k]) << ",";
            if (k < rec.basic_assumption_norms.size()) out << num(rec.basic_assumption_norms[k]);
            out << ",";
            bool matched = false;
            for (const auto& m : rec.matched_pairs)
                if (m.spectral_index == static_cast<long long>(k)) {
                    out << m.event_index << "," << num(m.distance);
                    matched = true;
                }
            out << (matched ? "" : ",") << "\n";
        }
    }
    return out.str();
}

}  // namespace ethsim
