#include "ethsim/config.hpp"

#include "ethsim/scenarios.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace ethsim {

using nlohmann::json;

std::string to_string(RunMode m) {
    switch (m) {
        case RunMode::enumerate: return "enumerate";
        case RunMode::sample: return "sample";
        case RunMode::record: return "record";
    }
    return "?";
}

std::string to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "structured"; }

namespace {

const std::set<std::string> known_keys = {
    "scenario", "net",          "initial_state", "foliation", "epr",    "massive_extent", "epsilon",
    "prob_floor", "hilbert_cap", "max_branches", "axiom2",    "mode",   "samples",        "seed",
    "quantity", "pdp_table",    "output",        "format",    "timings"};

std::string join(const std::string& parent, const std::string& key) {
    return parent.empty() ? key : parent + "." + key;
}

double number(const json& j, const std::string& field) {
    if (!j.is_number()) throw ConfigError(field, "expected a number");
    return j.get<double>();
}

long long integer(const json& j, const std::string& field) {
    if (!j.is_number_integer()) throw ConfigError(field, "expected an integer");
    return j.get<long long>();
}

std::string text(const json& j, const std::string& field) {
    if (!j.is_string()) throw ConfigError(field, "expected a string");
    return j.get<std::string>();
}

bool boolean(const json& j, const std::string& field) {
    if (!j.is_boolean()) throw ConfigError(field, "expected true or false");
    return j.get<bool>();
}

const json& object(const json& j, const std::string& field) {
    if (!j.is_object()) throw ConfigError(field, "expected an object");
    return j;
}

Point point_from(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2) throw ConfigError(field, "expected [tau, x]");
    return {static_cast<int>(integer(j[0], field + "[0]")), static_cast<int>(integer(j[1], field + "[1]"))};
}

Eigen::Vector3d vector3(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 3) throw ConfigError(field, "expected [x, y, z]");
    return {number(j[0], field + "[0]"), number(j[1], field + "[1]"), number(j[2], field + "[2]")};
}

json vector3_to_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

NetSpec parse_net(const json& j, const std::string& field) {
    object(j, field);
    NetSpec n;
    for (const auto& [key, value] : j.items()) {
        const std::string f = join(field, key);
        if (key == "kind") n.kind = text(value, f);
        else if (key == "extent_tau") n.extent_tau = static_cast<int>(integer(value, f));
        else if (key == "extent_x") n.extent_x = static_cast<int>(integer(value, f));
        else if (key == "speed") n.speed = static_cast<int>(integer(value, f));
        else if (key == "cell_dim") n.cell_dim = static_cast<int>(integer(value, f));
        else if (key == "n_cells") n.n_cells = static_cast<int>(integer(value, f));
        else throw ConfigError(f, "unknown key");
    }
    return n;
}

StateSpec parse_state(const json& j, const std::string& field) {
    StateSpec s;
    if (j.is_string()) {
        s.builtin = j.get<std::string>();
        return s;
    }
    object(j, field);
    if (j.size() != 1) throw ConfigError(field, "give exactly one of builtin, matrix, spectrum");
    const auto& [key, value] = *j.items().begin();
    const std::string f = join(field, key);
    if (key == "builtin") s.builtin = text(value, f);
    else if (key == "matrix") s.matrix = matrix_from_json(value, f);
    else if (key == "spectrum") {
        if (!value.is_array() || value.empty()) throw ConfigError(f, "expected a non-empty list of weights");
        for (std::size_t i = 0; i < value.size(); ++i)
            s.spectrum.push_back(number(value[i], f + "[" + std::to_string(i) + "]"));
    } else
        throw ConfigError(f, "unknown key");
    return s;
}

Foliation parse_foliation(const json& j, const std::string& field) {
    if (j.is_string()) {
        if (j.get<std::string>() != "constant-tau") throw ConfigError(field, "unknown foliation (use constant-tau or a list of leaves)");
        return {};
    }
    if (!j.is_array() || j.empty()) throw ConfigError(field, "expected a list of leaves");
    Foliation f;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string lf = field + "[" + std::to_string(i) + "]";
        if (!j[i].is_array() || j[i].empty()) throw ConfigError(lf, "expected a non-empty list of points");
        std::vector<Point> leaf;
        for (std::size_t k = 0; k < j[i].size(); ++k)
            leaf.push_back(point_from(j[i][k], lf + "[" + std::to_string(k) + "]"));
        f.leaves.push_back(std::move(leaf));
    }
    return f;
}

QuantitySpec parse_quantity(const json& j, const std::string& field) {
    object(j, field);
    QuantitySpec q;
    bool has_point = false;
    for (const auto& [key, value] : j.items()) {
        const std::string f = join(field, key);
        if (key == "name") q.name = text(value, f);
        else if (key == "point") {
            q.point = point_from(value, f);
            has_point = true;
        } else if (key == "builtin") q.builtin = text(value, f);
        else if (key == "cell") q.cell = static_cast<int>(integer(value, f));
        else if (key == "matrix") q.matrix = matrix_from_json(value, f);
        else throw ConfigError(f, "unknown key");
    }
    if (!has_point) throw ConfigError(join(field, "point"), "required");
    return q;
}

Axiom2Mode parse_axiom2(const std::string& s, const std::string& field) {
    if (s == "warn") return Axiom2Mode::warn;
    if (s == "abort") return Axiom2Mode::abort;
    throw ConfigError(field, "expected warn or abort");
}

RunMode parse_mode(const std::string& s, const std::string& field) {
    if (s == "enumerate") return RunMode::enumerate;
    if (s == "sample") return RunMode::sample;
    if (s == "record") return RunMode::record;
    throw ConfigError(field, "expected enumerate, sample or record");
}

OutputFormat parse_format(const std::string& s, const std::string& field) {
    if (s == "structured") return OutputFormat::structured;
    if (s == "csv") return OutputFormat::csv;
    throw ConfigError(field, "expected structured or csv");
}

}  // namespace

json matrix_to_json(const Operator& m) {
    json rows = json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

Operator matrix_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) throw ConfigError(field, "expected a non-empty list of rows");
    const std::size_t n = j.size();
    Operator m(static_cast<Index>(n), static_cast<Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
        const std::string rf = field + "[" + std::to_string(r) + "]";
        if (!j[r].is_array() || j[r].size() != n) throw ConfigError(rf, "expected a row of " + std::to_string(n) + " entries");
        for (std::size_t c = 0; c < n; ++c) {
            const json& e = j[r][c];
            const std::string ef = rf + "[" + std::to_string(c) + "]";
            if (e.is_number()) m(r, c) = e.get<double>();
            else if (e.is_array() && e.size() == 2) m(r, c) = cplx(number(e[0], ef + "[0]"), number(e[1], ef + "[1]"));
            else throw ConfigError(ef, "expected a number or [re, im]");
        }
    }
    return m;
}

json policy_to_json(const NumericPolicy& p) {
    return json{{"tol_basis", p.tol_basis},
                {"tol_closure", p.tol_closure},
                {"tol_proj", p.tol_proj},
                {"tol_psd", p.tol_psd},
                {"tol_trace", p.tol_trace},
                {"tol_gns", p.tol_gns},
                {"tol_gns_null", p.tol_gns_null},
                {"tol_ce", p.tol_ce},
                {"gap_min", p.gap_min},
                {"eps_floor", p.eps_floor},
                {"max_retries", p.max_retries},
                {"prob_floor", p.prob_floor},
                {"trace_floor", p.trace_floor},
                {"tol_mixture", p.tol_mixture},
                {"tol_axiom2", p.tol_axiom2},
                {"tol_tree", p.tol_tree},
                {"match_threshold", p.match_threshold},
                {"dense_event_basis_cap", p.dense_event_basis_cap},
                {"dense_pdp_dim", p.dense_pdp_dim},
                {"hilbert_cap", p.hilbert_cap},
                {"max_branches", p.max_branches},
                {"generic_seed", p.generic_seed}};
}

RunConfig parse_config(const json& j) {
    object(j, "(root)");
    RunConfig c;
    for (const auto& [key, value] : j.items()) {
        if (!known_keys.count(key)) throw ConfigError(key, "unknown key");
        if (key == "scenario") c.scenario = text(value, key);
        else if (key == "net") c.net = parse_net(value, key);
        else if (key == "initial_state") c.initial = parse_state(value, key);
        else if (key == "foliation") {
            Foliation f = parse_foliation(value, key);
            if (!f.leaves.empty()) c.foliation = std::move(f);
        } else if (key == "epr") {
            object(value, key);
            for (const auto& [k2, v2] : value.items()) {
                if (k2 == "n") c.epr_n = vector3(v2, "epr.n");
                else if (k2 == "n_prime") c.epr_n_prime = vector3(v2, "epr.n_prime");
                else throw ConfigError("epr." + k2, "unknown key");
            }
        } else if (key == "massive_extent") c.massive_extent = static_cast<int>(integer(value, key));
        else if (key == "epsilon") c.epsilon = number(value, key);
        else if (key == "prob_floor") c.prob_floor = number(value, key);
        else if (key == "hilbert_cap") {
            const long long v = integer(value, key);
            if (v <= 0) throw ConfigError(key, "must be positive");
            c.hilbert_cap = static_cast<std::size_t>(v);
        } else if (key == "max_branches") {
            const long long v = integer(value, key);
            if (v <= 0) throw ConfigError(key, "must be positive");
            c.max_branches = static_cast<std::size_t>(v);
        } else if (key == "axiom2") c.axiom2 = parse_axiom2(text(value, key), key);
        else if (key == "mode") c.mode = parse_mode(text(value, key), key);
        else if (key == "samples") {
            const long long v = integer(value, key);
            if (v < 0) throw ConfigError(key, "must be non-negative");
            c.samples = static_cast<std::size_t>(v);
        } else if (key == "seed") {
            if (!value.is_number_integer()) throw ConfigError(key, "expected a 64-bit integer");
            if (value.is_number_unsigned()) c.seed = value.get<std::uint64_t>();
            else {
                const long long v = value.get<long long>();
                if (v < 0) throw ConfigError(key, "must be non-negative");
                c.seed = static_cast<std::uint64_t>(v);
            }
        } else if (key == "quantity") c.quantity = parse_quantity(value, key);
        else if (key == "pdp_table") c.pdp_table = boolean(value, key);
        else if (key == "output") c.output = text(value, key);
        else if (key == "format") c.format = parse_format(text(value, key), key);
        else if (key == "timings") c.timings = boolean(value, key);
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", "cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("--config", std::string("not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

void RunConfig::validate() const {
    if (scenario.empty() && !net) throw ConfigError("scenario", "give a scenario name or a net");
    if (!scenario.empty() && net) throw ConfigError("net", "a net cannot be combined with a scenario");
    if (!scenario.empty()) {
        const auto names = scenario_names();
        if (std::find(names.begin(), names.end(), scenario) == names.end())
            throw ConfigError("scenario", "unknown scenario " + scenario);
    }
    if (net) {
        if (net->kind != "tensor" && net->kind != "constant") throw ConfigError("net.kind", "expected tensor or constant");
        if (net->extent_tau <= 0) throw ConfigError("net.extent_tau", "must be positive");
        if (net->extent_x <= 0) throw ConfigError("net.extent_x", "must be positive");
        if (net->speed <= 0) throw ConfigError("net.speed", "must be positive");
        if (net->cell_dim < 2) throw ConfigError("net.cell_dim", "must be at least 2");
        if (net->n_cells <= 0) throw ConfigError("net.n_cells", "must be positive");
        if (!initial) throw ConfigError("initial_state", "required for a custom net");
    }
    if (massive_extent <= 0) throw ConfigError("massive_extent", "must be positive");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon", "must lie in (0, 1)");
    if (!(prob_floor > 0.0 && prob_floor < 1.0)) throw ConfigError("prob_floor", "must lie in (0, 1)");
    if (initial && initial->builtin.empty() && !initial->matrix && initial->spectrum.empty())
        throw ConfigError("initial_state", "empty specification");
    if (mode == RunMode::sample) {
        if (!seed) throw ConfigError("seed", "required in sample mode");
        if (samples == 0) throw ConfigError("samples", "must be positive in sample mode");
    }
    if (mode == RunMode::record) {
        if (!quantity) throw ConfigError("quantity", "required in record mode");
        const int sources = (quantity->builtin.empty() ? 0 : 1) + (quantity->matrix ? 1 : 0);
        if (sources > 1) throw ConfigError("quantity", "give at most one of builtin, matrix");
        if (sources == 0 && quantity->name.empty()) throw ConfigError("quantity.name", "name a scenario quantity or give builtin/matrix");
        if (!quantity->builtin.empty() && quantity->builtin != "pauli_x" && quantity->builtin != "pauli_y" &&
            quantity->builtin != "pauli_z")
            throw ConfigError("quantity.builtin", "expected pauli_x, pauli_y or pauli_z");
    }
}

json config_to_json(const RunConfig& c) {
    json j;
    if (!c.scenario.empty()) j["scenario"] = c.scenario;
    if (c.net)
        j["net"] = {{"kind", c.net->kind},         {"extent_tau", c.net->extent_tau}, {"extent_x", c.net->extent_x},
                    {"speed", c.net->speed},       {"cell_dim", c.net->cell_dim},     {"n_cells", c.net->n_cells}};
    if (c.initial) {
        if (!c.initial->builtin.empty()) j["initial_state"] = {{"builtin", c.initial->builtin}};
        else if (c.initial->matrix) j["initial_state"] = {{"matrix", matrix_to_json(*c.initial->matrix)}};
        else j["initial_state"] = {{"spectrum", c.initial->spectrum}};
    }
    if (c.foliation) {
        json leaves = json::array();
        for (const auto& leaf : c.foliation->leaves) {
            json l = json::array();
            for (const auto& p : leaf) l.push_back({p.tau, p.x});
            leaves.push_back(std::move(l));
        }
        j["foliation"] = std::move(leaves);
    } else {
        j["foliation"] = "constant-tau";
    }
    if (c.epr_n || c.epr_n_prime) {
        j["epr"] = json::object();
        if (c.epr_n) j["epr"]["n"] = vector3_to_json(*c.epr_n);
        if (c.epr_n_prime) j["epr"]["n_prime"] = vector3_to_json(*c.epr_n_prime);
    }
    j["massive_extent"] = c.massive_extent;
    j["epsilon"] = c.epsilon;
    j["prob_floor"] = c.prob_floor;
    j["hilbert_cap"] = c.hilbert_cap;
    j["max_branches"] = c.max_branches;
    j["axiom2"] = c.axiom2 == Axiom2Mode::abort ? "abort" : "warn";
    j["mode"] = to_string(c.mode);
    j["samples"] = c.samples;
    if (c.seed) j["seed"] = *c.seed;
    if (c.quantity) {
        json q{{"point", {c.quantity->point.tau, c.quantity->point.x}}};
        if (!c.quantity->name.empty()) q["name"] = c.quantity->name;
        if (!c.quantity->builtin.empty()) q["builtin"] = c.quantity->builtin;
        if (c.quantity->cell >= 0) q["cell"] = c.quantity->cell;
        if (c.quantity->matrix) q["matrix"] = matrix_to_json(*c.quantity->matrix);
        j["quantity"] = std::move(q);
    }
    j["pdp_table"] = c.pdp_table;
    if (!c.output.empty()) j["output"] = c.output;
    j["format"] = to_string(c.format);
    j["timings"] = c.timings;
    return j;
}

}  // namespace ethsim
