#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qldpc/construct.hpp"
#include "qldpc/decode.hpp"
#include "qldpc/noise.hpp"
#include "qldpc/sim.hpp"

namespace qldpc {

using json = nlohmann::json;

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open file for writing: " + path);
    out << content;
}

// --- Matrix helpers -------------------------------------------------------------

inline json matrix_to_json(const BitMatrix& m) {
    json rows = json::array();
    for (size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row(i).to_string());
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", rows}};
}

inline BitMatrix matrix_from_json(const json& j) {
    if (j.is_array()) {  // bare array of row strings
        std::vector<std::string> rows = j.get<std::vector<std::string>>();
        return BitMatrix::from_rows(rows);
    }
    size_t rows = j.at("rows").get<size_t>();
    size_t cols = j.at("cols").get<size_t>();
    BitMatrix m = BitMatrix::from_rows(j.at("data").get<std::vector<std::string>>(), cols);
    if (m.rows() != rows || m.cols() != cols) throw ParseError("matrix dims disagree with data");
    return m;
}

// --- Code bundle ----------------------------------------------------------------

inline json code_to_json(const CssCode& code, const LogicalBasis* basis = nullptr) {
    json j{{"n", code.n},
           {"k", code.k},
           {"hx", matrix_to_json(code.hx)},
           {"hz", matrix_to_json(code.hz)},
           {"meta", code.meta}};
    if (code.block_size > 0) j["block_size"] = code.block_size;
    if (basis) {
        j["zbar"] = matrix_to_json(basis->zbar);
        j["xbar"] = matrix_to_json(basis->xbar);
    }
    return j;
}

inline CssCode code_from_json(const json& j) {
    BitMatrix hx = matrix_from_json(j.at("hx"));
    BitMatrix hz = matrix_from_json(j.at("hz"));
    std::string meta = j.value("meta", std::string{});
    size_t block = j.value("block_size", size_t{0});
    CssCode code = validate_css(std::move(hx), std::move(hz), meta, block);
    if (j.contains("k") && j.at("k").get<size_t>() != code.k)
        throw ParseError("code bundle k disagrees with rank computation");
    return code;
}

// --- Constructor specs ------------------------------------------------------------

inline std::vector<Monomial> parse_monomials(const std::string& text) {
    std::vector<Monomial> out;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (tok.empty()) continue;
        char axis = tok[0];
        if (axis != 'x' && axis != 'y') throw ParseError("monomial must start with x or y: " + tok);
        size_t power = 0;
        if (tok.size() > 1) {
            try {
                power = std::stoul(tok.substr(1));
            } catch (...) {
                throw ParseError("bad monomial power: " + tok);
            }
        } else {
            power = 1;
        }
        Monomial m;
        if (axis == 'x') {
            m.x_power = power;
        } else {
            m.y_power = power;
        }
        out.push_back(m);
    }
    if (out.empty()) throw ParseError("empty monomial list");
    return out;
}

inline BaseMatrix base_matrix_from_json(const json& j, size_t q) {
    auto rows = j.get<std::vector<std::vector<int>>>();
    if (rows.empty()) throw ParseError("empty base matrix");
    BaseMatrix b(rows.size(), rows[0].size(), q);
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size()) throw ParseError("ragged base matrix");
        for (size_t k = 0; k < rows[i].size(); ++k) b.set(i, k, rows[i][k]);
    }
    return b;
}

// Base matrix text format: first line "rows cols q", then one row of
// whitespace-separated integers per line; -1 marks the zero block.
inline BaseMatrix base_matrix_from_text(const std::string& text) {
    std::istringstream in(text);
    long long rows = -1, cols = -1, q = -1;
    if (!(in >> rows >> cols >> q) || rows < 0 || cols < 0 || q < 1)
        throw ParseError("base matrix text must start with 'rows cols q'");
    BaseMatrix b(static_cast<size_t>(rows), static_cast<size_t>(cols), static_cast<size_t>(q));
    for (long long i = 0; i < rows; ++i)
        for (long long k = 0; k < cols; ++k) {
            int v;
            if (!(in >> v)) throw ParseError("base matrix text ended early");
            b.set(static_cast<size_t>(i), static_cast<size_t>(k), v);
        }
    return b;
}

inline std::string base_matrix_to_text(const BaseMatrix& b) {
    std::ostringstream out;
    out << b.rows << ' ' << b.cols << ' ' << b.q << '\n';
    for (size_t i = 0; i < b.rows; ++i) {
        for (size_t j = 0; j < b.cols; ++j) out << (j ? " " : "") << b.get(i, j);
        out << '\n';
    }
    return out.str();
}

inline GroupSpec group_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "cyclic") return cyclic_group(j.at("n").get<size_t>());
    if (kind == "dihedral") return dihedral_group(j.at("n").get<size_t>());
    if (kind == "direct") {
        GroupSpec g1 = group_from_json(j.at("g1"));
        GroupSpec g2 = group_from_json(j.at("g2"));
        return direct_product(g1, g2);
    }
    if (kind == "table") {
        auto table = j.at("mul").get<std::vector<std::vector<size_t>>>();
        size_t order = table.size();
        std::vector<size_t> mul;
        for (const auto& row : table) {
            if (row.size() != order) throw ParseError("ragged multiplication table");
            mul.insert(mul.end(), row.begin(), row.end());
        }
        std::vector<std::string> labels;
        if (j.contains("labels")) {
            labels = j.at("labels").get<std::vector<std::string>>();
        } else {
            for (size_t i = 0; i < order; ++i) labels.push_back("g" + std::to_string(i));
        }
        return GroupSpec(order, std::move(mul), std::move(labels));
    }
    throw ParseError("unknown group kind: " + kind);
}

inline std::vector<size_t> generators_from_json(const GroupSpec& group, const json& j) {
    std::vector<size_t> gens;
    for (const auto& item : j) {
        if (item.is_number_unsigned()) {
            gens.push_back(item.get<size_t>());
        } else {
            std::string label = item.get<std::string>();
            size_t idx = SIZE_MAX;
            for (size_t g = 0; g < group.order; ++g)
                if (group.labels[g] == label) idx = g;
            if (idx == SIZE_MAX) throw ParseError("unknown group element label: " + label);
            gens.push_back(idx);
        }
    }
    return gens;
}

// {"name": "toric"|"surface"|"hp"|"lp"|"two-block"|"bb"|"2bga", ...}
inline CssCode construct_from_json(const json& j) {
    std::string name = j.at("name").get<std::string>();
    if (name == "toric") return toric_code(j.at("L").get<size_t>());
    if (name == "surface") return surface_code(j.at("L").get<size_t>());
    if (name == "hp")
        return hypergraph_product(matrix_from_json(j.at("ha")), matrix_from_json(j.at("hb")));
    if (name == "lp") {
        size_t q = j.at("q").get<size_t>();
        return lifted_product(base_matrix_from_json(j.at("ba"), q),
                              base_matrix_from_json(j.at("bb"), q));
    }
    if (name == "two-block")
        return two_block(matrix_from_json(j.at("a")), matrix_from_json(j.at("b")));
    if (name == "bb") {
        return bivariate_bicycle(j.at("ell").get<size_t>(), j.at("m").get<size_t>(),
                                 parse_monomials(j.at("a").get<std::string>()),
                                 parse_monomials(j.at("b").get<std::string>()),
                                 j.value("relaxed", false));
    }
    if (name == "2bga") {
        GroupSpec group = group_from_json(j.at("group"));
        return two_block_group_algebra(group, generators_from_json(group, j.at("sa")),
                                       generators_from_json(group, j.at("sb")));
    }
    throw ParseError("unknown constructor: " + name);
}

inline CssCode code_from_source_json(const json& j) {
    if (j.contains("file")) return code_from_json(json::parse(read_file(j.at("file"))));
    if (j.contains("construct")) return construct_from_json(j.at("construct"));
    return construct_from_json(j);  // allow the constructor object inline
}

// --- Circuit dump ------------------------------------------------------------------

// Line-oriented dump: INIT_X/INIT_Z lines, TICK-separated CNOT timesteps,
// then M_X/M_Z lines.
inline std::string circuit_to_text(const SmCircuit& c) {
    std::ostringstream out;
    for (const Gate& g : c.timesteps.front())
        out << (g.basis == Basis::X ? "INIT_X " : "INIT_Z ") << g.q1 << '\n';
    for (size_t t = 1; t <= c.cnot_timesteps; ++t) {
        out << "TICK\n";
        for (const Gate& g : c.timesteps[t]) out << "CX " << g.q1 << ' ' << g.q2 << '\n';
    }
    out << "TICK\n";
    for (const Gate& g : c.timesteps.back())
        out << (g.basis == Basis::X ? "M_X " : "M_Z ") << g.q1 << '\n';
    return out.str();
}

inline std::string origin_to_string(const ColumnOrigin& o) {
    std::string kind = o.kind == ColumnOrigin::Kind::Location
                           ? "loc"
                           : (o.kind == ColumnOrigin::Kind::CnotPair ? "cx" : "flip");
    return "r" + std::to_string(o.round) + ":" + kind + std::to_string(o.index);
}

inline json detector_side_to_json(const DetectorSide& side) {
    json prov = json::array();
    for (const auto& members : side.provenance) {
        json list = json::array();
        for (const auto& o : members) list.push_back(origin_to_string(o));
        prov.push_back(list);
    }
    return json{{"h_det", matrix_to_json(side.h_det)},
                {"priors", side.priors},
                {"fault_to_data", matrix_to_json(side.fault_to_data)},
                {"provenance", prov}};
}

inline json detector_model_to_json(const DetectorModel& model) {
    return json{{"rounds", model.rounds},
                {"closure", model.closure},
                {"x", detector_side_to_json(model.x_side)},
                {"z", detector_side_to_json(model.z_side)}};
}

// --- Experiment spec ----------------------------------------------------------------

inline ExperimentSpec experiment_from_json(const json& j) {
    ExperimentSpec spec;
    spec.code = code_from_source_json(j.at("code"));

    const json& noise = j.at("noise");
    std::string tier = noise.at("tier").get<std::string>();
    if (tier == "code-capacity") {
        spec.noise.tier = NoiseTier::CodeCapacity;
    } else if (tier == "phenomenological") {
        spec.noise.tier = NoiseTier::Phenomenological;
    } else if (tier == "circuit-level") {
        spec.noise.tier = NoiseTier::CircuitLevel;
    } else {
        throw ParseError("unknown noise tier: " + tier);
    }
    spec.noise.p = noise.value("p", 0.0);
    spec.noise.q_syn = noise.value("q_syn", 0.0);
    spec.noise.rounds = noise.value("rounds", size_t{1});
    spec.noise.closure = noise.value("closure", true);
    spec.noise.idle = noise.value("idle", 1.0);
    spec.noise.gate = noise.value("gate", 1.0);
    spec.noise.init = noise.value("init", 1.0);
    spec.noise.meas = noise.value("meas", 1.0);
    spec.noise.gate_correlated = noise.value("gate_correlated", 0.0);
    spec.noise.data_first_boundary_only = noise.value("data_first_boundary_only", false);

    const json& dec = j.at("decoder");
    std::string alg = dec.value("alg", std::string("nms"));
    if (alg == "nms") {
        spec.algorithm = Algorithm::NormalizedMinSum;
    } else if (alg == "sp") {
        spec.algorithm = Algorithm::SumProduct;
    } else {
        throw ParseError("unknown decoder algorithm: " + alg);
    }
    spec.normalization = dec.value("norm", 1.0);
    spec.max_iters = dec.value("iters", size_t{100});
    spec.osd0 = dec.value("osd0", false);
    spec.clip = dec.value("clip", 30.0);
    std::string sched = dec.value("schedule", std::string("flooding"));
    if (sched == "flooding") {
        spec.schedule = ScheduleSpec::Flooding;
    } else if (sched == "serial") {
        spec.schedule = ScheduleSpec::Serial;
    } else if (sched == "layered-ab" || sched == "layered") {
        spec.schedule = ScheduleSpec::LayeredAB;
    } else if (sched == "layered-rc") {
        spec.schedule = ScheduleSpec::LayeredRC;
    } else {
        throw ParseError("unknown schedule: " + sched);
    }

    spec.trials = j.value("trials", size_t{1000});
    spec.seed = j.value("seed", uint64_t{0});
    // default stop rule: target-failures(100) capped by `trials`
    if (j.contains("stop")) {
        std::string rule = j.at("stop").value("rule", std::string("fixed"));
        if (rule == "fixed") {
            spec.stop.kind = StopRule::Kind::FixedTrials;
        } else if (rule == "target-failures") {
            spec.stop.kind = StopRule::Kind::TargetFailures;
            spec.stop.target_failures = j.at("stop").value("failures", size_t{100});
        } else {
            throw ParseError("unknown stop rule: " + rule);
        }
    }
    return spec;
}

// "0.01:0.1:10" (linear), "0.01:0.1:10log" (geometric), or "0.01,0.02,0.05".
inline std::vector<double> parse_p_grid(const std::string& text) {
    std::vector<double> grid;
    if (text.find(':') != std::string::npos) {
        std::istringstream in(text);
        std::string a, b, c;
        std::getline(in, a, ':');
        std::getline(in, b, ':');
        std::getline(in, c, ':');
        bool logspace = false;
        if (c.size() >= 3 && c.substr(c.size() - 3) == "log") {
            logspace = true;
            c = c.substr(0, c.size() - 3);
        }
        double lo = std::stod(a), hi = std::stod(b);
        size_t count = std::stoul(c);
        if (count == 0) throw ParseError("p grid needs at least one point");
        for (size_t i = 0; i < count; ++i) {
            double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
            grid.push_back(logspace ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t);
        }
    } else {
        std::istringstream in(text);
        std::string tok;
        while (std::getline(in, tok, ','))
            if (!tok.empty()) grid.push_back(std::stod(tok));
    }
    if (grid.empty()) throw ParseError("empty p grid");
    return grid;
}

}  // namespace qldpc
