// qldpc command line: code construction, parameter reports, measurement
// circuits and detector models, one-shot decoding, and Monte Carlo sweeps.

#include <cstdlib>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "qldpc/qldpc.hpp"

namespace {

using namespace qldpc;

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty() || out_path == "-") {
        std::cout << content;
    } else {
        write_file(out_path, content);
    }
}

GroupSpec group_from_flag(const std::string& flag) {
    auto colon = flag.find(':');
    if (colon == std::string::npos) throw ParseError("group flag needs kind:arg, e.g. dihedral:3");
    std::string kind = flag.substr(0, colon);
    std::string arg = flag.substr(colon + 1);
    if (kind == "cyclic") return cyclic_group(std::stoul(arg));
    if (kind == "dihedral") return dihedral_group(std::stoul(arg));
    if (kind == "table") return group_from_json(json::parse(read_file(arg)));
    throw ParseError("unknown group kind: " + kind);
}

std::vector<size_t> gens_from_flag(const GroupSpec& group, const std::string& flag) {
    json list = json::array();
    std::istringstream in(flag);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (tok.empty()) continue;
        bool numeric = tok.find_first_not_of("0123456789") == std::string::npos;
        if (numeric) {
            list.push_back(std::stoul(tok));
        } else {
            list.push_back(tok);
        }
    }
    return generators_from_json(group, list);
}

size_t default_workers() {
    if (const char* env = std::getenv("QLDPC_WORKERS")) {
        size_t w = std::strtoul(env, nullptr, 10);
        if (w > 0) return w;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? hc : 1;
}

int run(int argc, char** argv) {
    CLI::App app{"quantum LDPC code toolkit"};
    app.require_subcommand(1);

    // ---- construct -------------------------------------------------------
    auto* construct = app.add_subcommand("construct", "build a code and emit its bundle JSON");
    construct->require_subcommand(1);
    construct->fallthrough();  // --out/--with-logicals may follow the family
    std::string out_path;
    bool with_logicals = false;
    construct->add_option("--out", out_path, "output file (default stdout)");
    construct->add_flag("--with-logicals", with_logicals, "include a logical basis in the bundle");

    size_t L = 3;
    auto* toric = construct->add_subcommand("toric", "toric code from closed repetition checks");
    toric->add_option("--L", L, "lattice size")->required();
    auto* surface = construct->add_subcommand("surface", "surface code from open chains");
    surface->add_option("--L", L, "lattice size")->required();

    std::string ha_path, hb_path;
    auto* hp = construct->add_subcommand("hp", "hypergraph product of two check matrices");
    hp->add_option("--ha", ha_path, "matrix text file")->required();
    hp->add_option("--hb", hb_path, "matrix text file")->required();

    std::string ba_path, bb_path;
    auto* lp = construct->add_subcommand("lp", "quasi-cyclic lifted product of two base matrices");
    lp->add_option("--ba", ba_path, "base matrix text file (rows cols q header)")->required();
    lp->add_option("--bb", bb_path, "base matrix text file")->required();

    std::string a_path, b_path;
    auto* tb = construct->add_subcommand("two-block", "two-block code from commuting matrices");
    tb->add_option("--a", a_path, "matrix text file")->required();
    tb->add_option("--b", b_path, "matrix text file")->required();

    size_t bb_ell = 12, bb_m = 6;
    std::string bb_a = "x3,y1,y2", bb_b = "y3,x1,x2";
    bool bb_relaxed = false;
    auto* bb = construct->add_subcommand("bb", "bivariate bicycle code");
    bb->add_option("--ell", bb_ell, "x circulant size")->required();
    bb->add_option("--m", bb_m, "y circulant size")->required();
    bb->add_option("--a", bb_a, "A monomials, e.g. x3,y1,y2")->required();
    bb->add_option("--b", bb_b, "B monomials, e.g. y3,x1,x2")->required();
    bb->add_flag("--relaxed", bb_relaxed, "allow other than three monomials per block");

    std::string group_flag, sa_flag, sb_flag;
    auto* tbga =
        construct->add_subcommand("2bga", "two-block group-algebra code from Cayley graphs");
    tbga->add_option("--group", group_flag, "cyclic:N | dihedral:N | table:file.json")->required();
    tbga->add_option("--sa", sa_flag, "right-acting generators (labels or indices)")->required();
    tbga->add_option("--sb", sb_flag, "left-acting generators (labels or indices)")->required();

    // ---- params ----------------------------------------------------------
    auto* params_cmd = app.add_subcommand("params", "report n, k and distance information");
    std::string code_path;
    size_t wmax = 0, probe_trials = 0;
    uint64_t probe_seed = 0;
    bool exhaustive = false;
    params_cmd->add_option("--code", code_path, "code bundle JSON")->required();
    auto* wmax_opt = params_cmd->add_option("--exhaustive-wmax", wmax,
                                            "exhaustive search with weight-bounded fallback");
    auto* trials_opt =
        params_cmd->add_option("--probe-trials", probe_trials, "randomized distance probe trials");
    params_cmd->add_option("--seed", probe_seed, "probe seed");
    params_cmd->add_flag("--exhaustive", exhaustive, "exhaustive kernel-space search");

    // ---- circuit ---------------------------------------------------------
    auto* circuit_cmd =
        app.add_subcommand("circuit", "emit a measurement circuit or detector model");
    std::string circuit_code_path, emit_kind = "circuit", policy = "greedy";
    size_t rounds = 1;
    double circ_p = 0.001;
    double m_idle = 1.0, m_gate = 1.0, m_init = 1.0, m_meas = 1.0, m_corr = 0.0;
    circuit_cmd->add_option("--code", circuit_code_path, "code bundle JSON")->required();
    circuit_cmd->add_option("--rounds", rounds, "measurement rounds");
    circuit_cmd->add_option("--p", circ_p, "base fault probability per location");
    circuit_cmd->add_option("--emit", emit_kind, "circuit | detmodel")
        ->check(CLI::IsMember({"circuit", "detmodel"}));
    circuit_cmd->add_option("--schedule", policy, "gate packing policy")
        ->check(CLI::IsMember({"greedy"}));
    circuit_cmd->add_option("--idle", m_idle, "idle fault multiplier");
    circuit_cmd->add_option("--gate", m_gate, "gate fault multiplier");
    circuit_cmd->add_option("--init", m_init, "init fault multiplier");
    circuit_cmd->add_option("--meas", m_meas, "measurement fault multiplier");
    circuit_cmd->add_option("--gate-correlated", m_corr, "correlated CNOT-pair fault multiplier");
    circuit_cmd->add_option("--out", out_path, "output file (default stdout)");

    // ---- decode ----------------------------------------------------------
    auto* decode_cmd = app.add_subcommand("decode", "decode one syndrome");
    decode_cmd->set_help_flag("--help", "print help");  // frees -h for --h
    std::string h_path, syndrome_text, alg = "nms", schedule_name = "flooding";
    double norm = 0.85, prior = 0.01, clip = 30.0;
    size_t iters = 100;
    bool use_osd = false;
    decode_cmd->add_option("--h", h_path, "check matrix text file")->required();
    decode_cmd->add_option("--syndrome", syndrome_text, "syndrome bits, e.g. 0101")->required();
    decode_cmd->add_option("--alg", alg, "nms | sp")->check(CLI::IsMember({"nms", "sp"}));
    decode_cmd->add_option("--norm", norm, "min-sum normalization factor");
    decode_cmd->add_option("--iters", iters, "maximum iterations");
    decode_cmd->add_option("--p", prior, "prior error probability");
    decode_cmd->add_option("--clip", clip, "log-ratio clipping magnitude");
    decode_cmd->add_option("--schedule", schedule_name, "flooding | serial | layered")
        ->check(CLI::IsMember({"flooding", "serial", "layered"}));
    decode_cmd->add_flag("--osd0", use_osd, "order-0 OSD post-processing");

    // ---- sim -------------------------------------------------------------
    auto* sim_cmd = app.add_subcommand("sim", "Monte Carlo logical error rate");
    std::string spec_path, grid_text, csv_path;
    size_t workers = default_workers();
    bool progress = false;
    sim_cmd->add_option("--spec", spec_path, "experiment spec JSON")->required();
    sim_cmd->add_option("--p-grid", grid_text, "grid, e.g. 0.01:0.1:10log or 0.01,0.02");
    sim_cmd->add_option("--out", csv_path, "CSV output file (default stdout)");
    sim_cmd->add_option("--workers", workers, "worker threads (never affects output values)");
    sim_cmd->add_flag("--progress", progress, "progress lines on stderr");

    CLI11_PARSE(app, argc, argv);

    if (construct->parsed()) {
        CssCode code;
        if (toric->parsed()) {
            code = toric_code(L);
        } else if (surface->parsed()) {
            code = surface_code(L);
        } else if (hp->parsed()) {
            code = hypergraph_product(BitMatrix::from_text(read_file(ha_path)),
                                      BitMatrix::from_text(read_file(hb_path)));
        } else if (lp->parsed()) {
            code = lifted_product(base_matrix_from_text(read_file(ba_path)),
                                  base_matrix_from_text(read_file(bb_path)));
        } else if (tb->parsed()) {
            code = two_block(BitMatrix::from_text(read_file(a_path)),
                             BitMatrix::from_text(read_file(b_path)));
        } else if (bb->parsed()) {
            code = bivariate_bicycle(bb_ell, bb_m, parse_monomials(bb_a), parse_monomials(bb_b),
                                     bb_relaxed);
        } else {
            GroupSpec group = group_from_flag(group_flag);
            code = two_block_group_algebra(group, gens_from_flag(group, sa_flag),
                                           gens_from_flag(group, sb_flag));
        }
        json bundle;
        if (with_logicals && code.k > 0) {
            LogicalBasis basis = logical_basis(code);
            bundle = code_to_json(code, &basis);
        } else {
            bundle = code_to_json(code);
        }
        emit(out_path, bundle.dump(2) + "\n");
        return 0;
    }

    if (params_cmd->parsed()) {
        CssCode code = code_from_json(json::parse(read_file(code_path)));
        json report{{"n", code.n}, {"k", code.k}, {"meta", code.meta}};
        if (exhaustive || wmax_opt->count() > 0) {
            CodeParams p = distance_exhaustive(code, wmax);
            if (p.d_x) report["d_x"] = *p.d_x;
            if (p.d_z) report["d_z"] = *p.d_z;
            if (p.d()) report["d"] = *p.d();
            report["method"] = p.method;
        }
        if (trials_opt->count() > 0) {
            CodeParams p = distance_probe(code, probe_trials, probe_seed);
            if (p.d_upper) report["d_upper"] = *p.d_upper;
            report["method"] = p.method;
        }
        std::cout << report.dump(2) << '\n';
        return 0;
    }

    if (circuit_cmd->parsed()) {
        CssCode code = code_from_json(json::parse(read_file(circuit_code_path)));
        SmCircuit circ = build_sm_circuit(code);
        if (emit_kind == "circuit") {
            emit(out_path, circuit_to_text(circ));
        } else {
            FaultMaps maps = derive_fault_maps(circ);
            CircuitPriors pri;
            pri.p = circ_p;
            pri.idle = m_idle;
            pri.gate = m_gate;
            pri.init = m_init;
            pri.meas = m_meas;
            pri.gate_correlated = m_corr;
            DetectorModel model = build_detector_model(circ, maps, rounds, pri, code);
            emit(out_path, detector_model_to_json(model).dump(2) + "\n");
        }
        return 0;
    }

    if (decode_cmd->parsed()) {
        BitMatrix h = BitMatrix::from_text(read_file(h_path));
        BitVector s = BitVector::from_string(syndrome_text);
        DecoderConfig cfg;
        cfg.algorithm = alg == "nms" ? Algorithm::NormalizedMinSum : Algorithm::SumProduct;
        cfg.normalization = norm;
        cfg.max_iters = iters;
        cfg.prior_p = prior;
        cfg.clip = clip;
        cfg.osd0 = use_osd;
        if (schedule_name == "serial") {
            cfg.schedule = Schedule::serial();
        } else if (schedule_name == "layered") {
            cfg.schedule = Schedule::layered(row_coloring_layers(h));
        }
        DecodeResult r = decode_syndrome(h, s, cfg);
        json out{{"estimate", r.estimate.to_string()},
                 {"converged", r.converged},
                 {"iterations", r.iterations},
                 {"used_osd", r.used_osd}};
        std::cout << out.dump(2) << '\n';
        return 0;
    }

    if (sim_cmd->parsed()) {
        ExperimentSpec spec = experiment_from_json(json::parse(read_file(spec_path)));
        std::vector<double> grid =
            grid_text.empty() ? std::vector<double>{spec.noise.p} : parse_p_grid(grid_text);
        std::vector<SummaryRow> rows = sweep(spec, grid, workers, progress);
        emit(csv_path, to_csv(rows));
        return 0;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
