#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qldpc/code.hpp"
#include "qldpc/gf2.hpp"
#include "qldpc/rng.hpp"

namespace qldpc {

// --- Elementary channels ------------------------------------------------------

enum class Pauli { I, X, Y, Z };

// Depolarizing draw: identity w.p. 1-p, else X/Y/Z uniformly. One generator
// call per qubit so parallel tiers consume identical streams.
inline Pauli sample_pauli(double p, Rng& rng) {
    double u = rng.uniform();
    if (u >= p) return Pauli::I;
    if (u < p / 3) return Pauli::X;
    if (u < 2 * p / 3) return Pauli::Y;
    return Pauli::Z;
}

// i.i.d. depolarizing data errors; Y sets both components.
inline std::pair<BitVector, BitVector> sample_depolarizing(size_t n, double p, Rng& rng) {
    if (p < 0.0 || p > 1.0) throw DomainError("depolarizing probability out of [0,1]");
    BitVector ex(n), ez(n);
    for (size_t i = 0; i < n; ++i) {
        Pauli e = sample_pauli(p, rng);
        if (e == Pauli::X || e == Pauli::Y) ex.set(i, true);
        if (e == Pauli::Z || e == Pauli::Y) ez.set(i, true);
    }
    return {std::move(ex), std::move(ez)};
}

// CNOT conjugation in the symplectic representation: the X component copies
// control -> target, the Z component copies target -> control.
struct PauliComponents {
    bool x = false;
    bool z = false;
};
inline std::pair<PauliComponents, PauliComponents> propagate_through_cnot(PauliComponents control,
                                                                          PauliComponents target) {
    PauliComponents control_out{control.x, control.z != target.z};
    PauliComponents target_out{control.x != target.x, target.z};
    return {control_out, target_out};
}

// --- Syndrome-measurement circuit IR -------------------------------------------

enum class Basis { X, Z };

struct Gate {
    enum class Kind { Cnot, Init, Measure } kind;
    size_t q1 = 0;  // Cnot control, or the ancilla for Init/Measure
    size_t q2 = 0;  // Cnot target
    Basis basis = Basis::Z;

    static Gate cnot(size_t control, size_t target) {
        return Gate{Kind::Cnot, control, target, Basis::Z};
    }
    static Gate init(size_t anc, Basis b) { return Gate{Kind::Init, anc, 0, b}; }
    static Gate measure(size_t anc, Basis b) { return Gate{Kind::Measure, anc, 0, b}; }
};

// Potential fault site: both Pauli components on `qubit` just before CNOT
// timestep `boundary` (1-based); boundary T+1 sits between the last CNOT
// timestep and measurement. Ancilla faults at boundary 1 play the role of
// initialization noise, at boundary T+1 of measurement flips.
struct FaultLocation {
    size_t qubit = 0;
    size_t boundary = 0;
};

// Qubit layout: data 0..n-1, then one ancilla per X check, then one per Z check.
struct SmCircuit {
    size_t n_data = 0;
    size_t n_anc_x = 0;
    size_t n_anc_z = 0;
    size_t cnot_timesteps = 0;
    std::vector<std::vector<Gate>> timesteps;  // [0] inits, [1..T] CNOTs, [T+1] measurements
    std::vector<FaultLocation> fault_locations;

    size_t num_qubits() const { return n_data + n_anc_x + n_anc_z; }
    bool is_data(size_t q) const { return q < n_data; }
    bool is_x_ancilla(size_t q) const { return q >= n_data && q < n_data + n_anc_x; }
    bool is_z_ancilla(size_t q) const { return q >= n_data + n_anc_x; }
    size_t x_ancilla(size_t check_row) const { return n_data + check_row; }
    size_t z_ancilla(size_t check_row) const { return n_data + n_anc_x + check_row; }

    size_t boundaries() const { return cnot_timesteps + 1; }
    size_t location_index(size_t qubit, size_t boundary) const {
        return qubit * boundaries() + (boundary - 1);
    }
};

enum class SchedulePolicy { Greedy };

// One ancilla per check row. X ancillas are initialized in |+>, control CNOTs
// onto their H_X support and are measured in the X basis; Z ancillas are
// initialized in |0>, targeted by CNOTs from their H_Z support and measured in
// the Z basis. The greedy policy walks checks in row order, X checks before Z
// checks, and places each check's CNOTs in ascending support order at the
// earliest timestep after the check's previous gate where the data qubit is
// free. Gates inside a timestep act on pairwise-disjoint qubits.
inline SmCircuit build_sm_circuit(const CssCode& code,
                                  SchedulePolicy policy = SchedulePolicy::Greedy) {
    (void)policy;
    SmCircuit c;
    c.n_data = code.n;
    c.n_anc_x = code.hx.rows();
    c.n_anc_z = code.hz.rows();

    std::vector<std::vector<Gate>> cnot_steps;
    std::vector<std::vector<bool>> busy;  // [timestep][qubit]
    auto ensure_step = [&](size_t t) {
        while (cnot_steps.size() <= t) {
            cnot_steps.emplace_back();
            busy.emplace_back(c.num_qubits(), false);
        }
    };
    // earliest allowed timestep per ancilla: previous gate + 1
    std::vector<size_t> next_allowed(c.num_qubits(), 0);
    auto schedule_gate = [&](size_t anc, size_t data, bool anc_controls) {
        size_t t = next_allowed[anc];
        while (true) {
            ensure_step(t);
            if (!busy[t][data] && !busy[t][anc]) break;
            ++t;
        }
        busy[t][anc] = busy[t][data] = true;
        next_allowed[anc] = t + 1;
        cnot_steps[t].push_back(anc_controls ? Gate::cnot(anc, data) : Gate::cnot(data, anc));
    };

    for (size_t i = 0; i < code.hx.rows(); ++i)
        for (size_t j = 0; j < code.n; ++j)
            if (code.hx.get(i, j)) schedule_gate(c.x_ancilla(i), j, /*anc_controls=*/true);
    for (size_t i = 0; i < code.hz.rows(); ++i)
        for (size_t j = 0; j < code.n; ++j)
            if (code.hz.get(i, j)) schedule_gate(c.z_ancilla(i), j, /*anc_controls=*/false);

    c.cnot_timesteps = cnot_steps.size();
    c.timesteps.clear();
    std::vector<Gate> inits;
    for (size_t i = 0; i < c.n_anc_x; ++i) inits.push_back(Gate::init(c.x_ancilla(i), Basis::X));
    for (size_t i = 0; i < c.n_anc_z; ++i) inits.push_back(Gate::init(c.z_ancilla(i), Basis::Z));
    c.timesteps.push_back(std::move(inits));
    for (auto& step : cnot_steps) c.timesteps.push_back(std::move(step));
    std::vector<Gate> measures;
    for (size_t i = 0; i < c.n_anc_x; ++i)
        measures.push_back(Gate::measure(c.x_ancilla(i), Basis::X));
    for (size_t i = 0; i < c.n_anc_z; ++i)
        measures.push_back(Gate::measure(c.z_ancilla(i), Basis::Z));
    c.timesteps.push_back(std::move(measures));

    for (size_t q = 0; q < c.num_qubits(); ++q)
        for (size_t b = 1; b <= c.boundaries(); ++b) c.fault_locations.push_back({q, b});
    return c;
}

// --- Fault maps ------------------------------------------------------------------

// Exact linear maps from per-location faults to end-of-round data errors and
// measured syndrome flips. Column ell describes the unit fault at
// fault_locations[ell]; the X and Z components propagate independently.
//   e_x = f_red  . fdx^T     stilde_z = f_red  . fsx^T   (Z-check outcomes)
//   e_z = f_blue . fdz^T     stilde_x = f_blue . fsz^T   (X-check outcomes)
// Subscripts name the error side the map feeds: the X-error side is observed
// through Z checks and vice versa.
struct FaultMaps {
    BitMatrix fdx, fdz;  // n_data x L
    BitMatrix fsx;       // m_z x L, red faults -> Z-check flips
    BitMatrix fsz;       // m_x x L, blue faults -> X-check flips
    std::vector<FaultLocation> locations;
    size_t n_data = 0, m_x = 0, m_z = 0;

    struct CnotRef {
        size_t timestep = 0;  // 1-based CNOT timestep
        size_t control = 0;
        size_t target = 0;
    };
    std::vector<CnotRef> cnots;
    size_t boundaries = 0;
    std::vector<std::vector<bool>> gate_touched;  // [boundary-1][qubit]: CNOT at step boundary-1
};

inline FaultMaps derive_fault_maps(const SmCircuit& c) {
    size_t Q = c.num_qubits();
    size_t L = c.fault_locations.size();
    // symbolic propagation: per qubit, the set of fault indices currently on it
    std::vector<BitVector> red(Q, BitVector(L)), blue(Q, BitVector(L));

    FaultMaps maps;
    maps.n_data = c.n_data;
    maps.m_x = c.n_anc_x;
    maps.m_z = c.n_anc_z;
    maps.locations = c.fault_locations;
    maps.boundaries = c.boundaries();
    maps.gate_touched.assign(c.cnot_timesteps, std::vector<bool>(Q, false));

    for (size_t b = 1; b <= c.boundaries(); ++b) {
        for (size_t q = 0; q < Q; ++q) {
            size_t ell = c.location_index(q, b);
            red[q].flip(ell);
            blue[q].flip(ell);
        }
        if (b <= c.cnot_timesteps) {
            for (const Gate& g : c.timesteps[b]) {
                red[g.q2] ^= red[g.q1];
                blue[g.q1] ^= blue[g.q2];
                maps.cnots.push_back({b, g.q1, g.q2});
                maps.gate_touched[b - 1][g.q1] = true;
                maps.gate_touched[b - 1][g.q2] = true;
            }
        }
    }

    maps.fdx = BitMatrix(c.n_data, L);
    maps.fdz = BitMatrix(c.n_data, L);
    for (size_t d = 0; d < c.n_data; ++d) {
        maps.fdx.set_row(d, red[d]);
        maps.fdz.set_row(d, blue[d]);
    }
    // An X-basis measurement is flipped by the Z component on the ancilla,
    // a Z-basis measurement by the X component.
    maps.fsx = BitMatrix(c.n_anc_z, L);
    maps.fsz = BitMatrix(c.n_anc_x, L);
    for (size_t i = 0; i < c.n_anc_z; ++i) maps.fsx.set_row(i, red[c.z_ancilla(i)]);
    for (size_t i = 0; i < c.n_anc_x; ++i) maps.fsz.set_row(i, blue[c.x_ancilla(i)]);
    return maps;
}

// --- Fault priors ----------------------------------------------------------------

enum class FaultKind { Idle, Gate, Init, Measure };

// Per-class multipliers on the base depolarizing strength p; all default
// to 1 (uniform locations). `gate_correlated` > 0
// adds one two-qubit fault class per CNOT whose columns are the XOR of the
// two post-gate single-fault columns. `data_first_boundary_only` keeps only
// pre-round data-qubit faults (the code-capacity degeneration).
struct CircuitPriors {
    double p = 0.0;
    double idle = 1.0;
    double gate = 1.0;
    double init = 1.0;
    double meas = 1.0;
    double gate_correlated = 0.0;
    bool data_first_boundary_only = false;
};

inline FaultKind fault_kind(const SmCircuit& c, const FaultMaps& maps, const FaultLocation& loc) {
    if (!c.is_data(loc.qubit)) {
        if (loc.boundary == 1) return FaultKind::Init;
        if (loc.boundary == c.boundaries()) return FaultKind::Measure;
    }
    if (loc.boundary >= 2 && maps.gate_touched[loc.boundary - 2][loc.qubit])
        return FaultKind::Gate;
    return FaultKind::Idle;
}

inline double location_prior(const SmCircuit& c, const FaultMaps& maps, const FaultLocation& loc,
                             const CircuitPriors& pri) {
    if (pri.data_first_boundary_only)
        return (c.is_data(loc.qubit) && loc.boundary == 1) ? pri.p : 0.0;
    switch (fault_kind(c, maps, loc)) {
        case FaultKind::Init:
            return pri.p * pri.init;
        case FaultKind::Measure:
            return pri.p * pri.meas;
        case FaultKind::Gate:
            return pri.p * pri.gate;
        case FaultKind::Idle:
            return pri.p * pri.idle;
    }
    return 0.0;
}

// --- Detector model ----------------------------------------------------------------

// XOR-combination of independent flip probabilities.
inline double combine_priors(double p1, double p2) { return p1 * (1 - p2) + p2 * (1 - p1); }

struct ColumnOrigin {
    enum class Kind { Location, CnotPair, SyndromeFlip } kind = Kind::Location;
    size_t round = 0;  // 1-based
    size_t index = 0;  // location index, cnot index, or check row
};

// Round-differenced decoding model for one error side. Detector rows are the
// first-round syndrome, then XORs of consecutive rounds, then (when closure
// is on) a final comparison against the noiseless syndrome of the accumulated
// data error. Columns are merged fault classes.
struct DetectorSide {
    BitMatrix h_det;          // detectors x classes
    std::vector<double> priors;
    BitMatrix fault_to_data;  // n_data x classes
    std::vector<std::vector<ColumnOrigin>> provenance;
    size_t rounds = 0;
    bool closure = true;
    size_t checks_per_round = 0;
};

namespace detail {

struct PendingColumn {
    BitVector det;
    BitVector data;
    double prior = 0.0;
    ColumnOrigin origin;
};

inline DetectorSide assemble_detector_side(const BitMatrix& h_side,
                                           const std::vector<BitVector>& syn_cols,
                                           const std::vector<BitVector>& data_cols,
                                           const std::vector<double>& col_priors,
                                           const std::vector<ColumnOrigin>& col_origins,
                                           size_t rounds, bool closure) {
    if (rounds < 1) throw DomainError("detector model needs rounds >= 1");
    size_t m = h_side.rows();
    size_t det_rows = (rounds + (closure ? 1 : 0)) * m;
    std::vector<PendingColumn> merged;

    for (size_t r = 1; r <= rounds; ++r) {
        for (size_t j = 0; j < syn_cols.size(); ++j) {
            if (col_priors[j] <= 0.0) continue;
            PendingColumn col{BitVector(det_rows), data_cols[j], col_priors[j], col_origins[j]};
            col.origin.round = r;
            const BitVector& s = syn_cols[j];
            BitVector h_data = h_side.mul_vec(data_cols[j]);
            // block r: this round's syndrome flip
            for (size_t i = 0; i < m; ++i)
                if (s.get(i)) col.det.flip((r - 1) * m + i);
            // block r+1 (or closure): persisting data error cancels the flip
            if (r < rounds || closure) {
                BitVector next = s ^ h_data;
                for (size_t i = 0; i < m; ++i)
                    if (next.get(i)) col.det.flip(r * m + i);
            }
            if (col.det.is_zero() && col.data.is_zero()) continue;
            merged.push_back(std::move(col));
        }
    }

    // merge columns with identical detector and data signatures
    std::vector<PendingColumn> unique_cols;
    std::vector<std::vector<ColumnOrigin>> provenance;
    for (auto& col : merged) {
        bool found = false;
        for (size_t u = 0; u < unique_cols.size(); ++u) {
            if (unique_cols[u].det == col.det && unique_cols[u].data == col.data) {
                unique_cols[u].prior = combine_priors(unique_cols[u].prior, col.prior);
                provenance[u].push_back(col.origin);
                found = true;
                break;
            }
        }
        if (!found) {
            unique_cols.push_back(col);
            provenance.push_back({col.origin});
        }
    }

    DetectorSide side;
    side.rounds = rounds;
    side.closure = closure;
    side.checks_per_round = m;
    side.h_det = BitMatrix(det_rows, unique_cols.size());
    side.fault_to_data = BitMatrix(h_side.cols(), unique_cols.size());
    side.priors.reserve(unique_cols.size());
    for (size_t u = 0; u < unique_cols.size(); ++u) {
        for (size_t i = 0; i < det_rows; ++i)
            if (unique_cols[u].det.get(i)) side.h_det.set(i, u, true);
        for (size_t i = 0; i < h_side.cols(); ++i)
            if (unique_cols[u].data.get(i)) side.fault_to_data.set(i, u, true);
        side.priors.push_back(unique_cols[u].prior);
    }
    side.provenance = std::move(provenance);
    return side;
}

}  // namespace detail

struct DetectorModel {
    size_t rounds = 1;
    bool closure = true;
    DetectorSide x_side;  // decodes X data errors from Z-check detectors
    DetectorSide z_side;  // decodes Z data errors from X-check detectors
};

// Merged-class detector model over R rounds of the measurement circuit.
// Per-column priors are the per-side marginal flip probabilities of the
// depolarizing location channels (X or Y: 2p/3), XOR-combined when columns
// merge. Priors must stay in (0, 1/2].
inline DetectorModel build_detector_model(const SmCircuit& circuit, const FaultMaps& maps,
                                          size_t rounds, const CircuitPriors& priors,
                                          const CssCode& code, bool closure = true) {
    if (rounds < 1) throw DomainError("detector model needs rounds >= 1");
    if (priors.p < 0.0 || priors.p > 0.75)
        throw DomainError("circuit depolarizing strength must lie in [0, 0.75]");

    size_t L = maps.locations.size();
    std::vector<double> loc_prior(L);
    for (size_t ell = 0; ell < L; ++ell)
        loc_prior[ell] = location_prior(circuit, maps, maps.locations[ell], priors);

    auto side_inputs = [&](const BitMatrix& fs, const BitMatrix& fd) {
        std::vector<BitVector> syn_cols, data_cols;
        std::vector<double> cps;
        std::vector<ColumnOrigin> origins;
        BitMatrix fst = fs.transpose();
        BitMatrix fdt = fd.transpose();
        for (size_t ell = 0; ell < L; ++ell) {
            syn_cols.push_back(fst.row(ell));
            data_cols.push_back(fdt.row(ell));
            cps.push_back(2.0 * loc_prior[ell] / 3.0);
            origins.push_back({ColumnOrigin::Kind::Location, 0, ell});
        }
        if (priors.gate_correlated > 0.0 && !priors.data_first_boundary_only) {
            for (size_t g = 0; g < maps.cnots.size(); ++g) {
                const auto& ref = maps.cnots[g];
                size_t boundary = ref.timestep + 1;  // fault site right after the gate
                size_t ell_c = ref.control * maps.boundaries + (boundary - 1);
                size_t ell_t = ref.target * maps.boundaries + (boundary - 1);
                syn_cols.push_back(fst.row(ell_c) ^ fst.row(ell_t));
                data_cols.push_back(fdt.row(ell_c) ^ fdt.row(ell_t));
                cps.push_back(2.0 * priors.p * priors.gate_correlated / 3.0);
                origins.push_back({ColumnOrigin::Kind::CnotPair, 0, g});
            }
        }
        return std::make_tuple(std::move(syn_cols), std::move(data_cols), std::move(cps),
                               std::move(origins));
    };

    DetectorModel model;
    model.rounds = rounds;
    model.closure = closure;
    {
        auto [syn, data, cps, org] = side_inputs(maps.fsx, maps.fdx);
        model.x_side = detail::assemble_detector_side(code.hz, syn, data, cps, org, rounds,
                                                      closure);
    }
    {
        auto [syn, data, cps, org] = side_inputs(maps.fsz, maps.fdz);
        model.z_side = detail::assemble_detector_side(code.hx, syn, data, cps, org, rounds,
                                                      closure);
    }
    return model;
}

// Phenomenological model expressed in the same detector form: per round, each
// data qubit carries a depolarizing location (syndrome column = check matrix
// column, data column = unit) and each check carries a Bernoulli(q_syn)
// measurement-flip location (syndrome column = unit, no data effect).
inline DetectorModel phenomenological_detector_model(const CssCode& code, double p, double q_syn,
                                                     size_t rounds, bool closure = true) {
    if (p < 0.0 || p > 0.75) throw DomainError("depolarizing strength must lie in [0, 0.75]");
    if (q_syn < 0.0 || q_syn > 0.5) throw DomainError("syndrome flip probability must lie in [0, 0.5]");
    auto side = [&](const BitMatrix& h) {
        std::vector<BitVector> syn_cols, data_cols;
        std::vector<double> cps;
        std::vector<ColumnOrigin> origins;
        BitMatrix ht = h.transpose();
        for (size_t j = 0; j < code.n; ++j) {
            syn_cols.push_back(ht.row(j));
            BitVector unit(code.n);
            unit.set(j, true);
            data_cols.push_back(std::move(unit));
            cps.push_back(2.0 * p / 3.0);
            origins.push_back({ColumnOrigin::Kind::Location, 0, j});
        }
        for (size_t i = 0; i < h.rows(); ++i) {
            BitVector unit(h.rows());
            unit.set(i, true);
            syn_cols.push_back(std::move(unit));
            data_cols.push_back(BitVector(code.n));
            cps.push_back(q_syn);
            origins.push_back({ColumnOrigin::Kind::SyndromeFlip, 0, i});
        }
        return detail::assemble_detector_side(h, syn_cols, data_cols, cps, origins, rounds,
                                              closure);
    };
    DetectorModel model;
    model.rounds = rounds;
    model.closure = closure;
    model.x_side = side(code.hz);
    model.z_side = side(code.hx);
    return model;
}

// --- Samplers ----------------------------------------------------------------------

struct NoiseSample {
    BitVector ex, ez;                    // accumulated data errors at the end
    std::vector<BitVector> syn_z_meas;   // per round, measured Z-check outcomes
    std::vector<BitVector> syn_x_meas;   // per round, measured X-check outcomes
    std::vector<BitVector> fault_red;    // circuit tier: per round, per-location X faults
    std::vector<BitVector> fault_blue;   // circuit tier: per round, per-location Z faults
};

// Detector observations for one side: measured-round differences plus the
// closure comparison against the true syndrome of the accumulated error.
inline BitVector assemble_detectors(const std::vector<BitVector>& measured,
                                    const BitMatrix& h_side, const BitVector& e_final,
                                    bool closure) {
    size_t rounds = measured.size();
    size_t m = h_side.rows();
    BitVector det((rounds + (closure ? 1 : 0)) * m);
    for (size_t r = 0; r < rounds; ++r) {
        BitVector diff = measured[r];
        if (r > 0) diff ^= measured[r - 1];
        for (size_t i = 0; i < m; ++i)
            if (diff.get(i)) det.set(r * m + i, true);
    }
    if (closure) {
        BitVector diff = measured[rounds - 1] ^ h_side.mul_vec(e_final);
        for (size_t i = 0; i < m; ++i)
            if (diff.get(i)) det.set(rounds * m + i, true);
    }
    return det;
}

// Fresh depolarizing data errors accumulate each round; each round's measured
// syndrome is the true accumulated syndrome XOR i.i.d. Bernoulli(q_syn) flips.
// Draw order per round: data qubits ascending, then Z-check flips, then
// X-check flips; zero-probability channels consume no generator values.
inline NoiseSample sample_phenomenological(const CssCode& code, double p, double q_syn,
                                           size_t rounds, Rng& rng,
                                           bool noiseless_final_round = false) {
    if (p < 0.0 || p > 1.0) throw DomainError("depolarizing probability out of [0,1]");
    if (q_syn < 0.0 || q_syn > 1.0) throw DomainError("syndrome flip probability out of [0,1]");
    if (rounds < 1) throw DomainError("phenomenological sampling needs rounds >= 1");
    NoiseSample s;
    s.ex = BitVector(code.n);
    s.ez = BitVector(code.n);
    for (size_t r = 1; r <= rounds; ++r) {
        auto [fx, fz] = sample_depolarizing(code.n, p, rng);
        s.ex ^= fx;
        s.ez ^= fz;
        BitVector sz = code.hz.mul_vec(s.ex);
        BitVector sx = code.hx.mul_vec(s.ez);
        bool noisy = q_syn > 0.0 && !(noiseless_final_round && r == rounds);
        if (noisy) {
            for (size_t i = 0; i < sz.len(); ++i)
                if (rng.uniform() < q_syn) sz.flip(i);
            for (size_t i = 0; i < sx.len(); ++i)
                if (rng.uniform() < q_syn) sx.flip(i);
        }
        s.syn_z_meas.push_back(std::move(sz));
        s.syn_x_meas.push_back(std::move(sx));
    }
    return s;
}

// Circuit-level sample: every fault location draws a depolarizing Pauli with
// its class prior (Y firing both components, which keeps the X/Z sides
// correlated); measured outcomes follow from the exact fault maps plus the
// syndrome of errors accumulated in earlier rounds.
inline NoiseSample sample_circuit_level(const SmCircuit& circuit, const FaultMaps& maps,
                                        const CssCode& code, size_t rounds,
                                        const CircuitPriors& priors, Rng& rng) {
    if (rounds < 1) throw DomainError("circuit sampling needs rounds >= 1");
    size_t L = maps.locations.size();
    std::vector<double> loc_prior(L);
    for (size_t ell = 0; ell < L; ++ell)
        loc_prior[ell] = location_prior(circuit, maps, maps.locations[ell], priors);

    NoiseSample s;
    s.ex = BitVector(code.n);
    s.ez = BitVector(code.n);
    for (size_t r = 1; r <= rounds; ++r) {
        BitVector f_red(L), f_blue(L);
        for (size_t ell = 0; ell < L; ++ell) {
            if (loc_prior[ell] <= 0.0) continue;
            Pauli e = sample_pauli(loc_prior[ell], rng);
            if (e == Pauli::X || e == Pauli::Y) f_red.set(ell, true);
            if (e == Pauli::Z || e == Pauli::Y) f_blue.set(ell, true);
        }
        if (priors.gate_correlated > 0.0 && !priors.data_first_boundary_only) {
            double pg = priors.p * priors.gate_correlated;
            for (const auto& ref : maps.cnots) {
                size_t boundary = ref.timestep + 1;
                if (boundary > maps.boundaries) continue;
                size_t ell_c = ref.control * maps.boundaries + (boundary - 1);
                size_t ell_t = ref.target * maps.boundaries + (boundary - 1);
                Pauli e = sample_pauli(pg, rng);
                if (e == Pauli::X || e == Pauli::Y) {
                    f_red.flip(ell_c);
                    f_red.flip(ell_t);
                }
                if (e == Pauli::Z || e == Pauli::Y) {
                    f_blue.flip(ell_c);
                    f_blue.flip(ell_t);
                }
            }
        }
        BitVector sz = code.hz.mul_vec(s.ex) ^ maps.fsx.mul_vec(f_red);
        BitVector sx = code.hx.mul_vec(s.ez) ^ maps.fsz.mul_vec(f_blue);
        s.ex ^= maps.fdx.mul_vec(f_red);
        s.ez ^= maps.fdz.mul_vec(f_blue);
        s.syn_z_meas.push_back(std::move(sz));
        s.syn_x_meas.push_back(std::move(sx));
        s.fault_red.push_back(std::move(f_red));
        s.fault_blue.push_back(std::move(f_blue));
    }
    return s;
}

}  // namespace qldpc
