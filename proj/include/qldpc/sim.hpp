#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "qldpc/code.hpp"
#include "qldpc/decode.hpp"
#include "qldpc/noise.hpp"

namespace qldpc {

enum class NoiseTier { CodeCapacity, Phenomenological, CircuitLevel };

enum class ScheduleSpec { Flooding, Serial, LayeredAB, LayeredRC };

struct NoiseSpec {
    NoiseTier tier = NoiseTier::CodeCapacity;
    double p = 0.0;
    double q_syn = 0.0;
    size_t rounds = 1;
    bool closure = true;
    // circuit tier only
    double idle = 1.0, gate = 1.0, init = 1.0, meas = 1.0, gate_correlated = 0.0;
    bool data_first_boundary_only = false;

    CircuitPriors circuit_priors(double point_p) const {
        CircuitPriors c;
        c.p = point_p;
        c.idle = idle;
        c.gate = gate;
        c.init = init;
        c.meas = meas;
        c.gate_correlated = gate_correlated;
        c.data_first_boundary_only = data_first_boundary_only;
        return c;
    }
};

// Default: stop at 100 failures (or the trial cap) so statistical quality is
// comparable across sweep points; FixedTrials runs the budget exactly.
struct StopRule {
    enum class Kind { FixedTrials, TargetFailures } kind = Kind::TargetFailures;
    size_t target_failures = 100;
};

struct ExperimentSpec {
    CssCode code;
    NoiseSpec noise;
    Algorithm algorithm = Algorithm::NormalizedMinSum;
    double normalization = 1.0;
    ScheduleSpec schedule = ScheduleSpec::Flooding;
    size_t max_iters = 100;
    bool osd0 = false;
    double clip = 30.0;
    size_t trials = 1000;  // fixed count, or cap for the target-failures rule
    uint64_t seed = 0;
    StopRule stop;
};

struct TrialRecord {
    Residual x_outcome = Residual::Stabilizer;
    Residual z_outcome = Residual::Stabilizer;
    size_t iterations = 0;  // summed over both side decodes
    bool used_osd = false;

    bool failed() const {
        return x_outcome != Residual::Stabilizer || z_outcome != Residual::Stabilizer;
    }
};

struct SummaryRow {
    double p = 0.0;
    size_t trials = 0;
    size_t failures = 0;
    double ler = 0.0;
    double ler_lo = 0.0;
    double ler_hi = 0.0;
    double mean_iters = 0.0;
    double conv_rate = 0.0;
};

// Wilson score interval at 95% confidence.
inline std::pair<double, double> wilson_interval(size_t failures, size_t trials) {
    if (trials == 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    double n = static_cast<double>(trials);
    double f = static_cast<double>(failures);
    double z2 = z * z;
    double center = (f + z2 / 2.0) / (n + z2);
    double half = z * std::sqrt(f * (n - f) / n + z2 / 4.0) / (n + z2);
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace detail {

struct PointAggregate {
    size_t trials = 0;
    size_t failures = 0;
    size_t iterations = 0;
    size_t decodes = 0;
    size_t converged = 0;

    void add(const TrialRecord& rec, size_t decodes_per_trial, size_t converged_count) {
        ++trials;
        if (rec.failed()) ++failures;
        iterations += rec.iterations;
        decodes += decodes_per_trial;
        converged += converged_count;
    }
    void merge(const PointAggregate& o) {
        trials += o.trials;
        failures += o.failures;
        iterations += o.iterations;
        decodes += o.decodes;
        converged += o.converged;
    }
};

}  // namespace detail

// Immutable per-point context plus per-worker mutable decoders. Trials are
// fully determined by (point_seed, trial_index); aggregation is a commutative
// fold over a chunk prefix, so the worker count can never change results.
class PointRunner {
  public:
    PointRunner(const ExperimentSpec& spec, double p) : spec_(spec), p_(p) {
        const CssCode& code = spec_.code;
        if (code.k == 0) throw EmptyLogicalSpace("experiments require a code with k >= 1");
        if (spec_.noise.tier == NoiseTier::CodeCapacity) {
            dec_matrix_x_ = code.hz;
            dec_matrix_z_ = code.hx;
            // X-or-Y marginal of depolarizing noise; p = 0 keeps a tiny prior
            // so the decoder constructs (every syndrome is zero then anyway)
            double prior = p_ > 0.0 ? 2.0 * p_ / 3.0 : 1e-12;
            priors_x_.assign(code.n, prior);
            priors_z_.assign(code.n, prior);
        } else {
            if (spec_.noise.tier == NoiseTier::Phenomenological) {
                model_ = phenomenological_detector_model(code, p_, spec_.noise.q_syn,
                                                         spec_.noise.rounds, spec_.noise.closure);
            } else {
                circuit_ = build_sm_circuit(code);
                maps_ = derive_fault_maps(circuit_);
                model_ = build_detector_model(circuit_, maps_, spec_.noise.rounds,
                                              spec_.noise.circuit_priors(p_), code,
                                              spec_.noise.closure);
            }
            dec_matrix_x_ = model_.x_side.h_det;
            dec_matrix_z_ = model_.z_side.h_det;
            priors_x_ = model_.x_side.priors;
            priors_z_ = model_.z_side.priors;
        }
        config_x_ = make_config(ErrorSide::XError, dec_matrix_x_, priors_x_);
        config_z_ = make_config(ErrorSide::ZError, dec_matrix_z_, priors_z_);
    }

    struct WorkerState {
        std::unique_ptr<Decoder> dec_x;
        std::unique_ptr<Decoder> dec_z;
    };

    WorkerState make_worker() const {
        return {std::make_unique<Decoder>(dec_matrix_x_, config_x_),
                std::make_unique<Decoder>(dec_matrix_z_, config_z_)};
    }

    TrialRecord run_trial(WorkerState& worker, uint64_t point_seed, size_t trial_index,
                          size_t* converged_count = nullptr) const {
        Rng rng = Rng::split(point_seed, trial_index);
        const CssCode& code = spec_.code;
        TrialRecord rec;
        BitVector ex, ez, est_x, est_z;
        DecodeResult rx, rz;
        if (spec_.noise.tier == NoiseTier::CodeCapacity) {
            auto [sample_x, sample_z] = sample_depolarizing(code.n, p_, rng);
            ex = std::move(sample_x);
            ez = std::move(sample_z);
            rx = worker.dec_x->decode(code.hz.mul_vec(ex));
            rz = worker.dec_z->decode(code.hx.mul_vec(ez));
            est_x = rx.estimate;
            est_z = rz.estimate;
        } else {
            NoiseSample s;
            if (spec_.noise.tier == NoiseTier::Phenomenological) {
                s = sample_phenomenological(code, p_, spec_.noise.q_syn, spec_.noise.rounds, rng);
            } else {
                s = sample_circuit_level(circuit_, maps_, code, spec_.noise.rounds,
                                         spec_.noise.circuit_priors(p_), rng);
            }
            ex = std::move(s.ex);
            ez = std::move(s.ez);
            BitVector det_x =
                assemble_detectors(s.syn_z_meas, code.hz, ex, spec_.noise.closure);
            BitVector det_z =
                assemble_detectors(s.syn_x_meas, code.hx, ez, spec_.noise.closure);
            rx = worker.dec_x->decode(det_x);
            rz = worker.dec_z->decode(det_z);
            est_x = model_.x_side.fault_to_data.mul_vec(rx.estimate);
            est_z = model_.z_side.fault_to_data.mul_vec(rz.estimate);
        }
        rec.x_outcome = classify_residual(ex, est_x, code, ErrorSide::XError);
        rec.z_outcome = classify_residual(ez, est_z, code, ErrorSide::ZError);
        rec.iterations = rx.iterations + rz.iterations;
        rec.used_osd = rx.used_osd || rz.used_osd;
        if (converged_count) *converged_count = (rx.converged ? 1 : 0) + (rz.converged ? 1 : 0);
        return rec;
    }

    double p() const { return p_; }
    const ExperimentSpec& spec() const { return spec_; }

  private:
    DecoderConfig make_config(ErrorSide side, const BitMatrix& h,
                              const std::vector<double>& priors) const {
        DecoderConfig cfg;
        cfg.algorithm = spec_.algorithm;
        cfg.normalization = spec_.normalization;
        cfg.max_iters = spec_.max_iters;
        cfg.osd0 = spec_.osd0;
        cfg.clip = spec_.clip;
        cfg.priors = priors;
        switch (spec_.schedule) {
            case ScheduleSpec::Flooding:
                cfg.schedule = Schedule::flooding();
                break;
            case ScheduleSpec::Serial:
                cfg.schedule = Schedule::serial();
                break;
            case ScheduleSpec::LayeredAB:
                if (spec_.noise.tier != NoiseTier::CodeCapacity)
                    throw PolicyError(
                        "two-block-AB layering applies to code-capacity decoding only");
                cfg.schedule = Schedule::layered(layered_partition(spec_.code,
                                                                  LayerPolicy::TwoBlockAB, side));
                break;
            case ScheduleSpec::LayeredRC:
                cfg.schedule = Schedule::layered(row_coloring_layers(h));
                break;
        }
        return cfg;
    }

    ExperimentSpec spec_;
    double p_ = 0.0;
    SmCircuit circuit_;
    FaultMaps maps_;
    DetectorModel model_;
    BitMatrix dec_matrix_x_, dec_matrix_z_;
    std::vector<double> priors_x_, priors_z_;
    DecoderConfig config_x_, config_z_;
};

namespace detail {

constexpr size_t kChunkTrials = 256;

// Deterministic chunked execution: chunks are evaluated (possibly in
// parallel waves) but committed strictly in index order, and the stop rule is
// applied per committed chunk. The included trial set is therefore a prefix
// that does not depend on the worker count.
inline SummaryRow run_point(const PointRunner& runner, uint64_t point_seed, size_t workers) {
    const ExperimentSpec& spec = runner.spec();
    size_t max_trials = spec.trials;
    size_t num_chunks = (max_trials + kChunkTrials - 1) / kChunkTrials;
    if (workers == 0) workers = 1;

    std::vector<PointRunner::WorkerState> states;
    states.reserve(workers);
    for (size_t w = 0; w < workers; ++w) states.push_back(runner.make_worker());

    auto run_chunk = [&](size_t chunk, PointRunner::WorkerState& state) {
        PointAggregate agg;
        size_t begin = chunk * kChunkTrials;
        size_t end = std::min(begin + kChunkTrials, max_trials);
        for (size_t t = begin; t < end; ++t) {
            size_t conv = 0;
            TrialRecord rec = runner.run_trial(state, point_seed, t, &conv);
            agg.add(rec, 2, conv);
        }
        return agg;
    };

    PointAggregate total;
    bool stopped = false;
    size_t next_chunk = 0;
    while (next_chunk < num_chunks && !stopped) {
        size_t wave = std::min(workers, num_chunks - next_chunk);
        std::vector<PointAggregate> wave_results(wave);
        if (wave == 1) {
            wave_results[0] = run_chunk(next_chunk, states[0]);
        } else {
            std::vector<std::thread> threads;
            threads.reserve(wave);
            for (size_t w = 0; w < wave; ++w)
                threads.emplace_back([&, w] { wave_results[w] = run_chunk(next_chunk + w, states[w]); });
            for (auto& th : threads) th.join();
        }
        for (size_t w = 0; w < wave; ++w) {
            total.merge(wave_results[w]);
            if (spec.stop.kind == StopRule::Kind::TargetFailures &&
                total.failures >= spec.stop.target_failures) {
                stopped = true;
                break;  // later chunks in this wave are discarded
            }
        }
        next_chunk += wave;
    }

    SummaryRow row;
    row.p = runner.p();
    row.trials = total.trials;
    row.failures = total.failures;
    row.ler = total.trials ? static_cast<double>(total.failures) / total.trials : 0.0;
    auto [lo, hi] = wilson_interval(total.failures, total.trials);
    row.ler_lo = lo;
    row.ler_hi = hi;
    row.mean_iters = total.decodes ? static_cast<double>(total.iterations) / total.decodes : 0.0;
    row.conv_rate = total.decodes ? static_cast<double>(total.converged) / total.decodes : 0.0;
    return row;
}

}  // namespace detail

inline uint64_t point_seed(uint64_t base_seed, size_t point_index) {
    return Rng::split(base_seed, point_index).next();
}

inline SummaryRow run_experiment(const ExperimentSpec& spec, size_t workers = 1) {
    PointRunner runner(spec, spec.noise.p);
    return detail::run_point(runner, point_seed(spec.seed, 0), workers);
}

inline std::vector<SummaryRow> sweep(const ExperimentSpec& spec, const std::vector<double>& grid,
                                     size_t workers = 1, bool progress = false) {
    if (grid.empty()) throw DomainError("sweep requires a nonempty p grid");
    std::vector<SummaryRow> rows;
    for (size_t i = 0; i < grid.size(); ++i) {
        ExperimentSpec point_spec = spec;
        point_spec.noise.p = grid[i];
        PointRunner runner(point_spec, grid[i]);
        rows.push_back(detail::run_point(runner, point_seed(spec.seed, i), workers));
        if (progress) {
            std::fprintf(stderr, "p=%g trials=%zu failures=%zu ler=%g\n", rows.back().p,
                         rows.back().trials, rows.back().failures, rows.back().ler);
        }
    }
    return rows;
}

inline std::string format_csv_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

inline std::string csv_header() { return "p,trials,failures,ler,ler_lo,ler_hi,mean_iters,conv_rate"; }

inline std::string to_csv_row(const SummaryRow& r) {
    std::string out = format_csv_value(r.p);
    out += ',' + std::to_string(r.trials);
    out += ',' + std::to_string(r.failures);
    out += ',' + format_csv_value(r.ler);
    out += ',' + format_csv_value(r.ler_lo);
    out += ',' + format_csv_value(r.ler_hi);
    out += ',' + format_csv_value(r.mean_iters);
    out += ',' + format_csv_value(r.conv_rate);
    return out;
}

inline std::string to_csv(const std::vector<SummaryRow>& rows) {
    std::string out = csv_header() + "\n";
    for (const auto& r : rows) out += to_csv_row(r) + "\n";
    return out;
}

}  // namespace qldpc
