#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "qldpc/code.hpp"
#include "qldpc/gf2.hpp"
#include "qldpc/noise.hpp"

namespace qldpc {

enum class Algorithm { SumProduct, NormalizedMinSum };

// Ordered update groups. Check layers sweep groups of check rows (serial is
// the one-row-per-layer special case); variable layers sweep groups of
// columns, which is what the two-block A-then-B schedule needs.
struct LayerAssignment {
    enum class Kind { CheckLayers, VariableLayers } kind = Kind::CheckLayers;
    std::vector<std::vector<size_t>> layers;
};

struct Schedule {
    enum class Kind { Flooding, Serial, Layered } kind = Kind::Flooding;
    LayerAssignment assignment;

    static Schedule flooding() { return {}; }
    static Schedule serial() { return {Kind::Serial, {}}; }
    static Schedule layered(LayerAssignment a) { return {Kind::Layered, std::move(a)}; }
};

struct DecoderConfig {
    Algorithm algorithm = Algorithm::NormalizedMinSum;
    double normalization = 1.0;  // min-sum only
    Schedule schedule = Schedule::flooding();
    size_t max_iters = 100;
    double prior_p = 0.0;         // uniform prior probability of error
    std::vector<double> priors;   // per-variable override when nonempty
    bool osd0 = false;
    double clip = 30.0;  // symmetric log-ratio clipping magnitude
    // Stop at the first syndrome-matching hard decision. Disable to run to
    // max_iters: on cycle-free graphs only the settled messages realize exact
    // ML, a transient match can be heavier.
    bool early_stop = true;
};

struct DecodeResult {
    BitVector estimate;
    bool converged = false;  // message passing alone reached a match
    size_t iterations = 0;
    std::vector<double> posteriors;  // log((1-p)/p)-convention: negative favors error
    bool used_osd = false;
};

// OSD order 0: sort columns by descending error likelihood, then take the
// canonical Gaussian-elimination solution restricted to that order (free
// variables zero). Ties resolve to the lowest column index. The output always
// satisfies the syndrome or the syndrome is inconsistent.
inline BitVector osd0(const BitMatrix& h, const BitVector& s, const std::vector<double>& soft) {
    if (s.len() != h.rows()) throw DimensionError("osd syndrome length mismatch");
    if (soft.size() != h.cols()) throw DimensionError("osd soft score length mismatch");
    std::vector<size_t> order(h.cols());
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return soft[a] < soft[b]; });
    BitMatrix permuted(h.rows(), h.cols());
    for (size_t k = 0; k < order.size(); ++k)
        for (size_t i = 0; i < h.rows(); ++i)
            if (h.get(i, order[k])) permuted.set(i, k, true);
    auto xp = solve(permuted, s);
    if (!xp) throw InconsistentSyndrome("syndrome outside the column space of h");
    BitVector x(h.cols());
    for (size_t k = 0; k < order.size(); ++k)
        if (xp->get(k)) x.set(order[k], true);
    return x;
}

// Syndrome-based message-passing decoder on the Tanner graph of a check
// matrix. One instance owns its message buffers; reuse it across calls from a
// single worker.
class Decoder {
  public:
    Decoder(const BitMatrix& h, DecoderConfig config) : h_(h), config_(std::move(config)) {
        m_ = h.rows();
        n_ = h.cols();
        check_vars_.resize(m_);
        edge_offset_.assign(m_ + 1, 0);
        for (size_t c = 0; c < m_; ++c) {
            for (size_t v = 0; v < n_; ++v)
                if (h.get(c, v)) check_vars_[c].push_back(v);
            edge_offset_[c + 1] = edge_offset_[c] + check_vars_[c].size();
        }
        var_edges_.resize(n_);
        var_checks_.resize(n_);
        for (size_t c = 0; c < m_; ++c)
            for (size_t k = 0; k < check_vars_[c].size(); ++k) {
                var_edges_[check_vars_[c][k]].push_back(edge_offset_[c] + k);
                var_checks_[check_vars_[c][k]].push_back(c);
            }
        num_edges_ = edge_offset_[m_];

        prior_llr_.resize(n_);
        if (!config_.priors.empty() && config_.priors.size() != n_)
            throw DimensionError("per-variable prior count mismatch");
        for (size_t v = 0; v < n_; ++v) {
            double p = config_.priors.empty() ? config_.prior_p : config_.priors[v];
            if (!(p > 0.0) || p > 0.5)
                throw DomainError("prior probabilities must lie in (0, 0.5]");
            prior_llr_[v] = clip(std::log((1.0 - p) / p));
        }

        if (config_.schedule.kind == Schedule::Kind::Layered)
            validate_layers(config_.schedule.assignment);
        r_.assign(num_edges_, 0.0);
        q_.assign(num_edges_, 0.0);
        posterior_.assign(n_, 0.0);
    }

    const DecoderConfig& config() const { return config_; }

    DecodeResult decode(const BitVector& syndrome) {
        if (syndrome.len() != m_) throw DimensionError("syndrome length mismatch");
        DecodeResult result;
        result.estimate = BitVector(n_);
        result.posteriors = prior_llr_;

        // Iteration-0 check: with priors in (0, 1/2] the initial hard decision
        // is all-zero, so a zero syndrome returns before any update.
        if (matches_syndrome(result.estimate, syndrome)) {
            result.converged = true;
            return result;
        }

        std::fill(r_.begin(), r_.end(), 0.0);
        for (size_t c = 0; c < m_; ++c)
            for (size_t k = 0; k < check_vars_[c].size(); ++k)
                q_[edge_offset_[c] + k] = prior_llr_[check_vars_[c][k]];
        posterior_ = prior_llr_;

        for (size_t iter = 1; iter <= config_.max_iters; ++iter) {
            switch (config_.schedule.kind) {
                case Schedule::Kind::Flooding:
                    flooding_iteration(syndrome);
                    break;
                case Schedule::Kind::Serial:
                    serial_iteration(syndrome);
                    break;
                case Schedule::Kind::Layered:
                    if (config_.schedule.assignment.kind == LayerAssignment::Kind::CheckLayers) {
                        check_layered_iteration(syndrome);
                    } else {
                        variable_layered_iteration(syndrome);
                    }
                    break;
            }
            result.iterations = iter;
            hard_decision(result.estimate);
            if (matches_syndrome(result.estimate, syndrome)) {
                result.converged = true;
                if (config_.early_stop) break;
            } else {
                result.converged = false;
            }
        }
        result.posteriors = posterior_;
        if (!result.converged && config_.osd0)
            result.estimate = osd0(h_, syndrome, posterior_), result.used_osd = true;
        return result;
    }

  private:
    double clip(double x) const {
        return std::max(-config_.clip, std::min(config_.clip, x));
    }

    void validate_layers(const LayerAssignment& a) const {
        size_t total = a.kind == LayerAssignment::Kind::CheckLayers ? m_ : n_;
        std::vector<bool> seen(total, false);
        size_t count = 0;
        for (const auto& layer : a.layers)
            for (size_t idx : layer) {
                if (idx >= total || seen[idx])
                    throw PolicyError("layer assignment must partition the node set");
                seen[idx] = true;
                ++count;
            }
        if (count != total) throw PolicyError("layer assignment must cover every node");
    }

    bool matches_syndrome(const BitVector& estimate, const BitVector& syndrome) const {
        for (size_t c = 0; c < m_; ++c) {
            bool parity = false;
            for (size_t v : check_vars_[c]) parity ^= estimate.get(v);
            if (parity != syndrome.get(c)) return false;
        }
        return true;
    }

    void hard_decision(BitVector& estimate) const {
        for (size_t v = 0; v < n_; ++v) estimate.set(v, posterior_[v] < 0.0);
    }

    // Check-node outputs for a single check; leave-one-out over `in`.
    void check_update(size_t c, bool syn_bit, const double* in, double* out) const {
        size_t deg = check_vars_[c].size();
        if (config_.algorithm == Algorithm::NormalizedMinSum) {
            double min1 = HUGE_VAL, min2 = HUGE_VAL;
            size_t argmin = 0;
            int sign = syn_bit ? -1 : 1;
            for (size_t k = 0; k < deg; ++k) {
                double a = std::fabs(in[k]);
                if (in[k] < 0.0) sign = -sign;
                if (a < min1) {
                    min2 = min1;
                    min1 = a;
                    argmin = k;
                } else if (a < min2) {
                    min2 = a;
                }
            }
            for (size_t k = 0; k < deg; ++k) {
                double mag = (k == argmin) ? min2 : min1;
                if (deg == 1) mag = 0.0;  // no extrinsic information
                int s = sign;
                if (in[k] < 0.0) s = -s;
                out[k] = clip(config_.normalization * s * mag);
            }
        } else {
            // sum-product via tanh products
            double total = syn_bit ? -1.0 : 1.0;
            bool saw_zero = false;
            size_t zero_at = 0;
            for (size_t k = 0; k < deg; ++k) {
                double t = std::tanh(in[k] / 2.0);
                if (t == 0.0) {
                    if (saw_zero) {
                        total = 0.0;
                    }
                    saw_zero = true;
                    zero_at = k;
                } else {
                    total *= t;
                }
            }
            for (size_t k = 0; k < deg; ++k) {
                double prod;
                if (saw_zero) {
                    prod = (k == zero_at) ? total : 0.0;
                } else {
                    double t = std::tanh(in[k] / 2.0);
                    prod = total / t;
                }
                prod = std::max(-0.999999999999, std::min(0.999999999999, prod));
                out[k] = clip(2.0 * std::atanh(prod));
            }
        }
    }

    void flooding_iteration(const BitVector& syndrome) {
        scratch_in_.clear();
        scratch_out_.clear();
        for (size_t c = 0; c < m_; ++c) {
            size_t deg = check_vars_[c].size();
            if (deg == 0) continue;
            scratch_in_.resize(deg);
            scratch_out_.resize(deg);
            for (size_t k = 0; k < deg; ++k) scratch_in_[k] = q_[edge_offset_[c] + k];
            check_update(c, syndrome.get(c), scratch_in_.data(), scratch_out_.data());
            for (size_t k = 0; k < deg; ++k) r_[edge_offset_[c] + k] = scratch_out_[k];
        }
        for (size_t v = 0; v < n_; ++v) {
            double total = prior_llr_[v];
            for (size_t e : var_edges_[v]) total += r_[e];
            posterior_[v] = total;
            for (size_t e : var_edges_[v]) q_[e] = clip(total - r_[e]);
        }
    }

    // Immediate-update sweep over the given checks (serial and check-layered
    // schedules; layers produced by row coloring have disjoint support, so
    // immediate and parallel updates coincide within a layer).
    void sweep_checks(const BitVector& syndrome, const std::vector<size_t>& checks) {
        for (size_t c : checks) {
            size_t deg = check_vars_[c].size();
            if (deg == 0) continue;
            scratch_in_.resize(deg);
            scratch_out_.resize(deg);
            for (size_t k = 0; k < deg; ++k) {
                size_t e = edge_offset_[c] + k;
                scratch_in_[k] = clip(posterior_[check_vars_[c][k]] - r_[e]);
            }
            check_update(c, syndrome.get(c), scratch_in_.data(), scratch_out_.data());
            for (size_t k = 0; k < deg; ++k) {
                size_t e = edge_offset_[c] + k;
                r_[e] = scratch_out_[k];
                posterior_[check_vars_[c][k]] = scratch_in_[k] + scratch_out_[k];
            }
        }
    }

    void serial_iteration(const BitVector& syndrome) {
        all_checks_.resize(m_);
        std::iota(all_checks_.begin(), all_checks_.end(), size_t{0});
        sweep_checks(syndrome, all_checks_);
    }

    void check_layered_iteration(const BitVector& syndrome) {
        for (const auto& layer : config_.schedule.assignment.layers) sweep_checks(syndrome, layer);
    }

    // Vertical (variable-node) layers: within a layer, check-to-variable
    // messages are recomputed from the pre-layer state and committed together,
    // so the layer updates in parallel; layers see each other sequentially.
    void variable_layered_iteration(const BitVector& syndrome) {
        for (const auto& layer : config_.schedule.assignment.layers) {
            staged_edges_.clear();
            staged_q_.clear();
            staged_posterior_.clear();
            for (size_t v : layer) {
                double total = prior_llr_[v];
                staged_r_.clear();
                for (size_t idx = 0; idx < var_edges_[v].size(); ++idx) {
                    size_t e = var_edges_[v][idx];
                    size_t c = var_checks_[v][idx];
                    size_t deg = check_vars_[c].size();
                    scratch_in_.resize(deg);
                    scratch_out_.resize(deg);
                    for (size_t k = 0; k < deg; ++k) scratch_in_[k] = q_[edge_offset_[c] + k];
                    check_update(c, syndrome.get(c), scratch_in_.data(), scratch_out_.data());
                    double r_cv = scratch_out_[e - edge_offset_[c]];
                    staged_r_.push_back(r_cv);
                    total += r_cv;
                }
                staged_posterior_.push_back(total);
                for (size_t idx = 0; idx < var_edges_[v].size(); ++idx) {
                    staged_edges_.push_back(var_edges_[v][idx]);
                    staged_q_.push_back(clip(total - staged_r_[idx]));
                }
            }
            size_t vi = 0;
            for (size_t v : layer) posterior_[v] = staged_posterior_[vi++];
            for (size_t k = 0; k < staged_edges_.size(); ++k) q_[staged_edges_[k]] = staged_q_[k];
        }
    }

    BitMatrix h_;
    DecoderConfig config_;
    size_t m_ = 0, n_ = 0, num_edges_ = 0;
    std::vector<std::vector<size_t>> check_vars_;
    std::vector<size_t> edge_offset_;
    std::vector<std::vector<size_t>> var_edges_;
    std::vector<std::vector<size_t>> var_checks_;
    std::vector<double> prior_llr_;
    std::vector<double> r_, q_, posterior_;
    std::vector<double> scratch_in_, scratch_out_, staged_r_, staged_q_, staged_posterior_;
    std::vector<size_t> all_checks_, staged_edges_;
};

inline DecodeResult decode_syndrome(const BitMatrix& h, const BitVector& s,
                                    const DecoderConfig& config) {
    Decoder decoder(h, config);
    return decoder.decode(s);
}

enum class LayerPolicy { TwoBlockAB, RowColoring };

inline LayerAssignment row_coloring_layers(const BitMatrix& h) {
    LayerAssignment a;
    a.kind = LayerAssignment::Kind::CheckLayers;
    std::vector<BitVector> layer_support;
    for (size_t c = 0; c < h.rows(); ++c) {
        BitVector support = h.row(c);
        size_t assigned = SIZE_MAX;
        for (size_t l = 0; l < a.layers.size(); ++l) {
            bool overlap = false;
            for (size_t w = 0; w < support.words().size(); ++w)
                if (support.words()[w] & layer_support[l].words()[w]) {
                    overlap = true;
                    break;
                }
            if (!overlap) {
                assigned = l;
                break;
            }
        }
        if (assigned == SIZE_MAX) {
            a.layers.emplace_back();
            layer_support.push_back(BitVector(h.cols()));
            assigned = a.layers.size() - 1;
        }
        a.layers[assigned].push_back(c);
        layer_support[assigned] ^= support;
    }
    return a;
}

// Layer assignment for the layered schedule. Two-block-AB needs two-block
// construction provenance and yields the two qubit blocks (left A columns,
// then right B columns) as variable layers; a two-layer check partition
// cannot express the A-then-B order because every check of a two-block code
// straddles both column blocks. Row coloring greedily groups check rows with
// pairwise-disjoint variable support.
inline LayerAssignment layered_partition(const CssCode& code, LayerPolicy policy,
                                         ErrorSide side = ErrorSide::XError) {
    if (policy == LayerPolicy::TwoBlockAB) {
        if (code.block_size == 0 || code.n != 2 * code.block_size)
            throw PolicyError("two-block-AB layering requires two-block provenance");
        LayerAssignment a;
        a.kind = LayerAssignment::Kind::VariableLayers;
        std::vector<size_t> left(code.block_size), right(code.block_size);
        std::iota(left.begin(), left.end(), size_t{0});
        std::iota(right.begin(), right.end(), code.block_size);
        a.layers = {std::move(left), std::move(right)};
        return a;
    }
    return row_coloring_layers(code.check_matrix(side));
}

struct CircuitDecodeResult {
    DecodeResult result;
    BitVector fault_estimate;
    BitVector data_estimate;
};

// Decode one side's detector observations on the fault-expanded matrix with
// the model's per-column priors, then map the fault estimate to a data-error
// correction.
inline CircuitDecodeResult decode_circuit_level(const DetectorSide& side,
                                                const BitVector& detectors,
                                                DecoderConfig config) {
    config.priors = side.priors;
    Decoder decoder(side.h_det, config);
    CircuitDecodeResult out{decoder.decode(detectors), BitVector(), BitVector()};
    out.fault_estimate = out.result.estimate;
    out.data_estimate = side.fault_to_data.mul_vec(out.fault_estimate);
    return out;
}

}  // namespace qldpc
