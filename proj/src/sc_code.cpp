#include "ldgm/sc_code.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ldgm/llr_math.hpp"

namespace ldgm {

ScCode::ScCode(BlockCode base, std::vector<SparseBitMatrix> layers, CouplingParams coupling)
    : base_(std::move(base)), layers_(std::move(layers)), coupling_(coupling) {
    coupling_.validate();
    if (layers_.size() != coupling_.m + 1)
        throw std::invalid_argument("ScCode: expected m+1 layers");
    for (const auto &Pl : layers_)
        if (Pl.rows() != base_.k() || Pl.cols() != base_.parity_bits())
            throw std::invalid_argument("ScCode: layer shape mismatch");
    // The layer supports must partition the support of the base matrix.
    std::vector<std::uint32_t> merged;
    for (std::size_t i = 0; i < base_.k(); ++i) {
        merged.clear();
        for (const auto &Pl : layers_)
            merged.insert(merged.end(), Pl.row(i).begin(), Pl.row(i).end());
        std::sort(merged.begin(), merged.end());
        if (std::adjacent_find(merged.begin(), merged.end()) != merged.end())
            throw std::invalid_argument("ScCode: layer supports overlap");
        if (merged != base_.P().row(i))
            throw std::invalid_argument("ScCode: layers do not XOR to the base matrix");
    }
}

ScCode make_sc_code(const EnsembleParams &params, const CouplingParams &coupling) {
    BlockCode base = make_block_code(params);
    auto layers = split_matrix(base.P(), coupling);
    return ScCode(std::move(base), std::move(layers), coupling);
}

std::size_t ScCode::frame_bits() const {
    if (tail_biting()) return n() * L();
    return n() * L() + m() * (n() - k());
}

double ScCode::rate() const {
    if (tail_biting()) return static_cast<double>(k()) / static_cast<double>(n());
    return static_cast<double>(k() * L()) / static_cast<double>(frame_bits());
}

BitVec encode_sc(const BitVec &u, const ScCode &code) {
    const std::size_t k = code.k();
    const std::size_t r = code.n() - k;
    const std::size_t L = code.L();
    const std::size_t m = code.m();
    if (u.size() != k * L) throw std::invalid_argument("encode_sc: |u| != k*L");

    BitVec out;
    out.reserve(code.frame_bits());
    BitVec parity(r);

    auto accumulate_layer = [&](std::size_t src, std::size_t ell) {
        const auto &Pl = code.layers()[ell];
        const std::uint8_t *ut = u.data() + src * k;
        for (std::size_t i = 0; i < k; ++i) {
            if (!ut[i]) continue;
            for (std::uint32_t j : Pl.row(i)) parity[j] ^= 1u;
        }
    };

    if (code.tail_biting()) {
        for (std::size_t t = 0; t < L; ++t) {
            std::fill(parity.begin(), parity.end(), 0);
            for (std::size_t ell = 0; ell <= m; ++ell) accumulate_layer((t + L - ell) % L, ell);
            out.insert(out.end(), u.begin() + t * k, u.begin() + (t + 1) * k);
            out.insert(out.end(), parity.begin(), parity.end());
        }
        return out;
    }

    for (std::size_t t = 0; t < L + m; ++t) {
        std::fill(parity.begin(), parity.end(), 0);
        for (std::size_t ell = 0; ell <= m && ell <= t; ++ell) {
            const std::size_t src = t - ell;
            if (src >= L) continue; // zero tail information
            accumulate_layer(src, ell);
        }
        if (t < L) out.insert(out.end(), u.begin() + t * k, u.begin() + (t + 1) * k);
        out.insert(out.end(), parity.begin(), parity.end());
    }
    return out;
}

bool entropy_stop(const std::vector<double> &app_llrs, double eps) {
    double total = 0.0;
    for (double v : app_llrs) {
        const double p = 1.0 / (1.0 + std::exp(std::abs(v)));
        if (p > 0.0 && p < 1.0)
            total += -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
    }
    return total / static_cast<double>(app_llrs.size()) < eps;
}

namespace {

// Check-major edge structure of one coupling layer, shared by every chain
// position using that layer.
struct LayerGraph {
    std::vector<std::uint32_t> check_offset;
    std::vector<std::uint32_t> edge_info;
};

LayerGraph build_layer_graph(const SparseBitMatrix &Pl) {
    LayerGraph g;
    auto cols = Pl.col_support();
    g.check_offset.resize(Pl.cols() + 1);
    g.check_offset[0] = 0;
    for (std::size_t j = 0; j < Pl.cols(); ++j)
        g.check_offset[j + 1] = g.check_offset[j] + static_cast<std::uint32_t>(cols[j].size());
    g.edge_info.reserve(g.check_offset.back());
    for (const auto &c : cols) g.edge_info.insert(g.edge_info.end(), c.begin(), c.end());
    return g;
}

class ScDecoder {
  public:
    ScDecoder(const std::vector<LlrWord> &layer_llrs, const ScCode &code,
              const ScDecodeOptions &options)
        : code_(code), opt_(options) {
        k_ = code.k();
        r_ = code.n() - k_;
        m_ = code.m();
        chain_ = code.chain_length();
        d_ = opt_.d < 0 ? static_cast<int>(2 * m_) : opt_.d;
        if (code.tail_biting()) d_ = static_cast<int>(chain_ - 1); // whole-ring schedule
        if (static_cast<std::size_t>(d_) > chain_ - 1)
            throw std::invalid_argument("decode_sc: window delay exceeds the chain");
        if (opt_.j_max < 1) throw std::invalid_argument("decode_sc: j_max >= 1 required");

        graphs_.reserve(m_ + 1);
        for (const auto &Pl : code.layers()) graphs_.push_back(build_layer_graph(Pl));

        if (layer_llrs.size() != chain_)
            throw std::invalid_argument("decode_sc: expected one LlrWord per chain layer");
        ws_.layers.resize(chain_);
        for (std::size_t x = 0; x < chain_; ++x) {
            const bool data_layer = x < code.L();
            const auto &word = layer_llrs[x].values;
            if (word.size() != (data_layer ? code.n() : r_))
                throw std::invalid_argument("decode_sc: layer LLR length mismatch");
            auto &st = ws_.layers[x];
            st.chan_info.assign(k_, LLR_MAX); // known zero tail bits
            if (data_layer)
                for (std::size_t i = 0; i < k_; ++i) st.chan_info[i] = clamp_llr(word[i]);
            st.chan_parity.resize(r_);
            const std::size_t off = data_layer ? k_ : 0;
            for (std::size_t j = 0; j < r_; ++j) st.chan_parity[j] = clamp_llr(word[off + j]);
            st.rep_to_gen.assign(m_ + 1, std::vector<double>(k_, 0.0));
            st.gen_to_sum.assign(m_ + 1, std::vector<double>(r_, 0.0));
            st.sum_to_gen.assign(m_ + 1, std::vector<double>(r_, 0.0));
            st.info_total.assign(m_ + 1, std::vector<double>(k_, 0.0));
            st.check_to_info.resize(m_ + 1);
            for (std::size_t ell = 0; ell <= m_; ++ell)
                st.check_to_info[ell].assign(graphs_[ell].edge_info.size(), 0.0);
        }
    }

    std::vector<DecodeOutcome> run() {
        if (code_.tail_biting()) return run_tail_biting();
        std::vector<DecodeOutcome> outcomes(code_.L());
        for (std::size_t t = 0; t < code_.L(); ++t) {
            ws_.start = t;
            ws_.end = std::min(t + static_cast<std::size_t>(d_), chain_ - 1);
            int used = 0;
            bool stopped = false;
            std::vector<double> app;
            for (int j = 1; j <= opt_.j_max; ++j) {
                used = j;
                for (std::size_t x = ws_.start; x <= ws_.end; ++x) forward_pass(x);
                for (std::size_t x = ws_.end + 1; x-- > ws_.start;) backward_pass(x);
                app = layer_app(t);
                if (entropy_stop(app, opt_.entropy_eps)) {
                    stopped = true;
                    break;
                }
            }
            outcomes[t] = make_outcome(app, used, stopped);
            if (opt_.cancellation) cancel(t, outcomes[t].bits);
        }
        return outcomes;
    }

  private:
    // Schedule per layer visit: + -> P_0..P_m -> = -> P_0..P_m (forward),
    // mirrored for the backward sweep.
    void forward_pass(std::size_t x) {
        sum_update(x);
        gen_pass(x);
        rep_update(x);
        gen_pass(x);
    }
    void backward_pass(std::size_t x) {
        rep_update(x);
        gen_pass(x);
        sum_update(x);
        gen_pass(x);
    }

    bool source_live(std::size_t src) const {
        return !opt_.cancellation || src >= ws_.start;
    }

    // + node of layer x: exclusive tanh-rule outputs toward every live
    // generator edge; the channel observation of p^(x) rides the half-edge.
    void sum_update(std::size_t x) {
        auto &self = ws_.layers[x];
        srcs_.clear();
        for (std::size_t ell = 0; ell <= m_; ++ell) {
            std::size_t src;
            if (code_.tail_biting()) {
                src = (x + chain_ - (ell % chain_)) % chain_;
            } else {
                if (ell > x) continue;
                src = x - ell;
            }
            if (!source_live(src)) continue;
            srcs_.push_back({src, ell});
        }
        const std::size_t deg = srcs_.size();
        tans_.resize(deg);
        for (std::size_t j = 0; j < r_; ++j) {
            const double tp = tanh_half(self.chan_parity[j]);
            double prefix = tp;
            for (std::size_t s = 0; s < deg; ++s) {
                const double t = tanh_half(ws_.layers[srcs_[s].first].gen_to_sum[srcs_[s].second][j]);
                tans_[s] = prefix; // product of channel and earlier inputs
                prefix *= t;
            }
            double suffix = 1.0;
            for (std::size_t s = deg; s-- > 0;) {
                auto &msg = ws_.layers[srcs_[s].first].sum_to_gen[srcs_[s].second];
                msg[j] = llr_from_tanh(tans_[s] * suffix);
                suffix *= tanh_half(ws_.layers[srcs_[s].first].gen_to_sum[srcs_[s].second][j]);
            }
        }
    }

    // = node of layer x: plain LLR addition, excluding the receiving edge.
    void rep_update(std::size_t x) {
        auto &st = ws_.layers[x];
        for (std::size_t i = 0; i < k_; ++i) {
            double total = st.chan_info[i];
            for (std::size_t ell = 0; ell <= m_; ++ell) total += st.info_total[ell][i];
            for (std::size_t ell = 0; ell <= m_; ++ell)
                st.rep_to_gen[ell][i] = clamp_llr(total - st.info_total[ell][i]);
        }
    }

    // One full message pass of every generator node of layer x.
    void gen_pass(std::size_t x) {
        for (std::size_t ell = 0; ell <= m_; ++ell) {
            if (!code_.tail_biting() && x + ell > chain_ - 1) continue;
            gen_node_pass(x, ell);
        }
    }

    void gen_node_pass(std::size_t x, std::size_t ell) {
        auto &st = ws_.layers[x];
        const LayerGraph &g = graphs_[ell];
        auto &c2u = st.check_to_info[ell];
        auto &itot = st.info_total[ell];
        auto &r2g = st.rep_to_gen[ell];
        auto &s2g = st.sum_to_gen[ell];
        auto &g2s = st.gen_to_sum[ell];
        for (std::size_t j = 0; j < r_; ++j) {
            const std::uint32_t lo = g.check_offset[j];
            const std::uint32_t hi = g.check_offset[j + 1];
            const std::size_t deg = hi - lo;
            if (deg == 0) {
                g2s[j] = LLR_MAX; // this parity position is structurally zero
                continue;
            }
            tans_.resize(deg);
            ins_.resize(deg);
            double all = 1.0;
            for (std::size_t s = 0; s < deg; ++s) {
                const std::uint32_t i = g.edge_info[lo + s];
                const double in = clamp_llr(r2g[i] + itot[i] - c2u[lo + s]);
                ins_[s] = tanh_half(in);
                all *= ins_[s];
            }
            g2s[j] = llr_from_tanh(all);
            const double tp = tanh_half(s2g[j]);
            double prefix = tp;
            for (std::size_t s = 0; s < deg; ++s) {
                const double cur = ins_[s];
                tans_[s] = prefix;
                prefix *= cur;
            }
            double suffix = 1.0;
            for (std::size_t s = deg; s-- > 0;) {
                c2u[lo + s] = llr_from_tanh(tans_[s] * suffix);
                suffix *= ins_[s];
            }
        }
        // Rebuild the per-bit totals from scratch (no incremental drift).
        std::fill(itot.begin(), itot.end(), 0.0);
        for (std::size_t e = 0; e < g.edge_info.size(); ++e) itot[g.edge_info[e]] += c2u[e];
    }

    std::vector<double> layer_app(std::size_t t) const {
        const auto &st = ws_.layers[t];
        std::vector<double> app(k_);
        for (std::size_t i = 0; i < k_; ++i) {
            double total = st.chan_info[i];
            for (std::size_t ell = 0; ell <= m_; ++ell) total += st.info_total[ell][i];
            app[i] = clamp_llr(total);
        }
        return app;
    }

    DecodeOutcome make_outcome(const std::vector<double> &app, int used, bool stopped) const {
        DecodeOutcome out;
        out.app = app;
        out.bits.resize(k_);
        for (std::size_t i = 0; i < k_; ++i) out.bits[i] = app[i] < 0.0 ? 1 : 0;
        out.iterations = used;
        out.converged = stopped;
        return out;
    }

    // Treat the decided layer as known: where its contribution to a later
    // parity sub-frame is a one, flip the sign of that channel LLR.
    void cancel(std::size_t t, const BitVec &decided) {
        for (std::size_t ell = 1; ell <= m_; ++ell) {
            const std::size_t target = t + ell;
            if (target > chain_ - 1) break;
            const auto &Pl = code_.layers()[ell];
            w_.assign(r_, 0);
            for (std::size_t i = 0; i < k_; ++i) {
                if (!decided[i]) continue;
                for (std::uint32_t j : Pl.row(i)) w_[j] ^= 1u;
            }
            auto &chan = ws_.layers[target].chan_parity;
            for (std::size_t j = 0; j < r_; ++j)
                if (w_[j]) chan[j] = -chan[j];
        }
    }

    std::vector<DecodeOutcome> run_tail_biting() {
        // Whole-ring flooding with the same per-layer schedule; every
        // decision is made after the shared iteration loop ends.
        ws_.start = 0;
        ws_.end = chain_ - 1;
        int used = 0;
        bool stopped = false;
        for (int j = 1; j <= opt_.j_max; ++j) {
            used = j;
            for (std::size_t x = 0; x < chain_; ++x) forward_pass(x);
            for (std::size_t x = chain_; x-- > 0;) backward_pass(x);
            stopped = all_layers_stopped();
            if (stopped) break;
        }
        std::vector<DecodeOutcome> outcomes(code_.L());
        for (std::size_t t = 0; t < code_.L(); ++t)
            outcomes[t] = make_outcome(layer_app(t), used, stopped);
        return outcomes;
    }

    bool all_layers_stopped() const {
        for (std::size_t t = 0; t < code_.L(); ++t)
            if (!entropy_stop(layer_app(t), opt_.entropy_eps)) return false;
        return true;
    }

    const ScCode &code_;
    ScDecodeOptions opt_;
    std::size_t k_ = 0, r_ = 0, m_ = 0, chain_ = 0;
    int d_ = 0;
    std::vector<LayerGraph> graphs_;
    WindowState ws_;
    std::vector<std::pair<std::size_t, std::size_t>> srcs_;
    std::vector<double> tans_, ins_;
    BitVec w_;
};

} // namespace

std::vector<DecodeOutcome> decode_sc(const std::vector<LlrWord> &layer_llrs, const ScCode &code,
                                     const ScDecodeOptions &options) {
    ScDecoder decoder(layer_llrs, code, options);
    return decoder.run();
}

std::vector<LlrWord> split_frame_llrs(const LlrWord &frame, const ScCode &code) {
    if (frame.size() != code.frame_bits())
        throw std::invalid_argument("split_frame_llrs: frame length mismatch");
    std::vector<LlrWord> layers(code.chain_length());
    const std::size_t r = code.n() - code.k();
    std::size_t off = 0;
    for (std::size_t t = 0; t < code.chain_length(); ++t) {
        const std::size_t len = t < code.L() ? code.n() : r;
        layers[t].values.assign(frame.values.begin() + off, frame.values.begin() + off + len);
        off += len;
    }
    return layers;
}

} // namespace ldgm
