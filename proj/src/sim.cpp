#include "ldgm/sim.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "ldgm/block_code.hpp"
#include "ldgm/rng.hpp"
#include "ldgm/sc_code.hpp"

namespace ldgm {

void SimConfig::validate() const {
    code.validate();
    if (coupling) coupling->validate();
    if (sweep.empty()) throw std::invalid_argument("sim: sweep must be non-empty");
    if (policy.min_frame_errors < 1)
        throw std::invalid_argument("sim: min_frame_errors >= 1 required");
    if (policy.max_frames < 1) throw std::invalid_argument("sim: max_frames >= 1 required");
    if (caps.i_max < 1 || caps.j_max < 1)
        throw std::invalid_argument("sim: iteration caps must be >= 1");
    if (coupling && coupling->mode == CouplingMode::Terminated) {
        const std::size_t chain = coupling->L + coupling->m;
        const std::size_t d = caps.d < 0 ? 2 * coupling->m : static_cast<std::size_t>(caps.d);
        if (d > chain - 1)
            throw std::invalid_argument("sim: decode window exceeds the coupled chain");
    }
}

namespace {

struct TrialOutcome {
    std::uint64_t bit_errors = 0;
    bool frame_error = false;
};

class PointRunner {
  public:
    PointRunner(const SimConfig &cfg, const BlockCode *block, const ScCode *sc)
        : cfg_(cfg), block_(block), sc_(sc) {}

    TrialOutcome run_trial(const ChannelModel &ch, std::uint64_t seed) const {
        if (sc_) return run_sc_trial(ch, seed);
        return run_block_trial(ch, seed);
    }

    std::size_t info_bits() const {
        return sc_ ? sc_->k() * sc_->L() : block_->k();
    }

  private:
    TrialOutcome run_block_trial(const ChannelModel &ch, std::uint64_t seed) const {
        const std::size_t k = block_->k();
        BitVec u(k, 0);
        BitVec c(block_->n(), 0);
        if (cfg_.random_data) {
            Rng data_rng(Rng::splitmix64(seed));
            for (auto &b : u) b = static_cast<std::uint8_t>(data_rng.next_u64() & 1u);
            c = encode_block(u, *block_);
        }
        const LlrWord llr = transmit(c, ch, seed);
        const DecodeOutcome out = decode_block(llr, *block_, cfg_.caps.i_max);
        TrialOutcome res;
        for (std::size_t i = 0; i < k; ++i) res.bit_errors += out.bits[i] != u[i];
        res.frame_error = res.bit_errors != 0;
        return res;
    }

    TrialOutcome run_sc_trial(const ChannelModel &ch, std::uint64_t seed) const {
        const std::size_t total_k = sc_->k() * sc_->L();
        BitVec u(total_k, 0);
        BitVec c(sc_->frame_bits(), 0);
        if (cfg_.random_data) {
            Rng data_rng(Rng::splitmix64(seed));
            for (auto &b : u) b = static_cast<std::uint8_t>(data_rng.next_u64() & 1u);
            c = encode_sc(u, *sc_);
        }
        const LlrWord llr = transmit(c, ch, seed);
        ScDecodeOptions opt;
        opt.j_max = cfg_.caps.j_max;
        opt.d = cfg_.caps.d;
        opt.entropy_eps = cfg_.caps.entropy_eps;
        const auto outcomes = decode_sc(split_frame_llrs(llr, *sc_), *sc_, opt);
        TrialOutcome res;
        for (std::size_t t = 0; t < sc_->L(); ++t)
            for (std::size_t i = 0; i < sc_->k(); ++i)
                res.bit_errors += outcomes[t].bits[i] != u[t * sc_->k() + i];
        res.frame_error = res.bit_errors != 0;
        return res;
    }

    const SimConfig &cfg_;
    const BlockCode *block_;
    const ScCode *sc_;
};

// Deterministic stopping: trials are tallied in index order, and the point
// closes at the first prefix reaching the stop rule. Workers may compute a
// few extra trials past the cut; those are discarded identically no matter
// how many workers ran.
PointResult run_point(const SimConfig &cfg, const PointRunner &runner, std::size_t point_index,
                      const OperatingPoint &op, unsigned workers) {
    const auto t0 = std::chrono::steady_clock::now();

    std::mutex mutex;
    std::map<std::uint64_t, TrialOutcome> pending;
    std::uint64_t scanned = 0;
    std::uint64_t bit_errors = 0, frame_errors = 0;
    std::atomic<std::uint64_t> next_trial{0};
    std::atomic<std::uint64_t> stop_at{cfg.policy.max_frames};

    auto worker = [&]() {
        for (;;) {
            const std::uint64_t trial = next_trial.fetch_add(1);
            if (trial >= stop_at.load(std::memory_order_relaxed)) return;
            const std::uint64_t seed = derive_seed(cfg.master_seed, point_index, trial);
            const TrialOutcome out = runner.run_trial(op.channel, seed);
            std::lock_guard<std::mutex> lock(mutex);
            pending.emplace(trial, out);
            while (true) {
                auto it = pending.find(scanned);
                if (it == pending.end()) break;
                if (scanned >= stop_at.load(std::memory_order_relaxed)) break;
                bit_errors += it->second.bit_errors;
                frame_errors += it->second.frame_error ? 1 : 0;
                pending.erase(it);
                ++scanned;
                if (frame_errors >= cfg.policy.min_frame_errors) {
                    // Under the mutex, so a plain lowering store suffices.
                    if (scanned < stop_at.load(std::memory_order_relaxed))
                        stop_at.store(scanned, std::memory_order_relaxed);
                    break;
                }
            }
        }
    };

    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto &t : pool) t.join();

    const std::uint64_t frames = std::min<std::uint64_t>(scanned, stop_at.load());
    PointResult res;
    res.x = op.x;
    res.channel = op.channel.spec_string();
    res.frames = frames;
    res.bit_errors = bit_errors;
    res.frame_errors = frame_errors;
    const double total_bits = static_cast<double>(frames) * static_cast<double>(runner.info_bits());
    res.ber = frames ? static_cast<double>(bit_errors) / total_bits : 0.0;
    res.fer = frames ? static_cast<double>(frame_errors) / static_cast<double>(frames) : 0.0;
    res.ber_ci = frames ? 1.96 * std::sqrt(std::max(0.0, res.ber * (1.0 - res.ber)) / total_bits)
                        : 0.0;
    res.fer_ci = frames ? 1.96 * std::sqrt(std::max(0.0, res.fer * (1.0 - res.fer)) /
                                           static_cast<double>(frames))
                        : 0.0;
    res.seed = cfg.master_seed;
    res.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

} // namespace

SimResult run_sweep(const SimConfig &config, const std::function<void(const PointResult &)> &on_point) {
    config.validate();

    BlockCode block = make_block_code(config.code);
    std::optional<ScCode> sc;
    if (config.coupling) {
        auto layers = split_matrix(block.P(), *config.coupling);
        sc.emplace(std::move(block), std::move(layers), *config.coupling);
    }
    PointRunner runner(config, sc ? nullptr : &block, sc ? &*sc : nullptr);

    unsigned workers = config.workers;
    if (workers == 0) {
        workers = std::thread::hardware_concurrency();
        if (workers == 0) workers = 1;
        if (workers > 16) workers = 16;
    }

    SimResult result;
    for (std::size_t p = 0; p < config.sweep.size(); ++p) {
        PointResult point = run_point(config, runner, p, config.sweep[p], workers);
        result.points.push_back(point);
        if (on_point) on_point(point);
    }
    return result;
}

std::string sim_csv_header() { return "x,ber,fer,ber_ci,fer_ci,frames,bit_errs,frame_errs,seed"; }

std::string sim_csv_row(const PointResult &p) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%.10g,%.10g,%llu,%llu,%llu,%llu", p.x, p.ber,
                  p.fer, p.ber_ci, p.fer_ci, static_cast<unsigned long long>(p.frames),
                  static_cast<unsigned long long>(p.bit_errors),
                  static_cast<unsigned long long>(p.frame_errors),
                  static_cast<unsigned long long>(p.seed));
    return buf;
}

} // namespace ldgm
