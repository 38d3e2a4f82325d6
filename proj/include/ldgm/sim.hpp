#ifndef LDGM_SIM_HPP
#define LDGM_SIM_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ldgm/channel.hpp"
#include "ldgm/ensemble.hpp"

namespace ldgm {

struct OperatingPoint {
    double x = 0.0; // sweep coordinate (alpha, p, Eb/N0 dB or sigma)
    ChannelModel channel = ChannelModel::bsc(0.0);
};

struct TrialPolicy {
    std::uint64_t min_frame_errors = 100;
    std::uint64_t max_frames = 1000000;
};

struct DecoderCaps {
    int i_max = 50;            // block decoder iterations
    int j_max = 18;            // coupled decoder global iterations
    int d = -1;                // coupled decoder window delay, -1 -> 2m
    double entropy_eps = 1e-5; // coupled decoder stopping threshold
};

struct SimConfig {
    EnsembleParams code;                     // block code / coupled base code
    std::optional<CouplingParams> coupling;  // engaged -> coupled simulation
    std::vector<OperatingPoint> sweep;
    TrialPolicy policy;
    DecoderCaps caps;
    std::uint64_t master_seed = 1;
    bool random_data = false; // exercise the encoder path instead of all-zero frames
    unsigned workers = 0;     // 0 -> hardware concurrency (capped)

    void validate() const;
};

struct PointResult {
    double x = 0.0;
    std::string channel;
    std::uint64_t frames = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t frame_errors = 0;
    double ber = 0.0;
    double fer = 0.0;
    double ber_ci = 0.0; // 95% normal-approximation half-widths
    double fer_ci = 0.0;
    double wall_seconds = 0.0;
    std::uint64_t seed = 0; // master seed, for provenance
};

struct SimResult {
    std::vector<PointResult> points;
};

/// Monte Carlo sweep. Trials run concurrently with per-trial seeds derived
/// from (master seed, point index, trial index); a point stops once the
/// deterministic prefix of trials reaches min_frame_errors or max_frames,
/// so results do not depend on the worker count. `on_point` is invoked as
/// each operating point completes.
SimResult run_sweep(const SimConfig &config,
                    const std::function<void(const PointResult &)> &on_point = {});

/// Fixed CSV schema: x,ber,fer,ber_ci,fer_ci,frames,bit_errs,frame_errs,seed.
std::string sim_csv_header();
std::string sim_csv_row(const PointResult &point);

} // namespace ldgm

#endif
