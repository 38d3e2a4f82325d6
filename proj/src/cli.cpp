#include "ldgm/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ldgm/analysis.hpp"
#include "ldgm/block_code.hpp"
#include "ldgm/channel.hpp"
#include "ldgm/ensemble.hpp"
#include "ldgm/sc_code.hpp"
#include "ldgm/sim.hpp"

namespace ldgm {

namespace {

struct SweepSpec {
    std::string family;        // bec | bsc | awgn-sigma | awgn-ebn0
    std::vector<double> xs;    // one value or an inclusive start:stop:step range
};

SweepSpec parse_sweep_spec(const std::string &spec) {
    SweepSpec out;
    std::vector<std::string> parts;
    std::string token;
    std::istringstream is(spec);
    while (std::getline(is, token, ':')) parts.push_back(token);
    if (parts.size() != 2 && parts.size() != 4)
        throw std::invalid_argument("channel spec '" + spec +
                                    "': expected family:value or family:start:stop:step");
    out.family = parts[0];
    std::vector<double> nums;
    for (std::size_t i = 1; i < parts.size(); ++i) {
        try {
            nums.push_back(std::stod(parts[i]));
        } catch (const std::exception &) {
            throw std::invalid_argument("channel spec '" + spec + "': bad number '" + parts[i] +
                                        "'");
        }
    }
    if (nums.size() == 1) {
        out.xs.push_back(nums[0]);
    } else {
        const double start = nums[0], stop = nums[1], step = nums[2];
        if (step <= 0.0 || stop < start)
            throw std::invalid_argument("channel spec '" + spec + "': bad range");
        const auto count = static_cast<std::size_t>((stop - start) / step + 1e-9) + 1;
        for (std::size_t i = 0; i < count; ++i) out.xs.push_back(start + static_cast<double>(i) * step);
    }
    return out;
}

ChannelModel channel_at(const std::string &family, double x, double rate) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s:%.17g", family.c_str(), x);
    return parse_channel_spec(buf, rate);
}

BitVec read_bits_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open bits file: " + path);
    BitVec bits;
    char c;
    while (in.get(c)) {
        if (c == '0') bits.push_back(0);
        else if (c == '1') bits.push_back(1);
        else if (c == '\n' || c == '\r' || c == ' ' || c == '\t') continue;
        else throw std::runtime_error("bits file '" + path + "': unexpected character");
    }
    return bits;
}

void write_bits_file(const BitVec &bits, const std::string &path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (auto b : bits) out << (b ? '1' : '0');
    out << "\n";
}

LlrWord read_llr_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open LLR file: " + path);
    LlrWord word;
    double v;
    while (in >> v) word.values.push_back(v);
    if (!in.eof()) throw std::runtime_error("LLR file '" + path + "': bad numeric value");
    return word;
}

std::unique_ptr<std::ostream> open_output(const std::string &path, std::ostream *&out) {
    if (path.empty() || path == "-") {
        out = &std::cout;
        return nullptr;
    }
    auto file = std::make_unique<std::ofstream>(path);
    if (!*file) throw std::runtime_error("cannot open for writing: " + path);
    out = file.get();
    return file;
}

// Code selection shared by encode/decode: either a block matrix file or the
// list of split layer files plus coupling parameters.
struct CodeSelection {
    std::string matrix;
    std::vector<std::string> layer_files;
    std::size_t L = 1;
    std::string mode = "terminated";
    std::uint64_t fallback_seed = 0;

    bool coupled() const { return !layer_files.empty(); }

    BlockCode load_block() const {
        SparseBitMatrix P = read_matrix_file(matrix);
        EnsembleParams params{P.rows() + P.cols(), P.rows(), 0.5, fallback_seed};
        return BlockCode(params, std::move(P));
    }

    ScCode load_sc() const {
        std::vector<SparseBitMatrix> layers;
        for (const auto &f : layer_files) layers.push_back(read_matrix_file(f));
        SparseBitMatrix P = layers[0];
        // Base matrix is the XOR of the layers (supports are disjoint).
        std::vector<std::vector<std::uint32_t>> merged(P.rows());
        for (std::size_t i = 0; i < P.rows(); ++i) {
            for (const auto &layer : layers)
                merged[i].insert(merged[i].end(), layer.row(i).begin(), layer.row(i).end());
            std::sort(merged[i].begin(), merged[i].end());
        }
        SparseBitMatrix base(P.rows(), P.cols(), std::move(merged));
        EnsembleParams params{base.rows() + base.cols(), base.rows(), 0.5, fallback_seed};
        CouplingParams coupling;
        coupling.m = layer_files.size() - 1;
        coupling.L = L;
        coupling.mode = mode == "tail_biting" ? CouplingMode::TailBiting
                                              : CouplingMode::Terminated;
        return ScCode(BlockCode(params, std::move(base)), std::move(layers), coupling);
    }
};

std::string timestamp_comment() {
    char buf[64];
    const std::time_t now = std::time(nullptr);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return std::string("# generated ") + buf;
}

int cmd_gen(std::size_t n, std::size_t k, double rho, std::uint64_t seed,
            const std::string &out_path) {
    EnsembleParams params{n, k, rho, seed};
    write_matrix_file(gen_parity_matrix(params), out_path);
    return 0;
}

int cmd_split(const std::string &matrix, std::size_t m, std::uint64_t split_seed,
              const std::string &prefix) {
    SparseBitMatrix P = read_matrix_file(matrix);
    CouplingParams coupling;
    coupling.m = m;
    coupling.L = m + 1; // only m matters for splitting
    coupling.split_seed = split_seed;
    auto layers = split_matrix(P, coupling);
    for (std::size_t ell = 0; ell < layers.size(); ++ell)
        write_matrix_file(layers[ell], prefix + "." + std::to_string(ell));
    return 0;
}

int cmd_encode(const CodeSelection &sel, const std::string &in_path,
               const std::string &out_path) {
    const BitVec u = read_bits_file(in_path);
    if (sel.coupled()) {
        ScCode code = sel.load_sc();
        write_bits_file(encode_sc(u, code), out_path);
    } else {
        BlockCode code = sel.load_block();
        write_bits_file(encode_block(u, code), out_path);
    }
    return 0;
}

int cmd_decode(const CodeSelection &sel, const std::string &llr_path, int i_max, int j_max,
               int window, double eps, const std::string &out_path,
               const std::string &app_path) {
    const LlrWord llr = read_llr_file(llr_path);
    BitVec bits;
    std::vector<double> app;
    if (sel.coupled()) {
        ScCode code = sel.load_sc();
        ScDecodeOptions opt;
        opt.j_max = j_max;
        opt.d = window;
        opt.entropy_eps = eps;
        const auto outcomes = decode_sc(split_frame_llrs(llr, code), code, opt);
        for (const auto &o : outcomes) {
            bits.insert(bits.end(), o.bits.begin(), o.bits.end());
            app.insert(app.end(), o.app.begin(), o.app.end());
        }
    } else {
        BlockCode code = sel.load_block();
        DecodeOutcome outcome = decode_block(llr, code, i_max);
        bits = outcome.bits;
        app = outcome.app;
    }
    write_bits_file(bits, out_path);
    if (!app_path.empty()) {
        std::ofstream out(app_path);
        if (!out) throw std::runtime_error("cannot open for writing: " + app_path);
        char buf[40];
        for (double v : app) {
            std::snprintf(buf, sizeof buf, "%.10g\n", v);
            out << buf;
        }
    }
    return 0;
}

} // namespace

int cli_dispatch(const std::vector<std::string> &args) {
    CLI::App app{"Systematic LDGM / convolutional LDGM workbench", "ldgm"};
    app.require_subcommand(1);

    // --- gen ---
    auto *gen = app.add_subcommand("gen", "Sample a parity-generator matrix and write it");
    std::size_t g_n = 0, g_k = 0;
    double g_rho = 0.0;
    std::uint64_t g_seed = 1;
    std::string g_out;
    gen->add_option("--n", g_n, "code length")->required();
    gen->add_option("--k", g_k, "dimension")->required();
    gen->add_option("--rho", g_rho, "entry probability")->required();
    gen->add_option("--seed", g_seed, "PRNG seed");
    gen->add_option("--out", g_out, "output matrix file")->required();

    // --- split ---
    auto *split = app.add_subcommand("split", "Split a matrix into coupling layers");
    std::string s_matrix, s_prefix;
    std::size_t s_m = 0;
    std::uint64_t s_seed = 1;
    split->add_option("--matrix", s_matrix, "input matrix file")->required();
    split->add_option("--m", s_m, "coupling memory")->required();
    split->add_option("--split-seed", s_seed, "splitting seed");
    split->add_option("--out-prefix", s_prefix, "layer files are written to <prefix>.<l>")
        ->required();

    auto add_code_selection = [](CLI::App *cmd, CodeSelection &sel) {
        cmd->add_option("--matrix", sel.matrix, "block parity-generator matrix file");
        cmd->add_option("--layers", sel.layer_files,
                        "coupling layer matrix files P_0..P_m (comma separated)")
            ->delimiter(',');
        cmd->add_option("--L", sel.L, "data block count (coupled mode)");
        cmd->add_option("--mode", sel.mode, "terminated|tail_biting")
            ->check(CLI::IsMember({"terminated", "tail_biting"}));
    };

    // --- encode ---
    auto *encode = app.add_subcommand("encode", "Encode one frame from a bits file");
    CodeSelection e_sel;
    std::string e_in, e_out;
    add_code_selection(encode, e_sel);
    encode->add_option("--in", e_in, "information bits file")->required();
    encode->add_option("--out", e_out, "codeword bits file")->required();

    // --- decode ---
    auto *decode = app.add_subcommand("decode", "Decode one frame from an LLR file");
    CodeSelection d_sel;
    std::string d_llr, d_out, d_app;
    int d_imax = 50, d_jmax = 18, d_window = -1;
    double d_eps = 1e-5;
    add_code_selection(decode, d_sel);
    decode->add_option("--llr", d_llr, "channel LLR file")->required();
    decode->add_option("--imax", d_imax, "block decoder iterations");
    decode->add_option("--jmax", d_jmax, "coupled decoder global iterations");
    decode->add_option("--window", d_window, "window delay d (-1: 2m)");
    decode->add_option("--epsilon", d_eps, "entropy stopping threshold");
    decode->add_option("--out", d_out, "decided information bits file")->required();
    decode->add_option("--app", d_app, "optional APP LLR output file");

    // --- simulate ---
    auto *simulate = app.add_subcommand("simulate", "Monte Carlo BER/FER sweep");
    std::size_t si_n = 0, si_k = 0, si_L = 0, si_m = 0;
    double si_rho = 0.0;
    std::uint64_t si_code_seed = 1, si_split_seed = 1, si_master = 1;
    std::string si_mode = "terminated", si_channel, si_out, si_meta;
    std::uint64_t si_min_fe = 100, si_max_frames = 1000000;
    int si_imax = 50, si_jmax = 18, si_window = -1;
    double si_eps = 1e-5;
    bool si_random_data = false;
    unsigned si_workers = 0;
    simulate->add_option("--n", si_n, "code length")->required();
    simulate->add_option("--k", si_k, "dimension")->required();
    simulate->add_option("--rho", si_rho, "entry probability")->required();
    simulate->add_option("--code-seed", si_code_seed, "matrix sampling seed");
    simulate->add_option("--L", si_L, "data block count; enables coupled mode");
    simulate->add_option("--m", si_m, "coupling memory");
    simulate->add_option("--mode", si_mode, "terminated|tail_biting")
        ->check(CLI::IsMember({"terminated", "tail_biting"}));
    simulate->add_option("--split-seed", si_split_seed, "layer splitting seed");
    simulate
        ->add_option("--channel", si_channel,
                     "channel sweep, e.g. bec:0.40:0.50:0.01 or awgn-ebn0:0:8:0.5 (dB; sigma "
                     "uses the total code rate)")
        ->required();
    simulate->add_option("--imax", si_imax, "block decoder iterations");
    simulate->add_option("--jmax", si_jmax, "coupled decoder global iterations");
    simulate->add_option("--window", si_window, "window delay d (-1: 2m)");
    simulate->add_option("--epsilon", si_eps, "entropy stopping threshold");
    simulate->add_option("--min-fe", si_min_fe, "stop a point after this many frame errors");
    simulate->add_option("--max-frames", si_max_frames, "frame cap per point");
    simulate->add_option("--seed", si_master, "master seed");
    simulate->add_option("--out", si_out, "CSV output file (default stdout)");
    simulate->add_option("--json-meta", si_meta, "write the resolved config as JSON");
    simulate->add_flag("--random-data", si_random_data,
                       "encode random data instead of the all-zero codeword");
    simulate->add_option("--workers", si_workers,
                         "worker threads (0: auto, env LDGM_WORKERS overrides)");

    // --- bounds ---
    auto *bounds = app.add_subcommand("bounds", "MAP BER bounds over a channel sweep");
    std::size_t b_n = 0, b_k = 0;
    double b_rho = 0.0;
    std::string b_channel, b_out, b_method = "exact";
    bounds->add_option("--n", b_n, "code length")->required();
    bounds->add_option("--k", b_k, "dimension")->required();
    bounds->add_option("--rho", b_rho, "entry probability")->required();
    bounds->add_option("--channel", b_channel, "channel sweep spec")->required();
    bounds->add_option("--method", b_method, "exact|bhattacharyya")
        ->check(CLI::IsMember({"exact", "bhattacharyya"}));
    bounds->add_option("--out", b_out, "CSV output file (default stdout)");

    // --- de ---
    auto *de = app.add_subcommand("de", "BEC density evolution");
    std::size_t de_n = 0, de_k = 0;
    double de_rho = 0.0, de_tol = 1e-12;
    std::size_t de_max_iter = 100000;
    std::string de_alpha, de_out;
    de->add_option("--n", de_n, "code length")->required();
    de->add_option("--k", de_k, "dimension")->required();
    de->add_option("--rho", de_rho, "entry probability")->required();
    de->add_option("--alpha", de_alpha, "erasure probability or start:stop:step")->required();
    de->add_option("--tol", de_tol, "fixed point tolerance");
    de->add_option("--max-iter", de_max_iter, "iteration cap");
    de->add_option("--out", de_out, "CSV output file (default stdout)");

    // --- capacity ---
    auto *capacity_cmd = app.add_subcommand("capacity", "Print the channel capacity (bits/use)");
    std::string c_spec;
    double c_rate = 0.5;
    capacity_cmd->add_option("spec", c_spec, "channel spec, e.g. bec:0.3")->required();
    capacity_cmd->add_option("--rate", c_rate, "code rate for awgn-ebn0 conversion");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    }

    try {
        if (*gen) return cmd_gen(g_n, g_k, g_rho, g_seed, g_out);
        if (*split) return cmd_split(s_matrix, s_m, s_seed, s_prefix);
        if (*encode) {
            if (e_sel.matrix.empty() == e_sel.layer_files.empty())
                throw std::invalid_argument("encode: give exactly one of --matrix or --layers");
            return cmd_encode(e_sel, e_in, e_out);
        }
        if (*decode) {
            if (d_sel.matrix.empty() == d_sel.layer_files.empty())
                throw std::invalid_argument("decode: give exactly one of --matrix or --layers");
            return cmd_decode(d_sel, d_llr, d_imax, d_jmax, d_window, d_eps, d_out, d_app);
        }
        if (*simulate) {
            SimConfig cfg;
            cfg.code = EnsembleParams{si_n, si_k, si_rho, si_code_seed};
            if (si_L > 0) {
                CouplingParams coupling;
                coupling.m = si_m;
                coupling.L = si_L;
                coupling.mode = si_mode == "tail_biting" ? CouplingMode::TailBiting
                                                         : CouplingMode::Terminated;
                coupling.split_seed = si_split_seed;
                cfg.coupling = coupling;
            }
            double rate = static_cast<double>(si_k) / static_cast<double>(si_n);
            if (cfg.coupling && cfg.coupling->mode == CouplingMode::Terminated) {
                const double num = static_cast<double>(si_k * si_L);
                const double den =
                    static_cast<double>(si_n * si_L + si_m * (si_n - si_k));
                rate = num / den;
            }
            const SweepSpec sweep = parse_sweep_spec(si_channel);
            for (double x : sweep.xs)
                cfg.sweep.push_back({x, channel_at(sweep.family, x, rate)});
            cfg.policy = {si_min_fe, si_max_frames};
            cfg.caps = {si_imax, si_jmax, si_window, si_eps};
            cfg.master_seed = si_master;
            cfg.random_data = si_random_data;
            cfg.workers = si_workers;
            if (cfg.workers == 0) {
                if (const char *env = std::getenv("LDGM_WORKERS"))
                    cfg.workers = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
            }
            cfg.validate();

            if (!si_meta.empty()) {
                nlohmann::json meta;
                meta["code"] = {{"n", si_n}, {"k", si_k}, {"rho", si_rho}, {"seed", si_code_seed}};
                if (cfg.coupling)
                    meta["coupling"] = {{"m", si_m},
                                        {"L", si_L},
                                        {"mode", si_mode},
                                        {"split_seed", si_split_seed}};
                meta["channel"] = {{"family", sweep.family}, {"points", sweep.xs}};
                meta["rate"] = rate;
                meta["policy"] = {{"min_frame_errors", si_min_fe}, {"max_frames", si_max_frames}};
                meta["decoder"] = {{"i_max", si_imax},
                                   {"j_max", si_jmax},
                                   {"window", si_window},
                                   {"entropy_eps", si_eps}};
                meta["master_seed"] = si_master;
                meta["random_data"] = si_random_data;
                meta["workers"] = cfg.workers;
                meta["csv_columns"] = sim_csv_header();
                std::ofstream mf(si_meta);
                if (!mf) throw std::runtime_error("cannot open for writing: " + si_meta);
                mf << meta.dump(2) << "\n";
            }

            std::ostream *out = nullptr;
            auto holder = open_output(si_out, out);
            *out << timestamp_comment() << "\n" << sim_csv_header() << "\n" << std::flush;
            run_sweep(cfg, [&](const PointResult &p) { *out << sim_csv_row(p) << "\n" << std::flush; });
            return 0;
        }
        if (*bounds) {
            const PepMethod method =
                b_method == "bhattacharyya" ? PepMethod::Bhattacharyya : PepMethod::ExactPep;
            const SweepSpec sweep = parse_sweep_spec(b_channel);
            const double rate = static_cast<double>(b_k) / static_cast<double>(b_n);
            std::ostream *out = nullptr;
            auto holder = open_output(b_out, out);
            *out << "x_value,lower,upper,r_star\n";
            char buf[160];
            for (double x : sweep.xs) {
                const ChannelModel ch = channel_at(sweep.family, x, rate);
                const BoundsReport rep = ber_bounds(b_n, b_k, b_rho, ch, method);
                std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%d\n", x, *rep.lower,
                              *rep.upper, rep.r_star);
                *out << buf;
            }
            return 0;
        }
        if (*de) {
            std::vector<double> alphas;
            {
                // reuse sweep parsing by prefixing a pseudo family
                const SweepSpec sweep = parse_sweep_spec("bec:" + de_alpha);
                alphas = sweep.xs;
            }
            std::ostream *out = nullptr;
            auto holder = open_output(de_out, out);
            *out << "alpha,beta,iters\n";
            char buf[120];
            for (double alpha : alphas) {
                const DeTrace trace = de_bec(de_n, de_k, de_rho, alpha, de_tol, de_max_iter);
                std::snprintf(buf, sizeof buf, "%.10g,%.10g,%zu\n", alpha, trace.beta,
                              trace.iterations);
                *out << buf;
            }
            return 0;
        }
        if (*capacity_cmd) {
            const ChannelModel ch = parse_channel_spec(c_spec, c_rate);
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.10g\n", capacity(ch));
            std::cout << buf;
            return 0;
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "error: no subcommand selected\n";
    return 1;
}

} // namespace ldgm
