#include "ldgm/channel.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "ldgm/quadrature.hpp"
#include "ldgm/rng.hpp"

namespace ldgm {

namespace {
constexpr std::size_t QUAD_ORDER = 127;

double log2_1p_exp(double x) {
    // log2(1 + e^x), stable for both signs.
    if (x > 0) return (x + std::log1p(std::exp(-x))) * 1.4426950408889634;
    return std::log1p(std::exp(x)) * 1.4426950408889634;
}
} // namespace

ChannelModel ChannelModel::bec(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("bec: need 0 <= alpha <= 1");
    return ChannelModel(ChannelKind::Bec, alpha);
}

ChannelModel ChannelModel::bsc(double p) {
    if (!(p >= 0.0 && p <= 0.5)) throw std::invalid_argument("bsc: need 0 <= p <= 1/2");
    return ChannelModel(ChannelKind::Bsc, p);
}

ChannelModel ChannelModel::bi_awgn(double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("awgn: need sigma > 0");
    return ChannelModel(ChannelKind::BiAwgn, sigma);
}

ChannelModel ChannelModel::bi_awgn_ebn0(double ebn0_db, double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("awgn-ebn0: need rate > 0");
    const double sigma2 = 1.0 / (2.0 * rate * std::pow(10.0, ebn0_db / 10.0));
    return bi_awgn(std::sqrt(sigma2));
}

std::string ChannelModel::spec_string() const {
    char buf[64];
    switch (kind_) {
        case ChannelKind::Bec: std::snprintf(buf, sizeof buf, "bec:%g", param_); break;
        case ChannelKind::Bsc: std::snprintf(buf, sizeof buf, "bsc:%g", param_); break;
        case ChannelKind::BiAwgn: std::snprintf(buf, sizeof buf, "awgn-sigma:%g", param_); break;
    }
    return buf;
}

LlrWord transmit(const BitVec &c, const ChannelModel &ch, std::uint64_t seed) {
    Rng rng(seed);
    LlrWord out;
    out.values.resize(c.size());
    switch (ch.kind()) {
        case ChannelKind::Bec: {
            const double alpha = ch.param();
            for (std::size_t t = 0; t < c.size(); ++t)
                out.values[t] = rng.bernoulli(alpha) ? 0.0 : (c[t] ? -LLR_MAX : LLR_MAX);
            break;
        }
        case ChannelKind::Bsc: {
            const double p = ch.param();
            const double delta = p <= 0.0 ? LLR_MAX : clamp_llr(std::log((1.0 - p) / p));
            for (std::size_t t = 0; t < c.size(); ++t) {
                const std::uint8_t y = c[t] ^ static_cast<std::uint8_t>(rng.bernoulli(p));
                out.values[t] = y ? -delta : delta;
            }
            break;
        }
        case ChannelKind::BiAwgn: {
            const double sigma = ch.param();
            const double scale = 2.0 / (sigma * sigma);
            for (std::size_t t = 0; t < c.size(); ++t) {
                const double x = c[t] ? -1.0 : 1.0;
                const double y = x + sigma * rng.gauss();
                out.values[t] = clamp_llr(scale * y);
            }
            break;
        }
    }
    return out;
}

double bhattacharyya(const ChannelModel &ch) {
    switch (ch.kind()) {
        case ChannelKind::Bec: return ch.param();
        case ChannelKind::Bsc: {
            const double p = ch.param();
            return 2.0 * std::sqrt(p * (1.0 - p));
        }
        case ChannelKind::BiAwgn: {
            const double sigma = ch.param();
            return std::exp(-1.0 / (2.0 * sigma * sigma));
        }
    }
    return 0.0;
}

double capacity(const ChannelModel &ch) {
    switch (ch.kind()) {
        case ChannelKind::Bec: return 1.0 - ch.param();
        case ChannelKind::Bsc: {
            const double p = ch.param();
            if (p == 0.0) return 1.0;
            return 1.0 + p * std::log2(p) + (1.0 - p) * std::log2(1.0 - p);
        }
        case ChannelKind::BiAwgn: {
            // C = 1 - E_{y~N(1,sigma^2)}[ log2(1 + exp(-2y/sigma^2)) ].
            const double sigma = ch.param();
            const double scale = 2.0 / (sigma * sigma);
            const double loss = gauss_expectation(
                [&](double y) { return log2_1p_exp(-scale * y); }, 1.0, sigma, QUAD_ORDER);
            return 1.0 - loss;
        }
    }
    return 0.0;
}

ChannelModel parse_channel_spec(const std::string &spec, double rate) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("channel spec: expected '<family>:<value>' in '" + spec + "'");
    const std::string family = spec.substr(0, colon);
    double value = 0.0;
    try {
        value = std::stod(spec.substr(colon + 1));
    } catch (const std::exception &) {
        throw std::invalid_argument("channel spec: bad numeric value in '" + spec + "'");
    }
    if (family == "bec") return ChannelModel::bec(value);
    if (family == "bsc") return ChannelModel::bsc(value);
    if (family == "awgn-sigma") return ChannelModel::bi_awgn(value);
    if (family == "awgn-ebn0") return ChannelModel::bi_awgn_ebn0(value, rate);
    throw std::invalid_argument("channel spec: unknown family '" + family + "'");
}

} // namespace ldgm
