#include <doctest.h>

#include <cmath>

#include "ldgm/analysis.hpp"
#include "ldgm/block_code.hpp"
#include "ldgm/rng.hpp"
#include "oracles.hpp"

using namespace ldgm;

TEST_CASE("rho_w closed form") {
    CHECK(rho_w(0.17, 1) == doctest::Approx(0.17).epsilon(1e-15));
    CHECK(rho_w(0.5, 7) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(rho_w(0.1, 2) == doctest::Approx(0.18).epsilon(1e-12));
    CHECK_THROWS(rho_w(0.1, 0));
    CHECK_THROWS(rho_w(0.7, 1));

    // Closed form equals the recursion rho_{w+1} = rho(1-rho_w) + rho_w(1-rho).
    for (double rho : {0.004, 0.05, 0.3}) {
        double rec = rho;
        for (std::uint64_t w = 1; w <= 10000; ++w) {
            const double closed = rho_w(rho, w);
            CHECK(std::abs(closed - rec) <= 1e-12 * std::max(1.0, std::abs(rec)));
            rec = rho * (1.0 - rec) + rec * (1.0 - rho);
        }
    }
}

TEST_CASE("irwef coefficients") {
    // n=6, k=3, rho=0.1, i=1, j=0: 3 * 0.9^3 = 2.187.
    CHECK(std::exp(log_irwef_coeff(6, 3, 0.1, 1, 0)) == doctest::Approx(2.187).epsilon(1e-12));
    CHECK_THROWS(log_irwef_coeff(6, 3, 0.1, 0, 0));
    CHECK_THROWS(log_irwef_coeff(6, 3, 0.1, 4, 0));
    CHECK_THROWS(log_irwef_coeff(6, 3, 0.1, 1, 4));

    // Row sums: sum_j A_ij = C(k,i); total mass: 1 + sum A_ij = 2^k.
    for (double rho : {0.05, 0.25}) {
        const std::size_t n = 14, k = 7;
        long double total = 1.0L;
        for (std::size_t i = 1; i <= k; ++i) {
            long double row = 0.0L;
            for (std::size_t j = 0; j <= n - k; ++j)
                row += std::exp(static_cast<long double>(log_irwef_coeff(n, k, rho, i, j)));
            long double choose = 1.0L;
            for (std::size_t t = 0; t < i; ++t)
                choose = choose * static_cast<long double>(k - t) / static_cast<long double>(t + 1);
            CHECK(static_cast<double>(row) == doctest::Approx(static_cast<double>(choose)).epsilon(1e-10));
            total += row;
        }
        CHECK(static_cast<double>(total) == doctest::Approx(128.0).epsilon(1e-10));
    }

    // Monte Carlo cross-check of one coefficient: count weight-(i,j)
    // codewords over sampled ensemble matrices.
    const std::size_t n = 10, k = 4, i_probe = 2, j_probe = 1;
    const double rho = 0.15;
    double mc = 0.0;
    const int samples = 20000;
    Rng rng(17);
    for (int s = 0; s < samples; ++s) {
        const auto P = gen_parity_matrix({n, k, rho, rng.next_u64()});
        const auto dense = ldgm_tests::to_dense(P);
        int count = 0;
        for (std::uint32_t u = 1; u < (1u << k); ++u) {
            if (static_cast<std::size_t>(__builtin_popcount(u)) != i_probe) continue;
            std::vector<std::uint8_t> ubits(k);
            for (std::size_t b = 0; b < k; ++b) ubits[b] = (u >> b) & 1u;
            const auto parity = ldgm_tests::dense_mul_left(ubits, dense);
            std::size_t wj = 0;
            for (auto b : parity) wj += b;
            if (wj == j_probe) ++count;
        }
        mc += count;
    }
    mc /= samples;
    const double expected = std::exp(log_irwef_coeff(n, k, rho, i_probe, j_probe));
    CHECK(mc == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("pairwise error probabilities") {
    // Normal-tail oracle via Simpson integration of the Gaussian density.
    auto q_oracle = [](double x) {
        return ldgm_tests::simpson(x, x + 45.0, 40000, [](double t) {
            return std::exp(-t * t / 2.0) / std::sqrt(2.0 * M_PI);
        });
    };
    CHECK(pep(ChannelModel::bi_awgn(1.0), 1) == doctest::Approx(0.1586552539).epsilon(1e-9));
    CHECK(pep(ChannelModel::bi_awgn(1.0), 1) == doctest::Approx(q_oracle(1.0)).epsilon(1e-9));
    CHECK(pep(ChannelModel::bi_awgn(0.5), 3) ==
          doctest::Approx(q_oracle(std::sqrt(3.0) / 0.5)).epsilon(1e-8));

    CHECK(pep(ChannelModel::bec(0.5), 3) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(pep(ChannelModel::bsc(0.07), 1) == doctest::Approx(0.07).epsilon(1e-15));
    CHECK(pep(ChannelModel::bsc(0.5), 4) == 1.0); // a useless channel ties everywhere
    CHECK_THROWS(pep(ChannelModel::bsc(0.1), 0));

    // BSC tail including ties, against direct enumeration over error patterns.
    for (std::uint64_t d : {2ull, 3ull, 5ull, 6ull}) {
        const double p = 0.11;
        double direct = 0.0;
        for (std::uint64_t mask = 0; mask < (1ull << d); ++mask) {
            const int flips = __builtin_popcountll(mask);
            if (2 * static_cast<std::uint64_t>(flips) >= d)
                direct += std::pow(p, flips) * std::pow(1.0 - p, static_cast<double>(d) - flips);
        }
        CHECK(pep(ChannelModel::bsc(p), d) == doctest::Approx(direct).epsilon(1e-12));
    }

    // Monotonicity in d (for the BSC only within a parity class: the full
    // tie mass at even d makes PEP(2k) exceed PEP(2k-1)) and Bhattacharyya
    // domination everywhere.
    for (const auto &ch : {ChannelModel::bec(0.4), ChannelModel::bi_awgn(0.9)}) {
        double prev = 1.0;
        for (std::uint64_t d = 1; d <= 40; ++d) {
            const double exact = pep(ch, d);
            CHECK(exact <= prev + 1e-15);
            CHECK(exact <= pep(ch, d, PepMethod::Bhattacharyya) + 1e-15);
            prev = exact;
        }
    }
    {
        const auto ch = ChannelModel::bsc(0.08);
        double prev_odd = 1.0, prev_even = 1.0;
        for (std::uint64_t d = 1; d <= 40; ++d) {
            const double exact = pep(ch, d);
            CHECK(exact <= pep(ch, d, PepMethod::Bhattacharyya) + 1e-15);
            double &prev = (d % 2) ? prev_odd : prev_even;
            CHECK(exact <= prev + 1e-15);
            prev = exact;
        }
    }
}

TEST_CASE("log q function is accurate across the switch point") {
    CHECK(log_q_func(0.0) == doctest::Approx(std::log(0.5)).epsilon(1e-14));
    for (double x : {1.0, 5.0, 20.0, 34.9, 35.1, 60.0, 150.0}) {
        // Oracle: integrate the normal tail in log space via Simpson on a
        // shifted window (the mass within [x, x+40/x] dominates).
        const double hi = x + 50.0 / std::max(1.0, x);
        const double integral = ldgm_tests::simpson(x, hi, 60000, [&](double t) {
            return std::exp(-(t * t - x * x) / 2.0); // scaled by e^{x^2/2}
        });
        const double log_q = -x * x / 2.0 + std::log(integral / std::sqrt(2.0 * M_PI));
        CHECK(log_q_func(x) == doctest::Approx(log_q).epsilon(1e-7));
    }
    // the erfc branch and the asymptotic branch agree where both work
    CHECK(std::log(q_func(36.0)) == doctest::Approx(log_q_func(36.0)).epsilon(1e-12));
}

namespace {

// Direct-arithmetic evaluation of the two-sum upper bound for tiny codes.
double brute_upper(std::size_t n, std::size_t k, double rho, const ChannelModel &ch) {
    auto choose = [](std::size_t a, std::size_t b) {
        double c = 1.0;
        for (std::size_t t = 0; t < b; ++t)
            c = c * static_cast<double>(a - t) / static_cast<double>(t + 1);
        return c;
    };
    const std::size_t r = n - k;
    const double q1 = pep(ch, 1);
    double best = 2.0;
    for (std::size_t rs = 0; rs <= k; ++rs) {
        double s1 = 0.0;
        for (std::size_t i = 1; i <= std::min(2 * rs, k); ++i) {
            const double ri = rho_w(rho, i);
            double inner = 0.0;
            for (std::size_t j = 0; j <= r; ++j)
                inner += choose(r, j) * std::pow(ri, static_cast<double>(j)) *
                         std::pow(1.0 - ri, static_cast<double>(r - j)) * pep(ch, i + j);
            s1 += static_cast<double>(i) / static_cast<double>(k) * choose(k, i) * inner;
        }
        double s2 = 0.0;
        for (std::size_t i = rs + 1; i <= k; ++i)
            s2 += static_cast<double>(std::min(i + rs, k)) / static_cast<double>(k) *
                  choose(k, i) * std::pow(q1, static_cast<double>(i)) *
                  std::pow(1.0 - q1, static_cast<double>(k - i));
        best = std::min(best, s1 + s2);
    }
    return best;
}

double brute_lower(std::size_t n, std::size_t k, double rho, const ChannelModel &ch) {
    auto choose = [](std::size_t a, std::size_t b) {
        double c = 1.0;
        for (std::size_t t = 0; t < b; ++t)
            c = c * static_cast<double>(a - t) / static_cast<double>(t + 1);
        return c;
    };
    const std::size_t r = n - k;
    double acc = 0.0;
    for (std::size_t w = 0; w <= r; ++w)
        acc += choose(r, w) * std::pow(rho, static_cast<double>(w)) *
               std::pow(1.0 - rho, static_cast<double>(r - w)) * pep(ch, w + 1);
    return acc;
}

} // namespace

TEST_CASE("map ber bounds agree with direct evaluation on small codes") {
    for (const auto &ch : {ChannelModel::bsc(0.05), ChannelModel::bi_awgn(0.8),
                           ChannelModel::bec(0.3)}) {
        for (double rho : {0.1, 0.3}) {
            const auto rep = ber_bounds(10, 4, rho, ch);
            CHECK(*rep.upper == doctest::Approx(brute_upper(10, 4, rho, ch)).epsilon(1e-10));
            CHECK(*rep.lower == doctest::Approx(brute_lower(10, 4, rho, ch)).epsilon(1e-10));
            // The printed bounds only sandwich on channels without tie mass;
            // on the BSC the even-weight ties can push the lower sum past
            // the uncoded upper term.
            if (ch.kind() != ChannelKind::Bsc) CHECK(*rep.lower <= *rep.upper + 1e-15);
        }
    }
}

TEST_CASE("bound ordering and the uncoded low-snr match") {
    // Across a sweep the exact-PEP bounds sandwich, and the upper bound can
    // never exceed the uncoded error rate PEP(1) (r*=0 realizes it).
    for (double ebn0 = -4.0; ebn0 <= 8.0; ebn0 += 1.0) {
        const auto ch = ChannelModel::bi_awgn_ebn0(ebn0, 0.5);
        const auto rep = ber_bounds(64, 32, 0.05, ch);
        CHECK(*rep.lower <= *rep.upper + 1e-15);
        CHECK(*rep.upper <= pep(ch, 1) + 1e-15);
        CHECK(*rep.upper >= 0.0);
        CHECK(*rep.upper <= 1.0);
    }
    // Deep in the noise the minimum is the uncoded term itself.
    const auto noisy = ChannelModel::bi_awgn(2.5);
    const auto rep = ber_upper_bound(64, 32, 0.05, noisy);
    CHECK(rep.r_star == 0);
    CHECK(*rep.upper == doctest::Approx(pep(noisy, 1)).epsilon(1e-12));
}

TEST_CASE("lower bound limits") {
    // rho -> 0 collapses the row-weight law onto weight one.
    const auto ch = ChannelModel::bi_awgn(0.7);
    CHECK(*ber_lower_bound(128, 64, 0.0, ch).lower == doctest::Approx(pep(ch, 1)).epsilon(1e-12));
    // Bhattacharyya mode dominates the exact mode.
    const auto exact = ber_lower_bound(128, 64, 0.02, ch);
    const auto bhat = ber_lower_bound(128, 64, 0.02, ch, PepMethod::Bhattacharyya);
    CHECK(*exact.lower <= *bhat.lower + 1e-15);
}

TEST_CASE("exhaustive ml monte carlo sits between the bounds on a small ensemble") {
    const std::size_t n = 16, k = 8;
    const double rho = 0.1;
    const auto ch = ChannelModel::bi_awgn_ebn0(5.0, 0.5);
    const double sigma = ch.param();
    const auto rep = ber_bounds(n, k, rho, ch);

    Rng rng(123);
    const int codes = 40, draws = 1500;
    double total_weight = 0.0;
    for (int s = 0; s < codes; ++s) {
        const auto P = gen_parity_matrix({n, k, rho, rng.next_u64()});
        for (int t = 0; t < draws; ++t) {
            std::vector<double> y(n);
            for (auto &v : y) v = 1.0 + sigma * rng.gauss();
            total_weight += ldgm_tests::ml_decode_weight(y, P);
        }
    }
    const double ber = total_weight / (static_cast<double>(codes) * draws * k);
    const double ci = 1.96 * std::sqrt(ber / (static_cast<double>(codes) * draws * k));
    CHECK(ber + 3 * ci >= *rep.lower);
    CHECK(ber - 3 * ci <= *rep.upper);
}

TEST_CASE("gallager exponent basics") {
    for (const auto &ch : {ChannelModel::bec(0.3), ChannelModel::bsc(0.11),
                           ChannelModel::bi_awgn(0.9)}) {
        CHECK(std::abs(error_exponent_e0(ch, 0.0)) < 1e-12);
        // positive exponent below capacity
        const double cap = capacity(ch);
        CHECK(random_coding_exponent(ch, 0.8 * cap) > 0.0);
        // at and above capacity the exponent collapses to zero
        CHECK(random_coding_exponent(ch, cap) == doctest::Approx(0.0).epsilon(1e-6));
        // golden-section refinement can only improve on the coarse grid
        double best_grid = 0.0;
        for (int g = 0; g <= 1000; ++g) {
            const double gamma = g / 1000.0;
            best_grid = std::max(best_grid, error_exponent_e0(ch, gamma) - gamma * 0.8 * cap);
        }
        CHECK(random_coding_exponent(ch, 0.8 * cap) >= best_grid - 1e-12);
    }
    CHECK_THROWS(error_exponent_e0(ChannelModel::bsc(0.1), 1.5));
}

TEST_CASE("awgn e0 matches a simpson oracle of the unfactored integrand") {
    const double sigma = 0.9, gamma = 0.5;
    const double s = 1.0 / (1.0 + gamma);
    auto pdf = [&](double y, double x) {
        return std::exp(-(y - x) * (y - x) / (2 * sigma * sigma)) /
               (sigma * std::sqrt(2 * M_PI));
    };
    const double integral = ldgm_tests::simpson(-16.0, 16.0, 40000, [&](double y) {
        return std::pow(0.5 * std::pow(pdf(y, 1.0), s) + 0.5 * std::pow(pdf(y, -1.0), s),
                        1.0 + gamma);
    });
    CHECK(error_exponent_e0(ChannelModel::bi_awgn(sigma), gamma) ==
          doctest::Approx(-std::log2(integral)).epsilon(1e-9));
}

TEST_CASE("finite-length exponent bound") {
    const auto ch = ChannelModel::bsc(0.02);
    const auto rep = er_bound(512, 256, 0.05, ch);
    CHECK(rep.rate == doctest::Approx(0.5));
    REQUIRE(!rep.entries.empty());
    // R~(T) decreases toward R and never goes below it.
    double prev = 2.0;
    for (const auto &e : rep.entries) {
        CHECK(e.r_tilde <= prev + 1e-15);
        CHECK(e.r_tilde >= rep.rate - 1e-12);
        prev = e.r_tilde;
    }
    // The optimum beats both endpoints of the scan.
    CHECK(rep.best_bound <= rep.entries.front().bound + 1e-15);
    CHECK(rep.entries.front().T == 1);
    const double at_k =
        256.0 / (512.0 * rep.rate) + std::exp2(-512.0 * rep.er_at_rate);
    CHECK(rep.best_bound <= at_k + 1e-15);
    // and the bound decreases with n for fixed (R, rho)
    const auto rep1024 = er_bound(1024, 512, 0.05, ch);
    const auto rep2048 = er_bound(2048, 1024, 0.05, ch);
    CHECK(rep1024.best_bound < rep.best_bound);
    CHECK(rep2048.best_bound < rep1024.best_bound);
}

TEST_CASE("bec density evolution") {
    SUBCASE("degenerate erasure rates") {
        const auto clean = de_bec(1024, 512, 0.012, 0.0);
        CHECK(clean.eta_star == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(clean.beta == doctest::Approx(0.0).epsilon(1e-12));
        const auto erased = de_bec(1024, 512, 0.012, 1.0);
        CHECK(erased.eta_star == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(erased.beta == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("trace is monotone and bounded, beta below alpha") {
        for (double alpha : {0.2, 0.45, 0.5, 0.8}) {
            const auto trace = de_bec(1024, 512, 0.012, alpha);
            double prev_eta = 1.0;
            for (const auto &step : trace.steps) {
                CHECK(step.eta <= prev_eta + 1e-15);
                CHECK(step.eta >= 0.0);
                CHECK(step.eta <= 1.0);
                CHECK(step.eps >= 0.0);
                CHECK(step.eps <= 1.0);
                prev_eta = step.eta;
            }
            CHECK(trace.beta <= alpha + 1e-15);
            CHECK(trace.converged);
        }
    }
    SUBCASE("beta is monotone in alpha") {
        double prev = -1.0;
        for (double alpha = 0.0; alpha <= 1.0001; alpha += 0.05) {
            const auto trace = de_bec(512, 256, 0.02, std::min(alpha, 1.0));
            CHECK(trace.beta >= prev - 1e-12);
            prev = trace.beta;
        }
    }
    CHECK_THROWS(de_bec(512, 256, 0.02, 1.5));
}
