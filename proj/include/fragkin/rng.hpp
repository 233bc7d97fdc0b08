#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "fragkin/common.hpp"

namespace fragkin {

// One independent stream per replicate; identical (seed, stream_id) reproduces
// identical draws bit-for-bit on one build.
struct RngPolicy {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97f4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
}  // namespace detail

// All samplers are hand-rolled on top of the raw engine so that draws do not
// depend on the standard library's distribution implementations.
class RngStream {
public:
    explicit RngStream(RngPolicy p) {
        std::uint64_t s = p.seed ^ 0xD1B54A32D192ED03ULL;
        (void)detail::splitmix64(s);
        s ^= p.stream_id * 0x9E3779B97f4A7C15ULL + 0x2545F4914F6CDD1DULL;
        std::seed_seq seq{static_cast<unsigned>(detail::splitmix64(s)),
                          static_cast<unsigned>(detail::splitmix64(s) >> 32),
                          static_cast<unsigned>(detail::splitmix64(s)),
                          static_cast<unsigned>(detail::splitmix64(s) >> 32)};
        engine_.seed(seq);
    }

    std::uint64_t raw() { return engine_(); }

    // Uniform on (0,1), both endpoints excluded.
    double u01() {
        const double u = (static_cast<double>(raw() >> 11) + 0.5) * 0x1.0p-53;
        return u;
    }

    double uniform(double a, double b) { return a + (b - a) * u01(); }

    double exponential(double rate = 1.0) { return -std::log(u01()) / rate; }

    double normal() {
        if (have_cache_) {
            have_cache_ = false;
            return cache_;
        }
        double u, v, s;
        do {
            u = 2.0 * u01() - 1.0;
            v = 2.0 * u01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        cache_ = v * f;
        have_cache_ = true;
        return u * f;
    }

    // Marsaglia-Tsang; shape < 1 boosted via Gamma(a) = Gamma(a+1) U^{1/a}.
    double gamma(double shape, double rate = 1.0) {
        if (shape < 1.0) {
            const double u = u01();
            return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = u01();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
        }
    }

    double beta(double a, double b) {
        const double x = gamma(a);
        const double y = gamma(b);
        return x / (x + y);
    }

    // Exact Poisson: sequential search for small means, PTRS (Hormann 1993)
    // transformed rejection for large ones.
    std::uint64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        if (mean < 30.0) {
            const double L = std::exp(-mean);
            std::uint64_t k = 0;
            double p = u01();
            while (p > L) {
                ++k;
                p *= u01();
            }
            return k;
        }
        const double b = 0.931 + 2.53 * std::sqrt(mean);
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double v_r = 0.9277 - 3.6224 / (b - 2.0);
        for (;;) {
            double u = u01() - 0.5;
            double v = u01();
            const double us = 0.5 - std::fabs(u);
            const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
            if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(k);
            if (k < 0.0 || (us < 0.013 && v > us)) continue;
            if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
                k * std::log(mean) - mean - std::lgamma(k + 1.0))
                return static_cast<std::uint64_t>(k);
        }
    }

    // Positive gamma-stable tau with E exp(-t tau) = exp(-t^gamma), gamma in
    // (0,1). Kanter / Chambers-Mallows-Stuck representation.
    double positive_stable(double gamma) {
        const double theta = uniform(0.0, 1.0) * M_PI;
        const double w = exponential();
        const double a = std::pow(std::sin(gamma * theta), gamma / (1.0 - gamma)) *
                         std::sin((1.0 - gamma) * theta) /
                         std::pow(std::sin(theta), 1.0 / (1.0 - gamma));
        return std::pow(a / w, (1.0 - gamma) / gamma);
    }

    // Mittag-Leffler law of order gamma: tau_gamma^{-gamma}; moments n!/Gamma(1+n gamma).
    double mittag_leffler(double gamma) {
        return std::pow(positive_stable(gamma), -gamma);
    }

    // Size-biased Mittag-Leffler: density proportional to x g_gamma(x).
    // Rejection against the plain law with the weight capped at `cap`
    // (the tail above the cap carries e^{-c cap^{1/(1-gamma)}} of the weight).
    double sized_biased_mittag_leffler(double gamma, double cap = 0.0) {
        if (cap <= 0.0) {
            // stretch the cap until the stretched-exponential tail is negligible
            const double c = (1.0 - gamma) * std::pow(gamma, gamma / (1.0 - gamma));
            cap = std::pow(80.0 / c, 1.0 - gamma);
        }
        for (;;) {
            const double x = mittag_leffler(gamma);
            if (x >= cap) continue;
            if (u01() * cap < x) return x;
        }
    }

private:
    std::mt19937_64 engine_;
    double cache_ = 0.0;
    bool have_cache_ = false;
};

inline RngStream make_stream(std::uint64_t seed, std::uint64_t stream_id) {
    return RngStream(RngPolicy{seed, stream_id});
}

}  // namespace fragkin
