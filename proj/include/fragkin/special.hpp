#pragma once

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <vector>

#include "fragkin/common.hpp"

namespace fragkin {

// Gamma(a)/Gamma(b) through log space.
inline double gamma_ratio(double a, double b) {
    return std::exp(std::lgamma(a) - std::lgamma(b));
}

// Regularized upper incomplete gamma Q(a, x) = P(Gamma(a,1) > x).
inline double gamma_q(double a, double x) { return boost::math::gamma_q(a, x); }

inline double digamma(double x) { return boost::math::digamma(x); }

struct MittagLefflerEval {
    double value = 0.0;
    bool asymptotic_regime = false;  // series abandoned, tail asymptotic used
    int terms = 0;
    double max_term = 0.0;
};

namespace detail {
// Shared alternating-series driver for the Mittag-Leffler density and its
// partial integrals. `power_shift` = 0 gives the density sum_i (-x)^{i-1}/i! G(gi+1) sin(pi g i);
// `power_shift` = k integrates x^k against it term by term on [0, x].
inline MittagLefflerEval ml_series(double gamma, double x, double tol, int power_shift) {
    MittagLefflerEval r;
    double sum = 0.0, comp = 0.0;  // Kahan
    const double log_x = std::log(x);
    double prev_mag = kInf;
    int i = 1;
    for (; i < 10000; ++i) {
        const double s = std::sin(M_PI * gamma * i);
        const int power = i - 1 + power_shift;
        // term magnitude in log space; the sign alternates through (-x)^{i-1}
        const double log_mag =
            power * log_x + std::lgamma(gamma * i + 1.0) - std::lgamma(i + 1.0);
        const double denom = power_shift > 0 ? static_cast<double>(power) : 1.0;
        double term = std::exp(log_mag) * s / denom;
        if ((i - 1) % 2 == 1) term = -term;
        const double mag = std::fabs(term);
        r.max_term = std::max(r.max_term, mag);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        // stop once terms decay below tolerance past the alternating hump
        const bool past_hump = mag <= prev_mag;
        if (i > 4 && past_hump && mag < tol * std::max(std::fabs(sum), 1e-300)) break;
        prev_mag = mag;
    }
    r.terms = i;
    r.value = sum / (M_PI * gamma);
    return r;
}
}  // namespace detail

// Density g_gamma of the Mittag-Leffler law (moments n!/Gamma(gamma n + 1)),
// by the alternating series, with a precision-budget guard: when catastrophic
// cancellation would leave fewer than ~2 correct digits the evaluation throws.
inline MittagLefflerEval mittag_leffler_density_eval(double gamma, double x,
                                                     double tol = 1e-12) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw domain_error("mittag_leffler: gamma not in ]0,1[");
    if (!(x > 0.0)) throw domain_error("mittag_leffler: x must be > 0");
    MittagLefflerEval r = detail::ml_series(gamma, x, tol, 0);
    if (r.max_term > 1e15 * std::max(std::fabs(r.value), 1e-280)) {
        if (r.max_term > 1e15) {
            throw series_error("mittag_leffler density: cancellation beyond precision budget",
                               r.max_term, r.value);
        }
        r.asymptotic_regime = true;
    }
    return r;
}

inline double mittag_leffler_density(double gamma, double x, double tol = 1e-12) {
    return mittag_leffler_density_eval(gamma, x, tol).value;
}

// int_0^x g_gamma(u) du, term-by-term.
inline double mittag_leffler_cdf(double gamma, double x, double tol = 1e-12) {
    if (x <= 0.0) return 0.0;
    MittagLefflerEval r = detail::ml_series(gamma, x, tol, 1);
    if (r.max_term > 1e15 * std::max(std::fabs(r.value), 1e-280) && r.max_term > 1e15)
        throw series_error("mittag_leffler cdf: cancellation beyond precision budget",
                           r.max_term, r.value);
    return r.value;
}

// int_0^x u g_gamma(u) du, term-by-term.
inline double mittag_leffler_partial_mean(double gamma, double x, double tol = 1e-12) {
    if (x <= 0.0) return 0.0;
    MittagLefflerEval r = detail::ml_series(gamma, x, tol, 2);
    if (r.max_term > 1e15 * std::max(std::fabs(r.value), 1e-280) && r.max_term > 1e15)
        throw series_error("mittag_leffler partial mean: cancellation beyond precision budget",
                           r.max_term, r.value);
    return r.value;
}

// Largest x at which the density series still has double-precision headroom.
inline double mittag_leffler_series_limit(double gamma) {
    // max term reaches ~1e15 where x^{i} G(gi+1)/i! peaks; solved numerically once
    double x = 1.0;
    while (x < 512.0) {
        MittagLefflerEval r = detail::ml_series(gamma, x * 1.25, 1e-12, 0);
        if (r.max_term > 1e13) break;
        x *= 1.25;
    }
    return x;
}

// Density of the exponential functional when B = a^{-1} delta_a (Poisson
// subordinator with unit rate and jumps of size -ln a):
//   k(x) = E_q sum_i (-1)^i q^i exp(-x q^i) / prod_{j<=i}(q^j - 1),
// with q = a^alpha > 1 and E_q = prod_{m>=1}(1 - q^{-m})^{-1}.
struct Example5Series {
    double q;                       // a^alpha > 1
    double normalizer;              // E_q
    std::vector<double> weights;    // (-1)^i q^i / Q_i, truncated below 1e-14 in relative size
    std::vector<double> tail_weights;  // (-1)^i / Q_i

    Example5Series(double a, double alpha, double weight_cutoff = 1e-16) {
        if (!(a > 0.0 && a < 1.0)) throw domain_error("example5 series: a not in ]0,1[");
        if (!(alpha < 0.0)) throw domain_error("example5 series: alpha must be < 0");
        q = std::pow(a, alpha);
        double e = 1.0;
        for (int m = 1; m < 4000; ++m) {
            const double f = 1.0 - std::pow(q, -m);
            e *= f;
            if (1.0 - f < 1e-18) break;
        }
        normalizer = 1.0 / e;
        double Qi = 1.0;
        double sign = 1.0;
        for (int i = 0; i < 5000; ++i) {
            if (i > 0) {
                const double factor = std::pow(q, i) - 1.0;
                if (factor <= 0.0) throw series_error("example5 series: q too close to 1", 0, 0);
                Qi *= factor;
                sign = -sign;
            }
            const double w = sign * std::pow(q, i) / Qi;
            if (std::fabs(w) < weight_cutoff && i > 2) break;
            weights.push_back(w);
            tail_weights.push_back(sign / Qi);
        }
    }

    double density(double x) const {
        double sum = 0.0, maxt = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            const double t = weights[i] * std::exp(-x * std::pow(q, static_cast<double>(i)));
            maxt = std::max(maxt, std::fabs(t));
            sum += t;
        }
        const double v = normalizer * sum;
        if (maxt * 1e-16 > std::max(std::fabs(sum), 1e-290) && maxt > 1e12)
            throw series_error("example5 density: alternating cancellation", maxt, v);
        return v;
    }

    // m_1(t) = int_t^inf k(x) dx, term-by-term (absolutely convergent).
    double tail(double t) const {
        double sum = 0.0;
        for (std::size_t i = 0; i < tail_weights.size(); ++i)
            sum += tail_weights[i] * std::exp(-t * std::pow(q, static_cast<double>(i)));
        return normalizer * sum;
    }
};

inline double example5_density(double a, double alpha, double x, int terms = 64) {
    Example5Series s(a, alpha);
    if (static_cast<int>(s.weights.size()) > terms)
        s.weights.resize(terms);
    return s.density(x);
}

}  // namespace fragkin
