#pragma once

#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fragkin/common.hpp"
#include "fragkin/measure.hpp"
#include "fragkin/quadrature.hpp"
#include "fragkin/rng.hpp"
#include "fragkin/special.hpp"
#include "fragkin/stats.hpp"

namespace fragkin {

// A named closed-form law with whatever evaluators it admits. cdf falls back
// to integrating the density when only that is available.
struct ExactLaw {
    std::string name;
    std::function<double(double)> density;           // may be empty
    std::function<double(double)> cdf;               // may be empty
    std::function<double(int)> moment;               // n -> E[X^n]
    std::function<double(RngStream&)> sample;        // may be empty

    bool has_density() const { return static_cast<bool>(density); }
    bool has_cdf() const { return static_cast<bool>(cdf); }
    bool has_sampler() const { return static_cast<bool>(sample); }

    double cdf_or_integrate(double x) const {
        if (cdf) return cdf(x);
        if (!density) throw domain_error("law " + name + ": no density or cdf");
        if (x <= 0.0) return 0.0;
        return integrate([&](double u) { return density(u); }, 0.0, x, 1e-9);
    }
};

inline ExactLaw gamma_law(double shape, double rate = 1.0) {
    ExactLaw law;
    law.name = "Gamma(" + std::to_string(shape) + "," + std::to_string(rate) + ")";
    law.density = [shape, rate](double x) {
        if (x <= 0.0) return 0.0;
        return std::exp(shape * std::log(rate) + (shape - 1.0) * std::log(x) - rate * x -
                        std::lgamma(shape));
    };
    law.cdf = [shape, rate](double x) { return x <= 0.0 ? 0.0 : 1.0 - gamma_q(shape, rate * x); };
    law.moment = [shape, rate](int n) { return gamma_ratio(shape + n, shape) / std::pow(rate, n); };
    law.sample = [shape, rate](RngStream& r) { return r.gamma(shape, rate); };
    return law;
}

inline ExactLaw beta_law(double p, double q) {
    ExactLaw law;
    law.name = "Beta(" + std::to_string(p) + "," + std::to_string(q) + ")";
    const double logB = std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q);
    law.density = [p, q, logB](double x) {
        if (x <= 0.0 || x >= 1.0) return 0.0;
        return std::exp((p - 1.0) * std::log(x) + (q - 1.0) * std::log1p(-x) - logB);
    };
    law.cdf = [p, q](double x) {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        return boost::math::ibeta(p, q, x);
    };
    law.moment = [p, q](int n) {
        return std::exp(std::lgamma(p + n) + std::lgamma(p + q) - std::lgamma(p) -
                        std::lgamma(p + q + n));
    };
    law.sample = [p, q](RngStream& r) { return r.beta(p, q); };
    return law;
}

// X = e(1)^p: cdf 1 - exp(-x^{1/p}), moments Gamma(1 + n p).
inline ExactLaw exp_power_law(double p) {
    ExactLaw law;
    law.name = "ExpPower(" + std::to_string(p) + ")";
    law.density = [p](double x) {
        if (x <= 0.0) return 0.0;
        const double y = std::pow(x, 1.0 / p);
        return (1.0 / p) * y / x * std::exp(-y);
    };
    law.cdf = [p](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(x, 1.0 / p)); };
    law.moment = [p](int n) { return std::tgamma(1.0 + n * p); };
    law.sample = [p](RngStream& r) { return std::pow(r.exponential(), p); };
    return law;
}

// tau_gamma^{-gamma}: density g_gamma by series, moments n!/Gamma(1 + n gamma).
inline ExactLaw mittag_leffler_law(double gamma) {
    ExactLaw law;
    law.name = "MittagLeffler(" + std::to_string(gamma) + ")";
    law.density = [gamma](double x) { return mittag_leffler_density(gamma, x); };
    law.cdf = [gamma](double x) { return x <= 0.0 ? 0.0 : mittag_leffler_cdf(gamma, x); };
    law.moment = [gamma](int n) {
        return std::exp(std::lgamma(n + 1.0) - std::lgamma(gamma * n + 1.0));
    };
    law.sample = [gamma](RngStream& r) { return r.mittag_leffler(gamma); };
    return law;
}

// tau_gamma^{e}: moments from E[tau^s] = Gamma(1 - s/gamma)/Gamma(1 - s), s < gamma.
inline ExactLaw stable_power_law(double gamma, double e) {
    ExactLaw law;
    law.name = "StablePower(" + std::to_string(gamma) + "," + std::to_string(e) + ")";
    law.moment = [gamma, e](int n) {
        const double s = n * e;
        if (s >= gamma) throw domain_error("StablePower: moment of order " + std::to_string(n) +
                                           " does not exist");
        return std::exp(std::lgamma(1.0 - s / gamma) - std::lgamma(1.0 - s));
    };
    law.sample = [gamma, e](RngStream& r) { return std::pow(r.positive_stable(gamma), e); };
    return law;
}

// X = scale * J with J the size-biased Mittag-Leffler law (density prop. to x g_gamma).
inline ExactLaw size_biased_mittag_leffler_law(double gamma, double scale) {
    ExactLaw law;
    law.name = "SizeBiasedMittagLeffler(" + std::to_string(gamma) + "," + std::to_string(scale) + ")";
    law.density = [gamma, scale](double x) {
        if (x <= 0.0) return 0.0;
        const double j = x / scale;
        return std::tgamma(1.0 + gamma) * j * mittag_leffler_density(gamma, j) / scale;
    };
    law.cdf = [gamma, scale](double x) {
        if (x <= 0.0) return 0.0;
        return std::tgamma(1.0 + gamma) * mittag_leffler_partial_mean(gamma, x / scale);
    };
    law.moment = [gamma, scale](int n) {
        return std::exp(n * std::log(scale) + std::lgamma(n + 2.0) + std::lgamma(1.0 + gamma) -
                        std::lgamma(1.0 + (n + 1.0) * gamma));
    };
    law.sample = [gamma, scale](RngStream& r) {
        return scale * r.sized_biased_mittag_leffler(gamma);
    };
    return law;
}

// X = scale * G^e with G ~ Gamma(shape, 1).
inline ExactLaw power_of_gamma_law(double shape, double e, double scale) {
    ExactLaw law;
    law.name = "PowerOfGamma(" + std::to_string(shape) + "," + std::to_string(e) + "," +
               std::to_string(scale) + ")";
    law.density = [shape, e, scale](double x) {
        if (x <= 0.0) return 0.0;
        const double g = std::pow(x / scale, 1.0 / e);
        const double jac = g / (e * x);
        return std::exp((shape - 1.0) * std::log(g) - g - std::lgamma(shape)) * jac;
    };
    law.cdf = [shape, e, scale](double x) {
        if (x <= 0.0) return 0.0;
        return 1.0 - gamma_q(shape, std::pow(x / scale, 1.0 / e));
    };
    law.moment = [shape, e, scale](int n) {
        return std::exp(n * std::log(scale) + std::lgamma(shape + n * e) - std::lgamma(shape));
    };
    law.sample = [shape, e, scale](RngStream& r) { return scale * std::pow(r.gamma(shape), e); };
    return law;
}

// The exponential functional of the Dirac measure B = a^{-1} delta_a: series
// density, exact sampler I = sum_i E_i q^{-i} (Poisson subordinator, unit rate).
inline ExactLaw example5_functional_law(double a, double alpha) {
    auto series = std::make_shared<Example5Series>(a, alpha);
    const double decay = std::pow(a, -alpha);  // a^{|alpha|} < 1
    ExactLaw law;
    law.name = "Example5Functional(a=" + std::to_string(a) + ")";
    law.density = [series](double x) { return series->density(x); };
    law.cdf = [series](double x) { return x <= 0.0 ? 0.0 : 1.0 - series->tail(x); };
    const double q = series->q;
    law.moment = [q](int n) {
        // n! / prod_{i<=n} (1 - q^{-i})
        double v = std::tgamma(n + 1.0);
        for (int i = 1; i <= n; ++i) v /= 1.0 - std::pow(q, -i);
        return v;
    };
    law.sample = [decay](RngStream& r) {
        double I = 0.0, w = 1.0;
        while (w > 1e-18) {
            I += w * r.exponential();
            w *= decay;
        }
        return I;
    };
    return law;
}

// The limit law mu_infty through R: moments(n) = phi(|alpha|) ... phi(n|alpha|).
struct LimitMeasure {
    double alpha = -1.0;
    std::function<double(int)> moments;              // E[R^n]
    std::optional<ExactLaw> law_r;                   // exact law of R when cataloged
    std::function<double(double)> u_inf;             // density of mu_infty when printed
    double qs_scale = 1.0;                           // lambda of the scaled family

    double moment_or_product(int n) const { return n == 0 ? 1.0 : moments(n); }
};

// E[I^n] = n! / (phi(|alpha|) phi(2|alpha|) ... phi(n|alpha|)).
inline double moments_of_I(const LaplaceExponentTable& tab, double alpha, int n) {
    if (n < 1) throw domain_error("moments_of_I: n must be >= 1");
    if (n > 170) throw domain_error("moments_of_I: factorial overflow beyond n = 170");
    const double aa = -alpha;
    double log_v = std::lgamma(n + 1.0);
    for (int i = 1; i <= n; ++i) {
        const double p = tab.phi(i * aa);
        if (!(p > 0.0)) throw domain_error("moments_of_I: phi(i|alpha|) must be > 0");
        log_v -= std::log(p);
    }
    const double v = std::exp(log_v);
    if (!std::isfinite(v)) throw domain_error("moments_of_I: result overflows double");
    return v;
}

inline LimitMeasure limit_measure(const LaplaceExponentTable& tab, double alpha) {
    LimitMeasure lm;
    lm.alpha = alpha;
    const double aa = -alpha;
    lm.moments = [tab, aa](int n) {
        double log_v = 0.0;
        for (int i = 1; i <= n; ++i) log_v += std::log(tab.phi(i * aa));
        return std::exp(log_v);
    };
    return lm;
}

struct FactorizationReport {
    std::vector<double> product_moments;  // E[(R I)^n], n = 1..4
    std::vector<double> product_se;
    std::vector<double> z;                // against n!
    double ks_against_exp1 = 0.0;
    std::uint64_t n_rep = 0;
};

// R I with independent factors should be Exp(1) (moments n!, cdf 1 - e^{-x}).
inline FactorizationReport factorization_check(const ExactLaw& law_i, const LimitMeasure& lim,
                                               std::uint64_t n_rep, std::uint64_t seed,
                                               int n_moments = 4) {
    if (!law_i.has_sampler() || !lim.law_r || !lim.law_r->has_sampler())
        throw domain_error("factorization_check: independent samplers required for I and R");
    std::vector<double> prod(n_rep);
    for (std::uint64_t r = 0; r < n_rep; ++r) {
        RngStream s = make_stream(seed, r);
        const double R = lim.law_r->sample(s);
        const double I = law_i.sample(s);
        prod[r] = R * I;
    }
    FactorizationReport rep;
    rep.n_rep = n_rep;
    for (int n = 1; n <= n_moments; ++n) {
        const MeanSE m = moment_se(std::span<const double>(prod), n);
        rep.product_moments.push_back(m.mean);
        rep.product_se.push_back(m.se);
        rep.z.push_back(zscore(m, std::tgamma(n + 1.0)));
    }
    rep.ks_against_exp1 = ks_distance(prod, [](double x) { return -std::expm1(-x); });
    return rep;
}

struct TailReport {
    bool tail_branch = false;         // beta > 0 comparison ran
    std::vector<double> grid_s;       // arguments s = t^{|alpha|}
    std::vector<double> neg_log_tail; // -ln P(R > s)
    std::vector<double> predicted;    // (beta/|alpha|) phi^{-1}(s)
    std::vector<double> ratio;
    bool bounded_branch = false;      // phi(inf) < inf
    double support_sup = 0.0;         // phi(inf)^{1/|alpha|}
    bool atom_at_sup = false;         // int^1 B(dx)/(1-x) < inf
    bool inconclusive = false;        // degenerate grid
};

inline TailReport tail_asymptotics_mu_inf(const LimitMeasure& lim, const LaplaceExponentTable& tab,
                                          double alpha, std::vector<double> grid_s = {3, 4, 5, 6},
                                          std::uint64_t mc_n = 200000, std::uint64_t seed = 17) {
    TailReport rep;
    const double aa = -alpha;
    const double pinf = tab.phi_infinity();
    const auto beta = tab.declared_beta();
    if (std::isfinite(pinf)) {
        rep.bounded_branch = true;
        rep.support_sup = std::pow(pinf, 1.0 / aa);
        rep.atom_at_sup = tab.measure().atom_criterion_finite();
        return rep;
    }
    if (!beta || !(*beta > 0.0 && *beta < 1.0))
        throw domain_error("tail_asymptotics: needs beta in ]0,1[ or phi(inf) < inf");
    rep.tail_branch = true;
    rep.grid_s = std::move(grid_s);
    if (rep.grid_s.size() < 2) {
        rep.inconclusive = true;
        return rep;
    }
    RateFunctions rf = rate_functions(tab);
    // tail of R: exact cdf when available, MC otherwise
    std::vector<double> sample;
    if (!(lim.law_r && lim.law_r->has_cdf())) {
        if (!(lim.law_r && lim.law_r->has_sampler()))
            throw domain_error("tail_asymptotics: no cdf or sampler for R");
        sample.resize(mc_n);
        for (std::uint64_t i = 0; i < mc_n; ++i) {
            RngStream s = make_stream(seed, i);
            sample[i] = lim.law_r->sample(s);
        }
    }
    for (double s : rep.grid_s) {
        double tail;
        if (sample.empty()) {
            tail = 1.0 - lim.law_r->cdf(s);
        } else {
            std::size_t c = 0;
            for (double v : sample)
                if (v > s) ++c;
            tail = static_cast<double>(c) / static_cast<double>(mc_n);
        }
        const double neg_log = -std::log(tail);
        const double pred = (*beta / aa) * rf.phi_inverse(s);
        rep.neg_log_tail.push_back(neg_log);
        rep.predicted.push_back(pred);
        rep.ratio.push_back(neg_log / pred);
    }
    return rep;
}

}  // namespace fragkin
