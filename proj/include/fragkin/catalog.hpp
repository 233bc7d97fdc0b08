#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "fragkin/families.hpp"
#include "fragkin/laws.hpp"
#include "fragkin/measure.hpp"
#include "fragkin/special.hpp"

namespace fragkin {

// Everything the example catalog knows about one worked example: the
// fragmentation measure, the exact laws of I and R, the limit density when
// printed, and the delta_1 mass curve m_1(t) = P(I > t) when printed.
struct CatalogBundle {
    int example_id = 0;
    FragmentationMeasure measure;
    LaplaceExponentTable table;
    ExactLaw law_i;
    LimitMeasure limit;
    std::function<double(double)> m1;  // may be empty

    bool has_m1() const { return static_cast<bool>(m1); }
};

struct CatalogParams {
    double alpha = -1.0;
    double b = 2.0;        // example 1
    double gamma = 0.5;    // examples 2, 3
    double a = 0.5;        // example 5
    bool exact_laws = true;  // example 2 kill correction
};

inline CatalogBundle catalog(int example_id, const CatalogParams& p) {
    const double alpha = p.alpha;
    if (!(alpha < 0.0)) throw construction_error("catalog: alpha must be < 0");
    const double aa = -alpha;
    switch (example_id) {
        case 1: {
            if (!(p.b > 0.0)) throw construction_error("catalog example 1: b must be > 0");
            FragmentationMeasure m = make_example1(p.b, alpha);
            LaplaceExponentTable tab(m);
            const double k = p.b / aa;  // I ~ Gamma(k+1, 1), R ~ Beta(1, k)
            LimitMeasure lim = limit_measure(tab, alpha);
            lim.law_r = beta_law(1.0, k);
            const double b_ = p.b;
            lim.u_inf = [b_, aa](double x) {
                if (x <= 0.0 || x >= 1.0) return 0.0;
                return b_ * std::pow(x, aa - 2.0) * std::pow(1.0 - std::pow(x, aa), b_ / aa - 1.0);
            };
            CatalogBundle c{1, m, tab, gamma_law(k + 1.0, 1.0), lim,
                            [k](double t) { return t <= 0.0 ? 1.0 : gamma_q(k + 1.0, t); }};
            return c;
        }
        case 2: {
            FragmentationMeasure m = make_example2(p.gamma, alpha, p.exact_laws);
            LaplaceExponentTable tab(m);
            const double g = p.gamma;
            LimitMeasure lim = limit_measure(tab, alpha);
            lim.law_r = exp_power_law(g);
            lim.u_inf = [g, aa](double x) {
                if (x <= 0.0) return 0.0;
                return (aa / g) * std::pow(x, aa / g - 2.0) * std::exp(-std::pow(x, aa / g));
            };
            CatalogBundle c{2, m, tab, mittag_leffler_law(g), lim,
                            [g](double t) { return t <= 0.0 ? 1.0 : 1.0 - mittag_leffler_cdf(g, t); }};
            return c;
        }
        case 3: {
            FragmentationMeasure m = make_example3(p.gamma, alpha);
            LaplaceExponentTable tab(m);
            const double g = p.gamma;
            LimitMeasure lim = limit_measure(tab, alpha);
            lim.law_r = mittag_leffler_law(1.0 - g);
            lim.u_inf = [g, aa](double x) {
                if (x <= 0.0) return 0.0;
                return aa * std::pow(x, aa - 2.0) * mittag_leffler_density(1.0 - g, std::pow(x, aa));
            };
            CatalogBundle c{3, m, tab, exp_power_law(1.0 - g), lim,
                            [g](double t) {
                                return t <= 0.0 ? 1.0 : std::exp(-std::pow(t, 1.0 / (1.0 - g)));
                            }};
            return c;
        }
        case 4: {
            if (!(alpha > -1.0))
                throw construction_error("catalog example 4: alpha must lie in ]-1,0[");
            FragmentationMeasure m = make_example4(alpha);
            LaplaceExponentTable tab(m);
            LimitMeasure lim = limit_measure(tab, alpha);
            lim.law_r = power_of_gamma_law(aa, aa, 1.0 / (1.0 + alpha));
            const double c1 = std::pow(1.0 + alpha, 1.0 / aa);
            const double al = alpha;
            lim.u_inf = [al, aa, c1](double x) {
                if (x <= 0.0) return 0.0;
                return (1.0 + al) / std::tgamma(aa) * std::pow(x, aa - 2.0) * std::exp(-c1 * x);
            };
            const double scale = 1.0 + alpha;
            CatalogBundle c{4, m, tab, size_biased_mittag_leffler_law(aa, scale), lim,
                            [aa, scale](double t) {
                                if (t <= 0.0) return 1.0;
                                return 1.0 - std::tgamma(1.0 + aa) *
                                                 mittag_leffler_partial_mean(aa, t / scale);
                            }};
            return c;
        }
        case 5: {
            FragmentationMeasure m = make_example5(p.a, alpha);
            LaplaceExponentTable tab(m);
            LimitMeasure lim = limit_measure(tab, alpha);  // moments only; no printed density
            ExactLaw law_i = example5_functional_law(p.a, alpha);
            auto series = std::make_shared<Example5Series>(p.a, alpha);
            CatalogBundle c{5, m, tab, law_i, lim,
                            [series](double t) { return t <= 0.0 ? 1.0 : series->tail(t); }};
            return c;
        }
        default:
            throw construction_error("catalog: example id must be 1..5");
    }
}

}  // namespace fragkin
