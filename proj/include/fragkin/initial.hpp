#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fragkin/common.hpp"
#include "fragkin/laws.hpp"
#include "fragkin/quadrature.hpp"
#include "fragkin/rng.hpp"

namespace fragkin {

enum class TailKind { None, StretchedExp, Power, GenericDensity, Custom };

// mu_0: atoms plus a tail-density class. Construction normalizes nothing; the
// first moment must already be 1 (config assembly can rescale before building).
class InitialMeasure {
public:
    struct Atom {
        double x;
        double mass;
    };

    // atoms only
    static InitialMeasure atoms_only(std::vector<Atom> atoms) {
        InitialMeasure m;
        m.atoms_ = std::move(atoms);
        m.tail_ = TailKind::None;
        m.finalize();
        return m;
    }

    static InitialMeasure dirac_at_one() { return atoms_only({{1.0, 1.0}}); }

    // u0(x) = z exp(-C x^g) on ]0,inf[, z fixed so the total first moment is 1
    // together with the atoms.
    static InitialMeasure with_stretched_exp_tail(std::vector<Atom> atoms, double C, double g) {
        if (!(C > 0.0) || !(g > 0.0))
            throw construction_error("stretched_exp tail: C > 0 and gamma_tail > 0 required");
        InitialMeasure m;
        m.atoms_ = std::move(atoms);
        m.tail_ = TailKind::StretchedExp;
        m.tail_c_ = C;
        m.tail_gamma_ = g;
        double atom_mass = 0.0;
        for (const auto& a : m.atoms_) atom_mass += a.x * a.mass;
        if (atom_mass >= 1.0)
            throw construction_error("stretched_exp tail: atoms already carry x-mass >= 1");
        // int_0^inf x e^{-C x^g} dx = Gamma(2/g) C^{-2/g} / g
        const double raw = std::tgamma(2.0 / g) * std::pow(C, -2.0 / g) / g;
        m.tail_scale_ = (1.0 - atom_mass) / raw;
        m.tail_xmass_ = 1.0 - atom_mass;
        m.finalize();
        return m;
    }

    // u0(x) = C x^{-g} on [x_min, inf[, g > 2, C kept verbatim (it is the
    // asymptotic constant); remaining x-mass must come from the atoms.
    static InitialMeasure with_power_tail(std::vector<Atom> atoms, double C, double g,
                                          double x_min = 1.0, bool pad_atom_at_one = true) {
        if (!(g > 2.0)) throw construction_error("power tail: gamma_tail > 2 required");
        if (!(C > 0.0) || !(x_min > 0.0))
            throw construction_error("power tail: C > 0 and x_min > 0 required");
        InitialMeasure m;
        m.atoms_ = std::move(atoms);
        m.tail_ = TailKind::Power;
        m.tail_c_ = C;
        m.tail_gamma_ = g;
        m.tail_xmin_ = x_min;
        m.tail_scale_ = 1.0;
        m.tail_xmass_ = C * std::pow(x_min, 2.0 - g) / (g - 2.0);
        double atom_mass = 0.0;
        for (const auto& a : m.atoms_) atom_mass += a.x * a.mass;
        const double gap = 1.0 - atom_mass - m.tail_xmass_;
        if (gap < -1e-9)
            throw construction_error("power tail: total x-mass exceeds 1; lower C or add no atoms");
        if (gap > 1e-12) {
            if (!pad_atom_at_one)
                throw construction_error("power tail: x-mass short of 1 and padding disabled");
            m.atoms_.push_back({1.0, gap});
        }
        m.finalize();
        return m;
    }

    // Bounded-support user density for x mu_0(dx)'s tail block; sampled by
    // rejection against its grid supremum.
    static InitialMeasure with_generic_density(std::vector<Atom> atoms,
                                               std::function<double(double)> u0, double lo,
                                               double hi) {
        if (!(hi > lo) || !(lo >= 0.0))
            throw construction_error("generic density: need bounded support 0 <= lo < hi");
        if (!std::isfinite(hi))
            throw construction_error(
                "generic density: unbounded support without an integrable bound is unsupported");
        InitialMeasure m;
        m.atoms_ = std::move(atoms);
        m.tail_ = TailKind::GenericDensity;
        m.generic_u0_ = std::move(u0);
        m.generic_lo_ = lo;
        m.generic_hi_ = hi;
        double atom_mass = 0.0;
        for (const auto& a : m.atoms_) atom_mass += a.x * a.mass;
        const double raw = integrate([&](double x) { return x * m.generic_u0_(x); }, lo, hi, 1e-10);
        if (!(raw > 0.0)) throw construction_error("generic density: carries no x-mass");
        m.tail_scale_ = (1.0 - atom_mass) / raw;
        m.tail_xmass_ = 1.0 - atom_mass;
        double sup = 0.0;
        for (int i = 0; i <= 2048; ++i) {
            const double x = lo + (hi - lo) * i / 2048.0;
            sup = std::max(sup, x * m.generic_u0_(x));
        }
        m.generic_sup_ = sup * 1.2;
        m.finalize();
        return m;
    }

    // Direct size-biased sampler (quasi-stationary starts): x mu_0(dx) is the
    // law of the sampled variable itself.
    static InitialMeasure custom_size_biased(std::string name,
                                             std::function<double(RngStream&)> sampler,
                                             std::function<double(int)> xlaw_moments,
                                             double support_sup) {
        InitialMeasure m;
        m.tail_ = TailKind::Custom;
        m.custom_name_ = std::move(name);
        m.custom_sampler_ = std::move(sampler);
        m.custom_moments_ = std::move(xlaw_moments);
        m.support_sup_ = support_sup;
        return m;
    }

    TailKind tail_kind() const { return tail_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    double support_sup() const { return support_sup_; }
    bool bounded_support() const { return std::isfinite(support_sup_); }

    double mass_at(double x) const {
        for (const auto& a : atoms_)
            if (a.x == x) return a.mass;
        return 0.0;
    }

    // Whether the size-biased draw X(0) has a finite variance.
    bool size_biased_variance_finite() const {
        if (tail_ == TailKind::Power) return tail_gamma_ > 4.0;
        return true;
    }

    double first_moment() const {
        double v = tail_ == TailKind::Custom ? 1.0 : tail_xmass_;
        for (const auto& a : atoms_) v += a.x * a.mass;
        return v;
    }

    // ln u0(x) tail class parameters, for the asymptotic verifiers.
    double tail_C() const { return tail_c_; }
    double tail_gamma() const { return tail_gamma_; }

    // Draw X(0) from the size-biased law x mu_0(dx).
    double sample(RngStream& rng) const {
        if (tail_ == TailKind::Custom) return custom_sampler_(rng);
        double pick = rng.u01();
        for (const auto& a : atoms_) {
            const double w = a.x * a.mass;
            if (pick < w) return a.x;
            pick -= w;
        }
        switch (tail_) {
            case TailKind::StretchedExp:
                return std::pow(rng.gamma(2.0 / tail_gamma_) / tail_c_, 1.0 / tail_gamma_);
            case TailKind::Power:
                return tail_xmin_ * std::pow(rng.u01(), -1.0 / (tail_gamma_ - 2.0));
            case TailKind::GenericDensity:
                for (;;) {
                    const double x = rng.uniform(generic_lo_, generic_hi_);
                    const double f = tail_scale_ * x * generic_u0_(x);
                    if (rng.u01() * generic_sup_ * tail_scale_ < f) return x;
                }
            case TailKind::None:
            case TailKind::Custom:
                break;
        }
        // rounding leftovers land on the heaviest atom
        return atoms_.empty() ? 1.0 : atoms_.front().x;
    }

    std::optional<std::function<double(int)>> custom_moments() const {
        if (tail_ == TailKind::Custom) return custom_moments_;
        return std::nullopt;
    }
    const std::string& name() const { return custom_name_; }

private:
    void finalize() {
        const double m1 = first_moment();
        if (std::fabs(m1 - 1.0) > 1e-9)
            throw construction_error("InitialMeasure: total first moment is " +
                                     std::to_string(m1) + ", must be 1");
        support_sup_ = 0.0;
        for (const auto& a : atoms_) support_sup_ = std::max(support_sup_, a.x);
        if (tail_ == TailKind::StretchedExp || tail_ == TailKind::Power) support_sup_ = kInf;
        if (tail_ == TailKind::GenericDensity)
            support_sup_ = std::max(support_sup_, generic_hi_);
    }

    std::vector<Atom> atoms_;
    TailKind tail_ = TailKind::None;
    double tail_c_ = 0.0;
    double tail_gamma_ = 0.0;
    double tail_xmin_ = 1.0;
    double tail_scale_ = 0.0;
    double tail_xmass_ = 0.0;
    std::function<double(double)> generic_u0_;
    double generic_lo_ = 0.0, generic_hi_ = 0.0, generic_sup_ = 0.0;
    std::string custom_name_;
    std::function<double(RngStream&)> custom_sampler_;
    std::function<double(int)> custom_moments_;
    double support_sup_ = 0.0;
};

inline double sample_initial(const InitialMeasure& mu0, RngStream& rng) { return mu0.sample(rng); }

// mu_0 with x mu_0(dx) the law of lambda R^{1/|alpha|}; its solution is
// quasi-stationary with survival exp(-lambda^alpha t).
inline InitialMeasure quasi_stationary(const LimitMeasure& lim, double lambda) {
    if (!(lambda > 0.0)) throw domain_error("quasi_stationary: lambda must be > 0");
    if (!lim.law_r || !lim.law_r->has_sampler())
        throw domain_error("quasi_stationary: the limit measure has no sampler for R "
                           "(catalog examples only)");
    const double aa = -lim.alpha;
    const ExactLaw law = *lim.law_r;
    auto moments = lim.moments;
    return InitialMeasure::custom_size_biased(
        "qs(lambda=" + std::to_string(lambda) + ")",
        [law, lambda, aa](RngStream& rng) { return lambda * std::pow(law.sample(rng), 1.0 / aa); },
        [moments, lambda, aa](int n) { return std::pow(lambda, aa * n) * moments(n); }, kInf);
}

inline double qs_survival(double lambda, double alpha, double t) {
    return std::exp(-std::pow(lambda, alpha) * t);
}

}  // namespace fragkin
