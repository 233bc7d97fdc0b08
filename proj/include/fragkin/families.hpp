#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <string>

#include "fragkin/expression.hpp"
#include "fragkin/measure.hpp"
#include "fragkin/special.hpp"

namespace fragkin {

// b(u) = b u^{b-2}. phi(t) = t/(t+b), pi(x) = b e^{-bx}, beta = 0.
class Example1Density final : public DensityFamily {
public:
    explicit Example1Density(double b) : b_(b) {
        if (!(b > 0.0)) throw construction_error("example1: b must be > 0");
    }
    std::string name() const override { return "example1"; }
    double b(double u) const override { return b_ * std::pow(u, b_ - 2.0); }
    double levy_density(double x) const override { return b_ * std::exp(-b_ * x); }
    double phi(double t) const override { return t / (t + b_); }
    double phi_infinity() const override { return 1.0; }
    double kappa() const override { return 1.0 / b_; }
    double levy_tail(double y) const override { return std::exp(-b_ * y); }
    double levy_tail_inverse(double target) const override { return -std::log(target) / b_; }
    double small_jump_mean(double eps) const override {
        return (1.0 - std::exp(-b_ * eps) * (1.0 + b_ * eps)) / b_;
    }
    std::optional<double> declared_beta() const override { return 0.0; }
    bool atom_criterion_finite() const override { return false; }
    double param_b() const { return b_; }

private:
    double b_;
};

// b(u) = |alpha| Gamma(1-gamma)^{-1} u^{|alpha|/gamma - 2} (1 - u^{|alpha|/gamma})^{-gamma-1}.
// phi(t) = Gamma(1+s)/Gamma(1+s-gamma) - 1/Gamma(1-gamma), s = t gamma/|alpha|.
class Example2Density final : public DensityFamily {
public:
    Example2Density(double gamma, double abs_alpha) : g_(gamma), aa_(abs_alpha), r_(abs_alpha / gamma) {
        if (!(gamma > 0.0 && gamma < 1.0)) throw construction_error("example2: gamma not in ]0,1[");
        cg_ = 1.0 / std::tgamma(1.0 - g_);
    }
    std::string name() const override { return "example2"; }
    double b(double u) const override {
        const double one_minus = -std::expm1(r_ * std::log(u));
        return aa_ * cg_ * std::pow(u, r_ - 2.0) * std::pow(one_minus, -g_ - 1.0);
    }
    double levy_density(double x) const override {
        const double one_minus = -std::expm1(-r_ * x);
        return aa_ * cg_ * std::exp(-r_ * x) * std::pow(one_minus, -g_ - 1.0);
    }
    double phi(double t) const override {
        if (t == 0.0) return 0.0;
        const double s = t * g_ / aa_;
        return gamma_ratio(1.0 + s, 1.0 + s - g_) - cg_;
    }
    double phi_infinity() const override { return kInf; }
    double kappa() const override {
        return (g_ / aa_) * cg_ * (digamma(1.0) - digamma(1.0 - g_));
    }
    double levy_tail(double y) const override {
        const double one_minus = -std::expm1(-r_ * y);
        return cg_ * (std::pow(one_minus, -g_) - 1.0);
    }
    double levy_tail_inverse(double target) const override {
        const double w = std::pow(1.0 + target / cg_, -1.0 / g_);
        return -std::log1p(-w) / r_;
    }
    double small_jump_mean(double eps) const override {
        // x = eps v keeps the x^{-gamma} endpoint singularity inside tanh_sinh
        if (eps <= 0.0) return 0.0;
        return integrate_unit([&](double v) { return eps * v * eps * levy_density(eps * v); });
    }
    std::optional<double> declared_beta() const override { return g_; }
    bool atom_criterion_finite() const override { return false; }
    double gamma() const { return g_; }

private:
    double g_, aa_, r_, cg_;
};

// b(u) = |alpha| gamma ((1-gamma) Gamma(2-gamma))^{-1} u^{gamma r - 2} (1-u^r)^{-gamma-1},
// r = |alpha|/(1-gamma). phi(t) = Gamma(gamma+s)/((1-gamma) Gamma(s)), s = t(1-gamma)/|alpha|.
// The printed prefactor gamma^2 is inconsistent with the example's stated laws
// of I and R and with its own varphi asymptotic; this is the consistent one.
class Example3Density final : public DensityFamily {
public:
    Example3Density(double gamma, double abs_alpha)
        : g_(gamma), aa_(abs_alpha), r_(abs_alpha / (1.0 - gamma)) {
        if (!(gamma > 0.0 && gamma < 1.0)) throw construction_error("example3: gamma not in ]0,1[");
        c_ = aa_ * g_ / ((1.0 - g_) * std::tgamma(2.0 - g_));
    }
    std::string name() const override { return "example3"; }
    double b(double u) const override {
        const double one_minus = -std::expm1(r_ * std::log(u));
        return c_ * std::pow(u, g_ * r_ - 2.0) * std::pow(one_minus, -g_ - 1.0);
    }
    double levy_density(double x) const override {
        const double one_minus = -std::expm1(-r_ * x);
        return c_ * std::exp(-(g_ * r_) * x) * std::pow(one_minus, -g_ - 1.0);
    }
    double phi(double t) const override {
        if (t == 0.0) return 0.0;
        const double s = t * (1.0 - g_) / aa_;
        // Gamma(gamma+s)/Gamma(s) = s Gamma(gamma+s)/Gamma(1+s), stable as s -> 0
        return s * gamma_ratio(g_ + s, 1.0 + s) / (1.0 - g_);
    }
    double phi_infinity() const override { return kInf; }
    double kappa() const override { return std::tgamma(g_) / aa_; }
    double levy_tail(double y) const override {
        const double v = std::exp(-r_ * y);
        return std::pow(v / (1.0 - v), g_) / std::tgamma(2.0 - g_);
    }
    double levy_tail_inverse(double target) const override {
        const double z = std::pow(target * std::tgamma(2.0 - g_), 1.0 / g_);
        const double v = z / (1.0 + z);
        return -std::log(v) / r_;
    }
    double small_jump_mean(double eps) const override {
        if (eps <= 0.0) return 0.0;
        return integrate_unit([&](double v) { return eps * v * eps * levy_density(eps * v); });
    }
    std::optional<double> declared_beta() const override { return g_; }
    bool atom_criterion_finite() const override { return false; }
    double gamma() const { return g_; }

private:
    double g_, aa_, r_, c_;
};

// b(u) = |alpha| Gamma(2+alpha)^{-1} u^{|alpha|-2} (1-u)^{alpha-1}, -1 < alpha < 0.
// phi(t) = Gamma(t+|alpha|)/((1+alpha) Gamma(t)).
class Example4Density final : public DensityFamily {
public:
    explicit Example4Density(double alpha) : al_(alpha), aa_(-alpha) {
        if (!(alpha > -1.0 && alpha < 0.0))
            throw construction_error("example4: alpha must lie in ]-1,0[");
        c_ = aa_ / std::tgamma(2.0 + al_);
    }
    std::string name() const override { return "example4"; }
    double b(double u) const override {
        return c_ * std::pow(u, aa_ - 2.0) * std::pow(1.0 - u, al_ - 1.0);
    }
    double levy_density(double x) const override {
        const double one_minus = -std::expm1(-x);
        return c_ * std::exp(-aa_ * x) * std::pow(one_minus, al_ - 1.0);
    }
    double phi(double t) const override {
        if (t == 0.0) return 0.0;
        return t * gamma_ratio(t + aa_, 1.0 + t) / (1.0 + al_);
    }
    double phi_infinity() const override { return kInf; }
    double kappa() const override { return std::tgamma(aa_) / (1.0 + al_); }
    double levy_tail(double y) const override {
        const double v = std::exp(-y);
        return std::pow(v / (1.0 - v), aa_) / std::tgamma(2.0 + al_);
    }
    double levy_tail_inverse(double target) const override {
        const double z = std::pow(target * std::tgamma(2.0 + al_), 1.0 / aa_);
        const double v = z / (1.0 + z);
        return -std::log(v);
    }
    double small_jump_mean(double eps) const override {
        if (eps <= 0.0) return 0.0;
        return integrate_unit([&](double v) { return eps * v * eps * levy_density(eps * v); });
    }
    std::optional<double> declared_beta() const override { return aa_; }
    bool atom_criterion_finite() const override { return false; }

private:
    double al_, aa_, c_;
};

// User density from an expression string; everything by quadrature.
class ExpressionDensity final : public DensityFamily {
public:
    ExpressionDensity(std::string expr, std::optional<double> declared_beta = std::nullopt)
        : text_(std::move(expr)), beta_(declared_beta) {
        fn_ = Expression::parse(text_).fn();
    }
    std::string name() const override { return "density-expr(" + text_ + ")"; }
    double b(double u) const override { return fn_(u); }
    std::optional<double> declared_beta() const override { return beta_; }
    const std::string& text() const { return text_; }

private:
    std::string text_;
    std::optional<double> beta_;
    std::function<double(double)> fn_;
};

// ---- measure builders ----

inline FragmentationMeasure make_example1(double b, double alpha) {
    return FragmentationMeasure(alpha, {std::make_shared<Example1Density>(b)}, {});
}

// Jump scale of the dust atom that realises the killing rate of Example 2's
// stated laws of I and R; with L = 4000/|alpha| the correction e^{-tL}
// underflows to exactly 0 for t > 0.19 |alpha|, so phi is machine-exact on
// the moment lattice {i |alpha|}.
inline constexpr double kExample2KillJump = 4000.0;

// exact_laws = true augments the printed density with a dust atom carrying
// x-mass 1/Gamma(1-gamma), which is what the printed laws I ~ ML(gamma),
// R ~ e(1)^gamma require of phi on the moment lattice.
inline FragmentationMeasure make_example2(double gamma, double alpha, bool exact_laws = true) {
    const double aa = -alpha;
    std::vector<AtomSpec> atoms;
    if (exact_laws) atoms.push_back({kExample2KillJump / aa, 1.0 / std::tgamma(1.0 - gamma)});
    return FragmentationMeasure(alpha, {std::make_shared<Example2Density>(gamma, aa)},
                                std::move(atoms));
}

inline FragmentationMeasure make_example3(double gamma, double alpha) {
    return FragmentationMeasure(alpha, {std::make_shared<Example3Density>(gamma, -alpha)}, {});
}

inline FragmentationMeasure make_example4(double alpha) {
    return FragmentationMeasure(alpha, {std::make_shared<Example4Density>(alpha)}, {});
}

// B = weight * delta_a. Example 5 is the weight = 1/a case.
inline FragmentationMeasure make_dirac(double a, double weight, double alpha) {
    if (!(a > 0.0 && a < 1.0)) throw construction_error("dirac: location a must lie in ]0,1[");
    if (!(weight > 0.0)) throw construction_error("dirac: weight must be > 0");
    return FragmentationMeasure(alpha, {}, {{-std::log(a), a * weight}});
}

inline FragmentationMeasure make_example5(double a, double alpha) {
    return make_dirac(a, 1.0 / a, alpha);
}

inline FragmentationMeasure make_expression_measure(const std::string& expr, double alpha,
                                                    std::optional<double> beta = std::nullopt) {
    return FragmentationMeasure(alpha, {std::make_shared<ExpressionDensity>(expr, beta)}, {});
}

}  // namespace fragkin
