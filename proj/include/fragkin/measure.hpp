#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fragkin/common.hpp"
#include "fragkin/quadrature.hpp"
#include "fragkin/roots.hpp"

namespace fragkin {

// A Dirac component of B, stored on the Levy side: jump = -ln(location),
// xmass = location * weight. Locations too small to represent in double
// (jump > 744) are still exact in this form.
struct AtomSpec {
    double jump;
    double xmass;
};

// One absolutely continuous component of the dislocation measure B, together
// with whatever closed forms its family provides. The default implementations
// fall back to quadrature / root-finding; families override what they know.
class DensityFamily {
public:
    virtual ~DensityFamily() = default;
    virtual std::string name() const = 0;

    // b(u) on ]0,1[.
    virtual double b(double u) const = 0;

    // Levy density pi(x) = e^{-2x} b(e^{-x}), x > 0.
    virtual double levy_density(double x) const {
        const double u = std::exp(-x);
        if (u <= 0.0 || u >= 1.0) return 0.0;
        return u * u * b(u);
    }

    // phi contribution: int_0^1 (1 - u^t) u b(u) du.
    virtual double phi(double t) const {
        if (t == 0.0) return 0.0;
        return integrate_unit([&](double u) {
            const double p = -std::expm1(t * std::log(u));  // 1 - u^t without cancellation
            return p * u * b(u);
        });
    }

    // int_0^1 u b(u) du; may be infinite.
    virtual double phi_infinity() const {
        try {
            return integrate_unit([&](double u) { return u * b(u); });
        } catch (const quadrature_error&) {
            return kInf;
        }
    }

    // int_0^inf x Pi(dx) = int_0^1 |ln u| u b(u) du; may be infinite.
    virtual double kappa() const {
        try {
            const double v =
                integrate_unit([&](double u) { return -std::log(u) * u * b(u); });
            return std::isfinite(v) ? v : kInf;
        } catch (const quadrature_error&) {
            return kInf;
        }
    }

    // Pi-bar(y) = int_y^inf pi(x) dx = int_0^{e^{-y}} u b(u) du.
    virtual double levy_tail(double y) const {
        const double hi = std::exp(-y);
        return integrate([&](double u) { return u * b(u); }, 0.0, hi);
    }

    // Smallest y with Pi-bar(y) = target (Pi-bar is decreasing).
    virtual double levy_tail_inverse(double target) const {
        return monotone_inverse([&](double y) { return -levy_tail(y); }, -target, 1.0);
    }

    // int_0^eps x Pi(dx): mean mass of the discarded small jumps per unit time.
    virtual double small_jump_mean(double eps) const {
        if (eps <= 0.0) return 0.0;
        return integrate([&](double x) { return x * levy_density(x); }, 0.0, eps);
    }

    virtual std::optional<double> declared_beta() const { return std::nullopt; }

    // Whether int^1 B(dx)/(1-x) < infinity (atom criterion of the limit measure).
    // Default: numeric divergence probe near 1.
    virtual bool atom_criterion_finite() const {
        double prev = 0.0;
        for (double delta : {1e-2, 1e-4, 1e-6}) {
            const double v =
                integrate([&](double u) { return b(u) / (1.0 - u); }, 0.5, 1.0 - delta);
            if (prev > 0.0 && v > 5.0 * prev) return false;
            prev = v;
        }
        return true;
    }
};

using DensityPtr = std::shared_ptr<const DensityFamily>;

// The dislocation measure B on ]0,1[ (density families, Dirac atoms, or a
// mixture) together with the self-similarity index alpha < 0.
class FragmentationMeasure {
public:
    FragmentationMeasure(double alpha, std::vector<DensityPtr> densities,
                         std::vector<AtomSpec> atoms,
                         double quadrature_tol = kQuadratureTol)
        : alpha_(alpha),
          densities_(std::move(densities)),
          atoms_(std::move(atoms)),
          quadrature_tol_(quadrature_tol) {
        if (!(alpha < 0.0))
            throw construction_error("FragmentationMeasure: alpha must be < 0 (got " +
                                     std::to_string(alpha) + ")");
        if (densities_.empty() && atoms_.empty())
            throw construction_error("FragmentationMeasure: B(]0,1[) must be > 0");
        for (const auto& a : atoms_) {
            if (!(a.jump > 0.0) || !(a.xmass > 0.0))
                throw construction_error("FragmentationMeasure: atoms need location in ]0,1[ "
                                         "and weight > 0");
        }
        // int_0^1 y(1-y) B(dy) < inf: exact for atoms, quadrature for densities.
        double c = 0.0;
        for (const auto& a : atoms_) c += a.xmass * -std::expm1(-a.jump);
        for (const auto& d : densities_) {
            double v;
            try {
                v = integrate_unit([&](double u) { return u * (1.0 - u) * d->b(u); },
                                   quadrature_tol_);
            } catch (const std::exception&) {
                throw construction_error("FragmentationMeasure: int y(1-y) B(dy) failed to "
                                         "converge for family " + d->name());
            }
            if (!std::isfinite(v) || v > 1e12)
                throw construction_error("FragmentationMeasure: int y(1-y) B(dy) diverges "
                                         "for family " + d->name());
            if (v <= 0.0)
                throw construction_error("FragmentationMeasure: density family " + d->name() +
                                         " carries no mass");
            c += v;
        }
        if (!(c > 0.0)) throw construction_error("FragmentationMeasure: B(]0,1[) must be > 0");
    }

    double alpha() const { return alpha_; }
    double abs_alpha() const { return -alpha_; }
    double quadrature_tol() const { return quadrature_tol_; }
    const std::vector<DensityPtr>& densities() const { return densities_; }
    const std::vector<AtomSpec>& atoms() const { return atoms_; }

    // phi(t) = int_0^1 (1 - x^t) x B(dx).
    double phi(double t) const {
        if (t < 0.0) throw domain_error("phi: t must be >= 0");
        if (t == 0.0) return 0.0;
        double v = 0.0;
        for (const auto& a : atoms_) v += a.xmass * -std::expm1(-t * a.jump);
        for (const auto& d : densities_) v += d->phi(t);
        return v;
    }

    // phi(inf) = int_0^1 x B(dx) = Pi(]0,inf[); may be infinite.
    double phi_infinity() const {
        double v = 0.0;
        for (const auto& a : atoms_) v += a.xmass;
        for (const auto& d : densities_) {
            const double p = d->phi_infinity();
            if (!std::isfinite(p)) return kInf;
            v += p;
        }
        return v;
    }

    // kappa = int_0^1 |ln x| x B(dx) = int_0^inf x Pi(dx); may be infinite.
    double kappa() const {
        double v = 0.0;
        for (const auto& a : atoms_) v += a.xmass * a.jump;
        for (const auto& d : densities_) {
            const double k = d->kappa();
            if (!std::isfinite(k)) return kInf;
            v += k;
        }
        return v;
    }

    std::optional<double> declared_beta() const {
        // a declared index requires every density family to agree; atoms do not
        // affect the behaviour of B near 1 unless they sit at the supremum
        std::optional<double> beta;
        for (const auto& d : densities_) {
            const auto db = d->declared_beta();
            if (!db) return std::nullopt;
            if (beta && *beta != *db) return std::nullopt;
            beta = db;
        }
        if (!beta && !atoms_.empty() && densities_.empty()) beta = 0.0;
        return beta;
    }

    bool atom_criterion_finite() const {
        for (const auto& d : densities_)
            if (!d->atom_criterion_finite()) return false;
        return true;
    }

    // Support of B contained in {a^n}: true only for a single-atom measure (or
    // atoms at commensurable jumps).
    bool lattice_support() const {
        if (!densities_.empty()) return false;
        if (atoms_.size() == 1) return true;
        const double base = atoms_.front().jump;
        for (const auto& a : atoms_) {
            const double r = a.jump / base;
            if (std::fabs(r - std::round(r)) > 1e-12) return false;
        }
        return true;
    }

private:
    double alpha_;
    std::vector<DensityPtr> densities_;
    std::vector<AtomSpec> atoms_;
    double quadrature_tol_;
};

// View of the image measure Pi (Eq. levy relation: int g dPi = int g(-ln x) x B(dx)).
class LevyMeasureView {
public:
    explicit LevyMeasureView(const FragmentationMeasure& m) : m_(&m) {}

    // int_0^inf g(x) Pi(dx); g sampled on the Levy side.
    double integrate_against(const std::function<double(double)>& g) const {
        double v = 0.0;
        for (const auto& a : m_->atoms()) v += a.xmass * g(a.jump);
        for (const auto& d : m_->densities())
            v += integrate_unit(
                [&](double u) {
                    if (u <= 0.0 || u >= 1.0) return 0.0;
                    return g(-std::log(u)) * u * d->b(u);
                },
                m_->quadrature_tol());
        return v;
    }

    double total_mass() const { return m_->phi_infinity(); }
    double mean() const { return m_->kappa(); }

    double tail(double y) const {
        double v = 0.0;
        for (const auto& a : m_->atoms())
            if (a.jump >= y) v += a.xmass;
        for (const auto& d : m_->densities()) v += d->levy_tail(y);
        return v;
    }

    // int_0^eps x Pi(dx).
    double small_jump_mean(double eps) const {
        double v = 0.0;
        for (const auto& a : m_->atoms())
            if (a.jump < eps) v += a.xmass * a.jump;
        for (const auto& d : m_->densities()) v += d->small_jump_mean(eps);
        return v;
    }

private:
    const FragmentationMeasure* m_;
};

inline LevyMeasureView levy_image(const FragmentationMeasure& m) {
    return LevyMeasureView(m);
}

// Evaluator bundle for phi and its derived scalars.
class LaplaceExponentTable {
public:
    explicit LaplaceExponentTable(const FragmentationMeasure& m)
        : m_(&m),
          phi_inf_(m.phi_infinity()),
          kappa_(m.kappa()),
          beta_(m.declared_beta()) {}

    double phi(double t) const { return m_->phi(t); }
    double phi_infinity() const { return phi_inf_; }
    double kappa() const { return kappa_; }
    std::optional<double> declared_beta() const { return beta_; }
    double quadrature_tol() const { return m_->quadrature_tol(); }
    const FragmentationMeasure& measure() const { return *m_; }

private:
    const FragmentationMeasure* m_;
    double phi_inf_;
    double kappa_;
    std::optional<double> beta_;
};

inline LaplaceExponentTable laplace_exponent(const FragmentationMeasure& m) {
    return LaplaceExponentTable(m);
}

// varphi (inverse of t -> t/phi(t)), h (inverse of t -> t^{1+|alpha|/gamma}/phi(t))
// and phi^{-1}, all by monotone root-finding.
class RateFunctions {
public:
    RateFunctions(const LaplaceExponentTable& tab, std::optional<double> gamma_for_h,
                  double root_tol = kRootTol)
        : tab_(tab), gamma_(gamma_for_h), root_tol_(root_tol) {
        const double k = tab_.kappa();
        range_inf_ = std::isfinite(k) && k > 0.0 ? 1.0 / k : 0.0;
    }

    // Domain of varphi: ] (int |ln x| x B(dx))^{-1}, inf [.
    double varphi(double s) const {
        if (!(s > range_inf_))
            throw domain_error("varphi: argument " + std::to_string(s) +
                               " at or below the range infimum " + std::to_string(range_inf_) +
                               " of t/phi(t)");
        return monotone_inverse([&](double t) { return t / tab_.phi(t); }, s, 1.0, root_tol_);
    }

    double h(double s, double abs_alpha) const {
        if (!gamma_) throw domain_error("h: no gamma was supplied");
        const double p = 1.0 + abs_alpha / *gamma_;
        return monotone_inverse([&](double t) { return std::pow(t, p) / tab_.phi(t); }, s, 1.0,
                                root_tol_);
    }

    // Inverse of phi on its range [0, phi(inf)[.
    double phi_inverse(double y) const {
        if (y < 0.0) throw domain_error("phi_inverse: negative argument");
        if (y == 0.0) return 0.0;
        const double pinf = tab_.phi_infinity();
        if (std::isfinite(pinf) && y >= pinf)
            throw domain_error("phi_inverse: argument " + std::to_string(y) +
                               " is not below phi(inf) = " + std::to_string(pinf));
        return monotone_inverse([&](double t) { return tab_.phi(t); }, y, 1.0, root_tol_);
    }

    double range_infimum() const { return range_inf_; }
    double root_tol() const { return root_tol_; }

private:
    LaplaceExponentTable tab_;
    std::optional<double> gamma_;
    double root_tol_;
    double range_inf_;
};

inline RateFunctions rate_functions(const LaplaceExponentTable& tab,
                                    std::optional<double> gamma = std::nullopt) {
    return RateFunctions(tab, gamma);
}

struct RegularVariationReport {
    std::vector<double> grid;
    std::vector<double> log_phi;
    double estimate = 0.0;            // least-squares log-log slope
    std::optional<double> declared;   // family-declared beta, if any
    double max_pair_deviation = 0.0;  // max |pairwise slope - estimate|
    bool conclusive = false;
};

// Numeric estimate of the regular-variation index of phi at infinity
// (hypothesis on B near 1 <=> phi regularly varying with index beta).
inline RegularVariationReport check_hypothesis_H(const LaplaceExponentTable& tab,
                                                 double grid_lo = 1e2, double grid_hi = 1e6,
                                                 int n_points = 9) {
    RegularVariationReport r;
    r.declared = tab.declared_beta();
    const double step = std::pow(grid_hi / grid_lo, 1.0 / (n_points - 1));
    double t = grid_lo;
    for (int i = 0; i < n_points; ++i, t *= step) {
        r.grid.push_back(t);
        r.log_phi.push_back(std::log(tab.phi(t)));
    }
    // least-squares slope in log-log coordinates
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n_points; ++i) {
        const double x = std::log(r.grid[i]);
        sx += x;
        sy += r.log_phi[i];
        sxx += x * x;
        sxy += x * r.log_phi[i];
    }
    const double n = n_points;
    r.estimate = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    for (int i = 0; i + 1 < n_points; ++i) {
        const double s = (r.log_phi[i + 1] - r.log_phi[i]) /
                         (std::log(r.grid[i + 1]) - std::log(r.grid[i]));
        r.max_pair_deviation = std::max(r.max_pair_deviation, std::fabs(s - r.estimate));
    }
    r.conclusive = r.max_pair_deviation < 0.1 && r.estimate > -0.05 && r.estimate < 1.0;
    return r;
}

}  // namespace fragkin
