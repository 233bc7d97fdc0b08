#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "fragkin/common.hpp"
#include "fragkin/measure.hpp"
#include "fragkin/rng.hpp"
#include "fragkin/stats.hpp"

namespace fragkin {

// A finite piecewise-constant realization of the subordinator xi on [0,horizon].
struct JumpPath {
    std::vector<double> times;  // strictly increasing
    std::vector<double> sizes;  // all > 0
    double horizon = 0.0;
    double trunc_eps = 0.0;
    double bias_bound = 0.0;  // int_0^eps x Pi(dx), omitted mass per unit time
};

// Per-(measure, eps) sampling context: component rates and inverse-CDF size samplers.
class JumpSampler {
public:
    JumpSampler(const FragmentationMeasure& m, double eps) : m_(&m), eps_(eps) {
        if (eps < 0.0) throw simulation_error("sample_path: eps must be >= 0");
        total_rate_ = 0.0;
        bias_rate_ = 0.0;
        for (const auto& d : m.densities()) {
            double r;
            if (eps == 0.0) {
                r = d->phi_infinity();  // = Pi(]0,inf[) for the density part
                if (!std::isfinite(r))
                    throw simulation_error(
                        "sample_path: eps = 0 with an infinite-activity Levy measure");
            } else {
                r = d->levy_tail(eps);
            }
            density_rates_.push_back(r);
            total_rate_ += r;
            bias_rate_ += d->small_jump_mean(eps);
        }
        for (const auto& a : m.atoms()) {
            if (a.jump >= eps) {
                atom_rates_.push_back(a.xmass);
                atom_jumps_.push_back(a.jump);
                total_rate_ += a.xmass;
            } else {
                bias_rate_ += a.xmass * a.jump;
            }
        }
        phi_abs_alpha_ = m.phi(m.abs_alpha());
    }

    double total_rate() const { return total_rate_; }
    double bias_rate() const { return bias_rate_; }
    double eps() const { return eps_; }
    const FragmentationMeasure& measure() const { return *m_; }
    // E[I] = 1/phi(|alpha|), the tail-bound scale.
    double mean_exponential_functional() const { return 1.0 / phi_abs_alpha_; }

    double sample_size(RngStream& rng) const {
        double pick = rng.u01() * total_rate_;
        for (std::size_t i = 0; i < density_rates_.size(); ++i) {
            if (pick < density_rates_[i] || (i + 1 == density_rates_.size() && atom_rates_.empty())) {
                const double target = rng.u01() * density_rates_[i];
                return m_->densities()[i]->levy_tail_inverse(target);
            }
            pick -= density_rates_[i];
        }
        for (std::size_t i = 0; i + 1 < atom_rates_.size(); ++i) {
            if (pick < atom_rates_[i]) return atom_jumps_[i];
            pick -= atom_rates_[i];
        }
        return atom_jumps_.back();
    }

private:
    const FragmentationMeasure* m_;
    double eps_;
    double total_rate_;
    double bias_rate_;
    double phi_abs_alpha_;
    std::vector<double> density_rates_;
    std::vector<double> atom_rates_;
    std::vector<double> atom_jumps_;
};

// Marked-Poisson path on [0, horizon]: count ~ Poisson(horizon * rate), sizes
// i.i.d. from the normalized restriction of Pi to [eps, inf[.
inline JumpPath sample_path(const FragmentationMeasure& m, double horizon, double eps,
                            RngStream& rng) {
    if (!(horizon > 0.0)) throw simulation_error("sample_path: horizon must be > 0");
    JumpSampler sampler(m, eps);
    JumpPath p;
    p.horizon = horizon;
    p.trunc_eps = eps;
    p.bias_bound = sampler.bias_rate();
    const std::uint64_t n = rng.poisson(horizon * sampler.total_rate());
    p.times.resize(n);
    for (auto& t : p.times) t = rng.uniform(0.0, horizon);
    std::sort(p.times.begin(), p.times.end());
    p.sizes.resize(n);
    for (auto& s : p.sizes) s = sampler.sample_size(rng);
    return p;
}

// Thinning coupling: the eps-truncation of a finer path is the subset of its
// jumps with size >= eps, so refinements are supersets.
inline JumpPath truncate_path(const JumpPath& p, double eps) {
    JumpPath q;
    q.horizon = p.horizon;
    q.trunc_eps = std::max(eps, p.trunc_eps);
    q.bias_bound = p.bias_bound;  // plus the newly discarded mass, unknown without the measure
    for (std::size_t i = 0; i < p.sizes.size(); ++i) {
        if (p.sizes[i] >= eps) {
            q.times.push_back(p.times[i]);
            q.sizes.push_back(p.sizes[i]);
        }
    }
    return q;
}

// Coupling for B -> cB: the same marks run at c times the speed.
inline JumpPath scale_rate(const JumpPath& p, double c) {
    JumpPath q = p;
    q.horizon = p.horizon / c;
    for (auto& t : q.times) t /= c;
    return q;
}

inline double xi_at(const JumpPath& p, double u) {
    double xi = 0.0;
    for (std::size_t i = 0; i < p.times.size() && p.times[i] <= u; ++i) xi += p.sizes[i];
    return xi;
}

// The additive functional A(u) = int_0^u exp(alpha xi_r) dr is piecewise
// linear; rho is its exact segment-wise inverse. Returns +inf when
// A(horizon) <= s (path too short; caller must extend).
inline double time_change(const JumpPath& p, double alpha, double s) {
    if (s < 0.0) throw domain_error("time_change: s must be >= 0");
    if (s == 0.0) return 0.0;
    double t_prev = 0.0, xi = 0.0, A = 0.0;
    for (std::size_t i = 0; i < p.times.size(); ++i) {
        const double slope = std::exp(alpha * xi);
        const double A_next = A + slope * (p.times[i] - t_prev);
        if (A_next > s) return t_prev + (s - A) / slope;
        A = A_next;
        t_prev = p.times[i];
        xi += p.sizes[i];
    }
    const double slope = std::exp(alpha * xi);
    const double A_end = A + slope * (p.horizon - t_prev);
    if (A_end > s) return t_prev + (s - A) / slope;
    return kInf;
}

struct ProcessDraw {
    double x0 = 1.0;
    double t = 0.0;
    double value = 0.0;  // X(t); zero encodes extinction
    bool alive = false;
    std::optional<double> extinction_time;  // x0^{|alpha|} I, when resolved
    std::uint64_t jumps_applied = 0;        // jumps with time <= rho
};

// Windowed path: grows by horizon doubling (1, 2, 4, ...) and keeps prefix
// state for exact segment queries across a whole t-grid.
class WindowedPath {
public:
    WindowedPath(const JumpSampler& sampler, RngStream& rng, int window_cap = 64)
        : sampler_(&sampler), rng_(&rng), cap_(window_cap), alpha_(sampler.measure().alpha()) {
        seg_time_ = {0.0};
        seg_xi_ = {0.0};
        seg_A_ = {0.0};
    }

    double horizon() const { return horizon_; }
    double xi_end() const { return seg_xi_.back(); }
    double A_end() const { return A_end_; }
    int windows_used() const { return windows_; }
    std::uint64_t jump_count() const { return seg_time_.size() - 1; }

    // Mean of the unexplored remainder of I given the current state.
    double tail_bound() const {
        return std::exp(alpha_ * seg_xi_.back()) * sampler_->mean_exponential_functional();
    }

    void extend_window() {
        if (windows_ >= cap_)
            throw simulation_error("path simulation: window cap " + std::to_string(cap_) +
                                   " exceeded before the tail bound resolved");
        const double new_h = horizon_ == 0.0 ? 1.0 : horizon_ * 2.0;
        const double mean_count = (new_h - horizon_) * sampler_->total_rate();
        if (mean_count > 5e7)
            throw simulation_error("path simulation: window jump count infeasible; raise eps");
        const std::uint64_t n = rng_->poisson(mean_count);
        scratch_.resize(n);
        for (auto& t : scratch_) t = rng_->uniform(horizon_, new_h);
        std::sort(scratch_.begin(), scratch_.end());
        for (double tj : scratch_) {
            const double slope = std::exp(alpha_ * seg_xi_.back());
            const double A_j = seg_A_.back() + slope * (tj - seg_time_.back());
            const double size = sampler_->sample_size(*rng_);
            seg_time_.push_back(tj);
            seg_xi_.push_back(seg_xi_.back() + size);
            seg_A_.push_back(A_j);
        }
        horizon_ = new_h;
        A_end_ = seg_A_.back() + std::exp(alpha_ * seg_xi_.back()) * (horizon_ - seg_time_.back());
        ++windows_;
    }

    // Exact inverse of A on the stored path; +inf if A(horizon) <= s.
    double rho(double s) const {
        if (s == 0.0) return 0.0;
        if (s >= A_end_) return kInf;
        // first segment whose starting A exceeds s
        auto it = std::upper_bound(seg_A_.begin(), seg_A_.end(), s);
        const std::size_t i = static_cast<std::size_t>(it - seg_A_.begin()) - 1;
        const double slope = std::exp(alpha_ * seg_xi_[i]);
        return seg_time_[i] + (s - seg_A_[i]) / slope;
    }

    double xi_at_rho(double s) const {
        auto it = std::upper_bound(seg_A_.begin(), seg_A_.end(), s);
        const std::size_t i = static_cast<std::size_t>(it - seg_A_.begin()) - 1;
        return seg_xi_[i];
    }

    std::uint64_t jumps_before(double u) const {
        auto it = std::upper_bound(seg_time_.begin() + 1, seg_time_.end(), u);
        return static_cast<std::uint64_t>(it - (seg_time_.begin() + 1));
    }

private:
    const JumpSampler* sampler_;
    RngStream* rng_;
    int cap_;
    double alpha_;
    double horizon_ = 0.0;
    double A_end_ = 0.0;
    int windows_ = 0;
    std::vector<double> seg_time_;  // segment start times (t_0 = 0, then jump times)
    std::vector<double> seg_xi_;    // xi on each segment
    std::vector<double> seg_A_;     // A at each segment start
    std::vector<double> scratch_;
};

struct SimParams {
    std::optional<double> eps;   // small-jump cutoff; auto from bias_target when absent
    double bias_target = 2.5e-4; // int_0^eps x Pi(dx) per unit xi-time, when eps is auto
    double tail_tol = 1e-6;
    int window_cap = 64;
    std::uint64_t n_rep = 100000;
    std::uint64_t seed = 20260811;
    int threads = 0;  // 0 = hardware
};

// Default eps: largest cutoff whose omitted drift is below bias_target per
// unit xi-time. Exact (eps = 0) whenever the measure has finite activity.
inline double auto_eps(const FragmentationMeasure& m, double bias_target) {
    if (std::isfinite(m.phi_infinity())) return 0.0;
    double lo = 1e-16, hi = 1.0;
    LevyMeasureView view(m);
    for (int it = 0; it < 60; ++it) {
        const double mid = std::sqrt(lo * hi);
        if (view.small_jump_mean(mid) > bias_target)
            hi = mid;
        else
            lo = mid;
        if (hi / lo < 1.0001) break;
    }
    return lo;
}

inline double resolve_eps(const FragmentationMeasure& m, const SimParams& sim) {
    return sim.eps ? *sim.eps : auto_eps(m, sim.bias_target);
}

// Decision produced by growing the path against a target s = x0^alpha t:
// alive with an exact crossing, or extinct once the mean remainder of I is
// below tail_tol relative to the gap.
enum class FateKind { Alive, Extinct };

struct Fate {
    FateKind kind;
    double rho = 0.0;
    double xi = 0.0;       // xi at rho (alive) or at the certification horizon
    double I_estimate = 0.0;  // accumulated A plus half the tail bound (extinct)
};

inline Fate resolve_target(WindowedPath& path, double s, double tail_tol) {
    for (;;) {
        if (path.A_end() > s) {
            Fate f{FateKind::Alive};
            f.rho = path.rho(s);
            f.xi = path.xi_at_rho(s);
            return f;
        }
        const double bound = path.tail_bound();
        if (bound < tail_tol * (s - path.A_end())) {
            Fate f{FateKind::Extinct};
            f.xi = path.xi_end();
            f.I_estimate = path.A_end() + 0.5 * bound;
            return f;
        }
        path.extend_window();
    }
}

// One draw of X(t) = x0 exp(-xi_{rho(x0^alpha t)}).
inline ProcessDraw draw_process(const FragmentationMeasure& m, double x0, double t,
                                const SimParams& sim, RngStream& rng) {
    if (!(x0 > 0.0)) throw simulation_error("draw_process: x0 must be > 0");
    if (t < 0.0) throw simulation_error("draw_process: t must be >= 0");
    ProcessDraw d;
    d.x0 = x0;
    d.t = t;
    if (t == 0.0) {
        d.value = x0;
        d.alive = true;
        return d;
    }
    JumpSampler sampler(m, resolve_eps(m, sim));
    WindowedPath path(sampler, rng, sim.window_cap);
    const double s = std::exp(m.alpha() * std::log(x0)) * t;
    const Fate f = resolve_target(path, s, sim.tail_tol);
    if (f.kind == FateKind::Alive) {
        d.alive = true;
        d.value = x0 * std::exp(-f.xi);
        d.jumps_applied = path.jumps_before(f.rho);
    } else {
        d.alive = false;
        d.value = 0.0;
        d.extinction_time = std::pow(x0, m.abs_alpha()) * f.I_estimate;
        d.jumps_applied = path.jump_count();
    }
    return d;
}

// I = int_0^inf exp(alpha xi_r) dr, windowed with the Markov tail bound
// exp(alpha xi_h) E[I]; returns accumulated A plus half the final bound.
inline double exponential_functional(const FragmentationMeasure& m, double eps, double tail_tol,
                                     RngStream& rng, int window_cap = 64) {
    if (!(tail_tol > 0.0)) throw simulation_error("exponential_functional: tail_tol must be > 0");
    JumpSampler sampler(m, eps);
    WindowedPath path(sampler, rng, window_cap);
    for (;;) {
        path.extend_window();
        const double bound = path.tail_bound();
        if (bound < tail_tol * std::max(path.A_end(), 1e-300))
            return path.A_end() + 0.5 * bound;
    }
}

struct IdentityReport {
    std::vector<double> lhs_moments;  // E[(X(t)^{|alpha|} Itilde)^n]
    std::vector<double> rhs_moments;  // E[((x0^{|alpha|} I - t)^+)^n]
    std::vector<double> lhs_se;
    std::vector<double> rhs_se;
    std::vector<double> z;
    std::uint64_t n_rep = 0;
};

// Empirical check of (x0^{|alpha|} I - t)^+ = X(t)^{|alpha|} Itilde in law.
inline IdentityReport key_identity_check(const FragmentationMeasure& m, double x0, double t,
                                         std::uint64_t n_rep, const SimParams& sim,
                                         std::uint64_t seed, int n_moments = 2) {
    if (n_rep < 1000) throw simulation_error("key_identity_check: n_rep must be >= 1000");
    const double eps = resolve_eps(m, sim);
    const double aa = m.abs_alpha();
    std::vector<double> lhs(n_rep), rhs(n_rep);
    for (std::uint64_t r = 0; r < n_rep; ++r) {
        RngStream sx = make_stream(seed, 3 * r);
        RngStream si = make_stream(seed, 3 * r + 1);
        RngStream sf = make_stream(seed, 3 * r + 2);
        const ProcessDraw d = draw_process(m, x0, t, sim, sx);
        const double itilde = exponential_functional(m, eps, sim.tail_tol, si, sim.window_cap);
        lhs[r] = d.alive ? std::pow(d.value, aa) * itilde : 0.0;
        const double ifresh = exponential_functional(m, eps, sim.tail_tol, sf, sim.window_cap);
        rhs[r] = std::max(std::pow(x0, aa) * ifresh - t, 0.0);
    }
    IdentityReport rep;
    rep.n_rep = n_rep;
    for (int n = 1; n <= n_moments; ++n) {
        const MeanSE a = moment_se(std::span<const double>(lhs), n);
        const MeanSE b = moment_se(std::span<const double>(rhs), n);
        rep.lhs_moments.push_back(a.mean);
        rep.rhs_moments.push_back(b.mean);
        rep.lhs_se.push_back(a.se);
        rep.rhs_se.push_back(b.se);
        rep.z.push_back(zscore_diff(a, b));
    }
    return rep;
}

}  // namespace fragkin
