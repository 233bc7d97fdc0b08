#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fragkin/common.hpp"

namespace fragkin {

// Pairwise (cascade) summation: order-independent reductions stay stable no
// matter how replicates were partitioned across workers.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t h = v.size() / 2;
    return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

inline double pairwise_sum(const std::vector<double>& v) {
    return pairwise_sum(std::span<const double>(v));
}

struct MeanSE {
    double mean = 0.0;
    double se = 0.0;
    std::size_t n = 0;
};

inline MeanSE mean_se(std::span<const double> v) {
    MeanSE r;
    r.n = v.size();
    if (r.n == 0) return r;
    r.mean = pairwise_sum(v) / static_cast<double>(r.n);
    if (r.n < 2) return r;
    std::vector<double> sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double d = v[i] - r.mean;
        sq[i] = d * d;
    }
    const double var = pairwise_sum(sq) / static_cast<double>(r.n - 1);
    r.se = std::sqrt(var / static_cast<double>(r.n));
    return r;
}

inline MeanSE mean_se(const std::vector<double>& v) {
    return mean_se(std::span<const double>(v));
}

// Raw moment of order k with its standard error.
inline MeanSE moment_se(std::span<const double> v, int k) {
    std::vector<double> p(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) p[i] = std::pow(v[i], k);
    return mean_se(p);
}

// Binomial proportion with its standard error.
inline MeanSE proportion_se(std::size_t hits, std::size_t n) {
    MeanSE r;
    r.n = n;
    if (n == 0) return r;
    r.mean = static_cast<double>(hits) / static_cast<double>(n);
    r.se = std::sqrt(std::max(r.mean * (1.0 - r.mean), 0.0) / static_cast<double>(n));
    return r;
}

inline double zscore(const MeanSE& est, double target) {
    if (est.se == 0.0) return est.mean == target ? 0.0 : kInf;
    return (est.mean - target) / est.se;
}

// z-score of the difference of two independent estimates.
inline double zscore_diff(const MeanSE& a, const MeanSE& b) {
    const double s = std::sqrt(a.se * a.se + b.se * b.se);
    if (s == 0.0) return a.mean == b.mean ? 0.0 : kInf;
    return (a.mean - b.mean) / s;
}

// Two-sample Kolmogorov-Smirnov distance. Inputs are sorted in place.
inline double ks_distance(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

// One-sample KS distance against a CDF.
inline double ks_distance(std::vector<double> a, const std::function<double(double)>& cdf) {
    std::sort(a.begin(), a.end());
    const double n = static_cast<double>(a.size());
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double f = cdf(a[i]);
        d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

}  // namespace fragkin
