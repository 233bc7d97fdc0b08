#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "fragkin/common.hpp"

namespace fragkin {

inline constexpr double kRootTol = 1e-12;
// Bracket growth bails out here; beyond it the target is treated as
// unreachable (out of range).
inline constexpr double kBracketCap = 1e300;

// Inverse of a nondecreasing function: finds x with f(x) = target.
// Brackets grow geometrically from `start` in both directions, then the root
// is pinned by bisection with secant refinement steps.
inline double monotone_inverse(const std::function<double(double)>& f, double target,
                               double start = 1.0, double abs_tol = kRootTol,
                               double lo_limit = 0.0) {
    double lo = start, hi = start;
    double flo = f(lo), fhi = flo;
    // grow up
    while (fhi < target) {
        lo = hi;
        flo = fhi;
        hi *= 2.0;
        if (hi > kBracketCap)
            throw domain_error("monotone_inverse: target " + std::to_string(target) +
                               " above the function range");
        fhi = f(hi);
    }
    // grow down
    while (flo > target) {
        hi = lo;
        fhi = flo;
        lo *= 0.5;
        if (lo < lo_limit + 1e-300 || lo < 1e-300)
            throw domain_error("monotone_inverse: target " + std::to_string(target) +
                               " below the function range");
        flo = f(lo);
    }
    if (flo == target) return lo;
    if (fhi == target) return hi;
    for (int it = 0; it < 400 && hi - lo > abs_tol * (1.0 + std::fabs(lo)); ++it) {
        double mid;
        if (fhi > flo) {
            // secant proposal, clamped to the middle half of the bracket
            mid = lo + (target - flo) * (hi - lo) / (fhi - flo);
            const double w = hi - lo;
            if (!(mid > lo + 0.01 * w && mid < hi - 0.01 * w)) mid = 0.5 * (lo + hi);
        } else {
            mid = 0.5 * (lo + hi);
        }
        const double fm = f(mid);
        if (fm < target) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace fragkin
