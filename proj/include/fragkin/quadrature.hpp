#pragma once

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <functional>

#include "fragkin/common.hpp"

namespace fragkin {

// Default relative tolerance for all measure integrals.
inline constexpr double kQuadratureTol = 1e-10;

// Adaptive Gauss-Kronrod on a finite interval.
template <typename F>
double integrate(F&& f, double a, double b, double rel_tol = kQuadratureTol) {
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, 12, rel_tol, &err);
    if (std::isnan(v)) throw quadrature_error("integrand produced NaN", err);
    const double scale = std::max(std::fabs(v), 1e-300);
    if (err / scale > 50 * rel_tol && err > 1e-14)
        throw quadrature_error("quadrature did not converge", err / scale);
    return v;
}

// Integral over (0,1) with possible endpoint singularities. tanh_sinh clusters
// nodes at both endpoints, which is the substitution behaviour the measure
// integrals need (u = -ln x near 0, u = 1-x near 1).
template <typename F>
double integrate_unit(F&& f, double rel_tol = kQuadratureTol) {
    boost::math::quadrature::tanh_sinh<double> integrator;
    double err = 0.0, l1 = 0.0;
    const double v = integrator.integrate(f, 0.0, 1.0, std::sqrt(rel_tol), &err, &l1);
    if (std::isnan(v)) throw quadrature_error("integrand produced NaN", err);
    return v;
}

// Integral over (a, inf).
template <typename F>
double integrate_upper(F&& f, double a, double rel_tol = kQuadratureTol) {
    if (a == 0.0) {
        boost::math::quadrature::exp_sinh<double> integrator;
        double err = 0.0;
        const double v = integrator.integrate(f, std::sqrt(rel_tol), &err);
        if (std::isnan(v)) throw quadrature_error("integrand produced NaN", err);
        return v;
    }
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, std::numeric_limits<double>::infinity(), 12, rel_tol, &err);
    if (std::isnan(v)) throw quadrature_error("integrand produced NaN", err);
    return v;
}

}  // namespace fragkin
