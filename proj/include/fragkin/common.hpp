#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

namespace fragkin {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Thrown when a measure or initial-condition specification violates its
// construction invariants.
class construction_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Thrown when an evaluator is queried outside its domain (e.g. varphi below
// the range infimum of t/phi(t)).
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Quadrature failed to reach the requested tolerance; carries the achieved one.
class quadrature_error : public std::runtime_error {
public:
    quadrature_error(const std::string& what, double achieved_tol)
        : std::runtime_error(what + " (achieved relative error " +
                             std::to_string(achieved_tol) + ")"),
          achieved(achieved_tol) {}
    double achieved;
};

// Series evaluation exceeded its precision budget.
class series_error : public std::runtime_error {
public:
    series_error(const std::string& what, double max_term, double partial_sum)
        : std::runtime_error(what + " (max |term| " + std::to_string(max_term) +
                             ", partial sum " + std::to_string(partial_sum) + ")"),
          max_term(max_term), partial_sum(partial_sum) {}
    double max_term;
    double partial_sum;
};

// Simulation window cap exceeded or an invalid simulation parameter.
class simulation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Config / CLI schema problems; maps to exit code 2.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline double abs_alpha(double alpha) { return -alpha; }

// 17 significant digits: enough for exact double round trips in text output.
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace fragkin
