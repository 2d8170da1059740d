#pragma once

#include <vector>

#include "macdonald/specfun.hpp"

namespace macdonald {

// First hitting time of b for the Bessel process of index nu started at a.
struct HittingSpec {
    double nu;
    double a;
    double b;
    bool downward() const { return b < a; }
};

struct JZeroTable {
    double mu;
    std::vector<double> zeros;
};

enum class LevyCase {
    a0_minus_half = 1,     // b = 0, nu = -1/2
    a0_half_integer = 2,   // b = 0, nu <= -3/2 half-integer
    a0_low = 3,            // b = 0, -3/2 < nu < 0
    a0_high = 4,           // b = 0, nu < -3/2
    ab_half = 5,           // 0 < b < a, |nu| = 1/2
    ab_half_integer = 6,   // |nu| >= 3/2 half-integer
    ab_low = 7,            // |nu| < 3/2
    ab_high = 8,           // |nu| > 3/2
    up_from_zero = 9,      // a = 0 < b
    up = 10,               // 0 < a < b, nu > -1
    up_negative = 11       // 0 < a < b, nu <= -1
};

struct LevyValue {
    double value;
    double tail_bound = 0.0;  // upward series only
    int terms = 0;
};

JZeroTable bessel_j_zeros(double mu, int count);
LevyCase levy_case(const HittingSpec& spec);
double levy_density(const HittingSpec& spec, double x);
LevyValue levy_density_detail(const HittingSpec& spec, double x);
// log E[exp(-lambda tau) | tau < inf]
double log_laplace(const HittingSpec& spec, double lambda);
// Same quantity from the log-difference of K (the direct form), for cross-checks.
double log_laplace_direct(const HittingSpec& spec, double lambda);
// |int (e^{-lambda x} - 1) p(x) dx - phi(lambda)| for downward specs.
double verify_levy(const HittingSpec& spec, double lambda);

}  // namespace macdonald
