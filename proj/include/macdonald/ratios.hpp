#pragma once

#include "macdonald/specfun.hpp"
#include "macdonald/zeros.hpp"

namespace macdonald {

enum class RatioCase {
    half_integer_low,   // |nu| = 1/2
    half_integer_high,  // |nu| >= 3/2, half-integer
    generic_low,        // |nu| < 3/2
    generic_high        // |nu| > 3/2
};

struct RatioDecomposition {
    double nu;
    cplx w;
    RatioCase which;
    double constant_part = 1.0;
    cplx pole_at_zero;   // 2 nu^+ / w
    cplx pole_sum;       // sum_j 1/(z_j - w)
    cplx integral_part;  // cos(pi nu) int dx/(x(x+w)G_|nu|(x))
    cplx total;
};

cplx ratio_direct(double nu, cplx w);
RatioDecomposition ratio_decomposed(double nu, cplx w);
// K_{nu+rho}(w)/K_nu(w) by the H-kernel representation.
cplx ratio_general(double nu, double rho, cplx w);
// log(x^mu K_mu(x)) via zeros and the G integral.
double log_xk(double mu, double x);

// Zero sets are memoised per order; safe to call concurrently.
const ZeroSet& zeros_of(double nu);

}  // namespace macdonald
