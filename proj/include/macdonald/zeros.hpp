#pragma once

#include <vector>

#include "macdonald/specfun.hpp"

namespace macdonald {

struct MonicPoly {
    std::vector<cplx> coeffs;  // ascending powers; coeffs.back() == 1
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    cplx operator()(cplx z) const;
};

enum class SeriesKind { a_large_x, b_small_x };

struct SeriesCoeffs {
    SeriesKind kind;
    double nu;
    std::vector<double> values;
};

enum class Direction { descending, ascending };

struct PowerSums {
    Direction direction;
    double nu;
    std::vector<cplx> values;  // values[n-1] = sum_j z_j^n, or z_j^{-n} when ascending
};

struct ZeroSet {
    double nu = 0.0;
    int count = 0;
    std::vector<cplx> zeros;
    std::vector<double> residuals;
    // roots of the two polynomial routes before refinement (empty for half-integer order)
    std::vector<cplx> descending_roots;
    std::vector<cplx> ascending_roots;
    double route_agreement = 0.0;
    bool half_integer = false;
};

struct CountCheck {
    int count;
    double numeric;   // nu - 1/2 + cos(pi nu) int dy/(y G_nu); NaN when not applicable
    bool applicable;
};

int count_zeros(double nu);
CountCheck count_zeros_checked(double nu);
double theta(double nu);

// int_0^inf y^k / G_nu(y) dy, k may be negative (needs k + 2 nu > -1).
double g_moment(double nu, int k);

MonicPoly half_integer_poly(double nu);
SeriesCoeffs series_coeffs(SeriesKind kind, double nu, int order);
PowerSums power_sums(Direction dir, double nu, int count = -1);
MonicPoly newton_poly(const PowerSums& ps);
// Monic polynomial from the first `degree` power sums of its roots.
MonicPoly newton_poly(const std::vector<cplx>& p, int degree);
std::vector<cplx> poly_roots(const MonicPoly& p);
ZeroSet find_zeros(double nu);

}  // namespace macdonald
