#pragma once

#include <string>
#include <vector>

#include "macdonald/specfun.hpp"

namespace macdonald {

// Ball of radius r in R^d.
struct SausageParams {
    int d = 3;
    double r = 1.0;
    // area of the unit sphere in R^d
    double surface() const;
    // order of the Bessel process behind the radial part, d/2 - 1
    double order() const { return 0.5 * d - 1.0; }
};

struct IdentityResidual {
    std::string name;
    double residual;
};

struct SausageConstants {
    double nu = 0.0;
    int kmax = 0;
    std::vector<double> zeta;  // zeta[k-1] = sum_j z_j^{-k}
    std::vector<double> rho;   // rho[k-1] = int dy / (y^{k+1} G_|nu|(y))
    std::vector<IdentityResidual> residuals;
};

struct ExpansionTerm {
    double power;  // coeff * t^power
    double coeff;
};

struct AsymptoticExpansion {
    SausageParams params;
    std::vector<ExpansionTerm> terms;         // decreasing powers
    ExpansionTerm log_term{0.0, 0.0};         // coeff * log(t) * t^power
    double remainder_order = 0.0;             // remainder is O(t^{-remainder_order})
    double t = 0.0;
    double value = 0.0;                       // truncated expansion at t
};

struct IdentityReport {
    int d = 0;
    // the two families in their usual printed form
    std::vector<IdentityResidual> literal;
    // forms consistent with the large-time expansion; see README
    std::vector<IdentityResidual> corrected;
    double tolerance = 1e-7;
    bool literal_hold = false;
    bool corrected_hold = false;
};

SausageConstants constants(double nu, int kmax);

// Laplace transform of L at lambda, real and on the cut plane.
double laplace_L(const SausageParams& p, double lambda);
cplx laplace_L(const SausageParams& p, cplx lambda);
// lambda^{-3/2} K_{nu+1}(sqrt lambda) / K_nu(sqrt lambda)
cplx sigma_nu(double nu, cplx lambda);

double t_nu(double nu, double t);
// int_0^inf int_0^inf (xy - 1 + e^{-xy}) / (y^3 G_|nu|(y)) p(t,x) dx dy
double q_nu(double nu, double t);
// int_0^inf dy / (lambda^{3/2} (sqrt lambda + y) y G_|nu|(y))
double q_nu_laplace(double nu, double lambda);

double volume(const SausageParams& p, double t);
// S r^d T_{d/2-1}(t / 2r^2) for every d, no per-dimension shortcuts.
double volume_generic(const SausageParams& p, double t);

AsymptoticExpansion expansion(const SausageParams& p, double t, int n_terms = 0);
// L(t) minus the truncated expansion, formed from the tails so the leading terms never cancel.
double expansion_remainder(const SausageParams& p, double t, bool include_log = true);

IdentityReport identity_checks(int d);

// Small-argument law 1/G_m(x) = kappa x^{2m} (1 + sum a_k x^{2k} + a_m x^{2m} log(1/x) + ...).
double kappa_m(int m);
double asym_b(int m, int k);
double asym_b(int m, int k, int h);
double asym_a(int m, int k);
// Same coefficients read off the power/log series of 1/G_m built from the Bessel series.
double asym_a_series(int m, int k);
// Q_k(x) = 1/G_m(x) - kappa x^{2m} sum_{n<=k} a_n x^{2n}
double q_remainder(int m, int k, double x);
// xi_k = int_0^inf Q_k(y) / y^{2m+2+2k} dy
double xi(int m, int k);

// R_n(x) = e^{-x} - sum_{k<=n} (-x)^k / k!
double gauss_remainder(int n, double x);

}  // namespace macdonald
