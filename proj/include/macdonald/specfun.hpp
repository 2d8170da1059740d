#pragma once

#include <cmath>
#include <complex>

namespace macdonald {

using cplx = std::complex<double>;

struct ScaledBesselPair {
    double mu;
    double x;
    double i_scaled;  // e^{-x} I_mu(x)
    double k_scaled;  // e^{x} K_mu(x)
};

struct GValue {
    double mu;
    double x;
    double log_g;
    bool signed_zero = false;  // mu = 2n+3/2 and x sits on the real zero
};

ScaledBesselPair ik_scaled(double mu, double x);

// log I_mu(x) and log K_mu(x) for mu >= 0, valid where the plain values over/underflow.
double log_bessel_i(double mu, double x);
double log_bessel_k(double mu, double x);

// K_mu(z) on |arg z| < pi. Temme series for |z| < 2, Steed continued fraction above.
cplx k_complex(double mu, cplx z);
// K_mu and K_{mu+1} in one pass.
void k_complex_pair(double mu, cplx z, cplx& k_mu, cplx& k_mu1);
cplx k_prime_complex(double mu, cplx z);
// e^z K_mu(z) for Re z >= 0, finite where K itself underflows.
cplx k_complex_scaled(double mu, cplx z);

// Ascending series; intended for moderate |z|.
cplx i_complex(double mu, cplx z);

GValue g_fun(double mu, double x);
inline double inv_g(double mu, double x) { return std::exp(-g_fun(mu, x).log_g); }

// sin(pi x), cos(pi x) exact at integers and half-integers.
double sin_pi(double x);
double cos_pi(double x);
bool is_half_integer(double x, double tol = 0.0);

double gamma_fn(double x);
double log_gamma_abs(double x);
double digamma(double x);
double erfcx(double x);
cplx erfcx(cplx z);
// 1 - sqrt(pi) u erfcx(u), computed without cancellation for large u.
double erfcx_tail(double u);
double binomial(double a, int k);

enum class AuxKind { gamma, digamma, erfcx, binomial };
double aux(AuxKind kind, double x, int k = 0);

// (nu, k) = Gamma(nu+k+1/2) / (k! Gamma(nu-k+1/2)).
double hankel_symbol(double nu, int k);

}  // namespace macdonald
