#include "macdonald/specfun.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>

#include <array>
#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "macdonald/errors.hpp"

namespace macdonald {

namespace {

// e^{-x} I_m(x). GSL returns NaN for orders at or near zero beyond x ~ 290; recover from the Wronskian there.
double gsl_i_scaled(double m, double x, int& status) {
    gsl_sf_result r;
    status = gsl_sf_bessel_Inu_scaled_e(m, x, &r);
    if (std::isfinite(r.val)) return r.val;
    gsl_sf_result i1, k0, k1;
    gsl_sf_bessel_Inu_scaled_e(m + 1.0, x, &i1);
    gsl_sf_bessel_Knu_scaled_e(m, x, &k0);
    gsl_sf_bessel_Knu_scaled_e(m + 1.0, x, &k1);
    status = GSL_SUCCESS;
    return (1.0 / x - i1.val * k0.val) / k1.val;
}

constexpr double kPi = std::numbers::pi;
constexpr double kEps = 1e-16;

struct GslQuiet {
    GslQuiet() { gsl_set_error_handler_off(); }
};
const GslQuiet gsl_quiet;

// Taylor coefficients of 1/Gamma(z) about 0, index = power.
constexpr std::array<double, 31> kRGamma = {
    0.0,
    1.0,
    0.57721566490153286061,
    -0.65587807152025388108,
    -0.042002635034095235529,
    0.1665386113822914895,
    -0.042197734555544336748,
    -0.0096219715278769735621,
    0.0072189432466630995424,
    -0.0011651675918590651121,
    -0.00021524167411495097282,
    0.00012805028238811618615,
    -0.000020134854780788238656,
    -1.2504934821426706573e-6,
    1.1330272319816958824e-6,
    -2.0563384169776071035e-7,
    6.1160951044814158179e-9,
    5.0020076444692229301e-9,
    -1.1812745704870201446e-9,
    1.0434267116911005105e-10,
    7.782263439905071254e-12,
    -3.6968056186422057082e-12,
    5.100370287454475979e-13,
    -2.0583260535665067832e-14,
    -5.3481225394230179824e-15,
    1.2267786282382607902e-15,
    -1.1812593016974587695e-16,
    1.1866922547516003326e-18,
    1.4123806553180317816e-18,
    -2.2987456844353702066e-19,
    1.7144063219273374334e-20,
};

// Temme's auxiliary gamma combinations for |mu| <= 1/2.
void temme_gammas(double mu, double& gam1, double& gam2, double& gampl, double& gammi) {
    // 1/Gamma(1+x) = sum_{k>=0} kRGamma[k+1] x^k
    double even = 0.0, odd = 0.0, p = 1.0;
    const double m2 = mu * mu;
    for (int k = 0; k + 1 < static_cast<int>(kRGamma.size()); k += 2) {
        even += kRGamma[k + 1] * p;
        if (k + 2 < static_cast<int>(kRGamma.size())) odd += kRGamma[k + 2] * p;
        p *= m2;
    }
    gam2 = even;
    gam1 = -odd;
    gampl = even + mu * odd;
    gammi = even - mu * odd;
}

void check_z(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError("K_mu: non-finite argument");
    if (z.imag() == 0.0 && z.real() <= 0.0)
        throw DomainError("K_mu: argument on the cut (-inf, 0]");
}

// K_mu, K_{mu+1} for |mu| <= 1/2, |z| < 2.
void temme_series(double xmu, cplx z, cplx& rkmu, cplx& rk1) {
    const cplx x2 = 0.5 * z;
    const double pimu = kPi * xmu;
    const double fact = std::abs(pimu) < 1e-15 ? 1.0 : pimu / std::sin(pimu);
    cplx d = -std::log(x2);
    cplx e = xmu * d;
    const cplx fact2 = std::abs(e) < 1e-15 ? cplx(1.0) : std::sinh(e) / e;
    double gam1, gam2, gampl, gammi;
    temme_gammas(xmu, gam1, gam2, gampl, gammi);
    cplx ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
    cplx sum = ff;
    e = std::exp(e);
    cplx p = 0.5 * e / gampl;
    cplx q = 0.5 / (e * gammi);
    cplx c = 1.0;
    d = x2 * x2;
    cplx sum1 = p;
    const double xmu2 = xmu * xmu;
    int i = 1;
    for (; i <= 500; ++i) {
        ff = (double(i) * ff + p + q) / (double(i) * i - xmu2);
        c *= d / double(i);
        p /= (double(i) - xmu);
        q /= (double(i) + xmu);
        const cplx del = c * ff;
        sum += del;
        const cplx del1 = c * (p - double(i) * ff);
        sum1 += del1;
        if (std::abs(del) < std::abs(sum) * kEps && std::abs(del1) < std::abs(sum1) * kEps) break;
    }
    if (i > 500) throw NumericalError("K_mu: Temme series did not converge");
    rkmu = sum;
    rk1 = sum1 * (2.0 / z);
}

// Steed's continued fraction, |mu| <= 1/2, |z| >= 2.
void steed_cf2(double xmu, cplx z, cplx& rkmu, cplx& rk1, bool scaled = false) {
    const double xmu2 = xmu * xmu;
    cplx b = 2.0 * (1.0 + z);
    cplx d = 1.0 / b;
    cplx h = d, delh = d;
    cplx q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25 - xmu2;
    cplx q = a1, c = a1;
    double a = -a1;
    cplx s = 1.0 + q * delh;
    int i = 2;
    for (; i <= 200000; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / double(i);
        const cplx qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const cplx dels = q * delh;
        s += dels;
        if (std::abs(dels) < std::abs(s) * kEps && std::abs(delh) < std::abs(h) * kEps) break;
    }
    if (i > 200000) throw NumericalError("K_mu: continued fraction did not converge");
    h = a1 * h;
    rkmu = std::sqrt(kPi / (2.0 * z)) * (scaled ? cplx(1.0) : std::exp(-z)) / s;
    rk1 = rkmu * (xmu + z + 0.5 - h) / z;
}

// I_{nu+1}(z) / I_nu(z) by the ratio continued fraction.
cplx i_ratio_cf1(double nu, cplx z) {
    const double tiny = 1e-300;
    const cplx xi2 = 2.0 / z;
    cplx f = tiny, C = f, D = 0.0;
    int j = 1;
    for (; j < 200000; ++j) {
        const cplx bj = (nu + j) * xi2;
        D = bj + D;
        if (D == 0.0) D = tiny;
        C = bj + 1.0 / C;
        if (C == 0.0) C = tiny;
        D = 1.0 / D;
        const cplx delta = C * D;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    if (j >= 200000) throw NumericalError("I_mu: ratio continued fraction did not converge");
    return f;
}

// scaled: e^z K instead of K
void k_pair_right(double m, cplx z, cplx& k0, cplx& k1, bool scaled = false) {
    const int nl = static_cast<int>(std::floor(m + 0.5));
    const double xmu = m - nl;
    if (std::abs(z) < 2.0) {
        temme_series(xmu, z, k0, k1);
        if (scaled) {
            const cplx e = std::exp(z);
            k0 *= e;
            k1 *= e;
        }
    } else {
        steed_cf2(xmu, z, k0, k1, scaled);
    }
    const cplx xi2 = 2.0 / z;
    for (int i = 1; i <= nl; ++i) {
        const cplx t = (xmu + i) * xi2 * k1 + k0;
        k0 = k1;
        k1 = t;
    }
}

cplx k_half_integer(int n, cplx z) {
    // order n + 1/2
    const double nu = n + 0.5;
    cplx sum = 0.0, pw = 1.0;
    for (int k = 0; k <= n; ++k) {
        sum += hankel_symbol(nu, k) * pw;
        pw /= 2.0 * z;
    }
    return std::sqrt(kPi / (2.0 * z)) * std::exp(-z) * sum;
}

double rgamma(double x) {
    if (x <= 0.0 && x == std::floor(x)) return 0.0;
    return 1.0 / std::tgamma(x);
}

double cf_erfc(double u) {
    // K = a1/(u + a2/(u + ...)), a_n = n/2, modified Lentz
    const double tiny = 1e-300;
    double f = tiny, C = f, D = 0.0;
    for (int n = 1; n < 5000; ++n) {
        const double an = 0.5 * n;
        const double bn = u;
        D = bn + an * D;
        if (D == 0.0) D = tiny;
        C = bn + an / C;
        if (C == 0.0) C = tiny;
        D = 1.0 / D;
        const double delta = C * D;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return f;
}

cplx cf_erfc(cplx u) {
    const double tiny = 1e-300;
    cplx f = tiny, C = f, D = 0.0;
    int n = 1;
    for (; n < 200000; ++n) {
        const double an = 0.5 * n;
        D = u + an * D;
        if (D == 0.0) D = tiny;
        C = u + an / C;
        if (C == 0.0) C = tiny;
        D = 1.0 / D;
        const cplx delta = C * D;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    if (n >= 200000) throw NumericalError("erfcx: continued fraction did not converge");
    return f;
}

}  // namespace

double sin_pi(double x) {
    double r = std::fmod(x, 2.0);
    if (r < 0) r += 2.0;
    if (r == 0.0 || r == 1.0) return 0.0;
    if (r == 0.5) return 1.0;
    if (r == 1.5) return -1.0;
    if (r > 1.0) return -std::sin(kPi * (r - 1.0));
    return std::sin(kPi * r);
}

double cos_pi(double x) { return sin_pi(x + 0.5); }

bool is_half_integer(double x, double tol) {
    const double f = x - std::floor(x);
    return std::abs(f - 0.5) <= tol;
}

double log_bessel_k(double mu, double x) {
    if (!(x > 0.0) || !std::isfinite(x) || !std::isfinite(mu))
        throw DomainError("K_mu: x must be positive and finite");
    gsl_sf_result r;
    const int st = gsl_sf_bessel_lnKnu_e(std::abs(mu), x, &r);
    if (st != GSL_SUCCESS && st != GSL_EUNDRFLW) throw NumericalError("K_mu: GSL failure");
    return r.val;
}

double log_bessel_i(double mu, double x) {
    if (!(x > 0.0) || !std::isfinite(x) || mu < 0.0)
        throw DomainError("I_mu: requires x > 0 and mu >= 0");
    if (x <= 1.0) {
        const double q = 0.25 * x * x;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 200; ++k) {
            term *= q / (k * (mu + k));
            sum += term;
            if (term < sum * 1e-17) break;
        }
        return mu * std::log(0.5 * x) - std::lgamma(mu + 1.0) + std::log(sum);
    }
    int st;
    const double v = gsl_i_scaled(mu, x, st);
    if (st != GSL_SUCCESS) throw NumericalError("I_mu: GSL failure");
    return std::log(v) + x;
}

ScaledBesselPair ik_scaled(double mu, double x) {
    if (!(x > 0.0) || !std::isfinite(x) || !std::isfinite(mu))
        throw DomainError("ik_scaled: x must be positive and finite");
    const double m = std::abs(mu);
    gsl_sf_result rk;
    int si;
    double i = gsl_i_scaled(m, x, si);
    const int sk = gsl_sf_bessel_Knu_scaled_e(m, x, &rk);
    double k = rk.val;
    if (si == GSL_EUNDRFLW) i = 0.0;
    if (sk == GSL_EOVRFLW) k = std::numeric_limits<double>::infinity();
    if (x <= 1.0) i = std::exp(log_bessel_i(m, x) - x);
    if (mu < 0.0 && m != std::floor(m)) i += (2.0 / kPi) * sin_pi(m) * std::exp(-2.0 * x) * k;
    return {mu, x, i, k};
}

void k_complex_pair(double mu, cplx z, cplx& k_mu, cplx& k_mu1) {
    check_z(z);
    const double m = std::abs(mu);
    if (std::abs(z) < 2.0 || z.real() >= 0.0) {
        k_pair_right(m, z, k_mu, k_mu1);
        return;
    }
    // z = e^{+-i pi} zeta with Re zeta > 0
    const cplx zeta = -z;
    cplx kz0, kz1;
    k_pair_right(m, zeta, kz0, kz1);
    const cplx f = i_ratio_cf1(m, zeta);
    const cplx i0 = 1.0 / (zeta * (kz1 + f * kz0));
    const cplx i1 = f * i0;
    const double sg = z.imag() > 0.0 ? 1.0 : -1.0;
    const cplx ipi(0.0, kPi);
    k_mu = std::exp(-sg * ipi * m) * kz0 - sg * ipi * i0;
    k_mu1 = std::exp(-sg * ipi * (m + 1.0)) * kz1 - sg * ipi * i1;
}

cplx k_complex_scaled(double mu, cplx z) {
    check_z(z);
    if (z.real() < 0.0) throw DomainError("k_complex_scaled: needs Re z >= 0");
    cplx k0, k1;
    k_pair_right(std::abs(mu), z, k0, k1, true);
    return k0;
}

cplx k_complex(double mu, cplx z) {
    check_z(z);
    const double m = std::abs(mu);
    if (is_half_integer(m)) return k_half_integer(static_cast<int>(std::floor(m)), z);
    cplx a, b;
    k_complex_pair(m, z, a, b);
    return a;
}

cplx k_prime_complex(double mu, cplx z) {
    check_z(z);
    const double m = std::abs(mu);
    if (is_half_integer(m)) {
        return (m / z) * k_half_integer(static_cast<int>(std::floor(m)), z) -
               k_half_integer(static_cast<int>(std::floor(m)) + 1, z);
    }
    cplx a, b;
    k_complex_pair(m, z, a, b);
    return (m / z) * a - b;
}

cplx i_complex(double mu, cplx z) {
    if (z == 0.0) return mu == 0.0 ? 1.0 : 0.0;
    if (mu < 0.0 && mu == std::floor(mu)) mu = -mu;
    const cplx q = 0.25 * z * z;
    // sum (z^2/4)^k / (k! Gamma(mu+k+1)); start past any leading zeros of 1/Gamma
    cplx sum = 0.0;
    cplx term = rgamma(mu + 1.0);
    int k0 = 0;
    if (term == 0.0) {
        while (mu + k0 + 1.0 <= 0.0) ++k0;
    }
    cplx pw = 1.0;
    for (int k = 0; k < k0; ++k) pw *= q / double(k + 1);
    term = pw * rgamma(mu + k0 + 1.0);
    for (int k = k0; k < 2000; ++k) {
        sum += term;
        term *= q / (double(k + 1) * (mu + k + 1.0));
        if (std::abs(term) < 1e-17 * std::abs(sum) && k > std::abs(z)) break;
    }
    return std::exp(mu * std::log(0.5 * z)) * sum;
}

GValue g_fun(double mu, double x) {
    if (!(mu >= 0.0)) throw DomainError("g_fun: mu must be >= 0");
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("g_fun: x must be positive");
    const double lk = log_bessel_k(mu, x);
    const double li = log_bessel_i(mu, x);
    const double s = sin_pi(mu), c = cos_pi(mu);
    const double d = li - lk;
    GValue g{mu, x, 0.0, false};
    double pivot;
    if (d <= 0.0) {
        const double r = std::exp(d);
        const double a = 1.0 + kPi * s * r, b = kPi * c * r;
        g.log_g = 2.0 * lk + std::log(a * a + b * b);
        pivot = std::abs(a);
    } else {
        const double q = std::exp(-d);
        const double a = q + kPi * s, b = kPi * c;
        g.log_g = 2.0 * li + std::log(a * a + b * b);
        pivot = std::abs(a) / kPi;
    }
    if (c == 0.0 && s < 0.0 && pivot < 1e-8) g.signed_zero = true;
    return g;
}

double gamma_fn(double x) {
    if (x <= 0.0 && x == std::floor(x)) throw DomainError("gamma: pole at non-positive integer");
    return std::tgamma(x);
}

double log_gamma_abs(double x) {
    if (x <= 0.0 && x == std::floor(x)) throw DomainError("gamma: pole at non-positive integer");
    return std::lgamma(x);
}

double digamma(double x) {
    if (x <= 0.0 && x == std::floor(x)) throw DomainError("digamma: pole at non-positive integer");
    return boost::math::digamma(x);
}

double erfcx(double x) {
    if (std::isnan(x)) throw DomainError("erfcx: NaN argument");
    if (x < 2.0) {
        if (x < -26.7) return std::numeric_limits<double>::infinity();
        return std::exp(x * x) * std::erfc(x);
    }
    return 1.0 / (std::sqrt(kPi) * (x + cf_erfc(x)));
}

double erfcx_tail(double u) {
    if (u < 2.0) return 1.0 - std::sqrt(kPi) * u * erfcx(u);
    const double k = cf_erfc(u);
    return k / (u + k);
}

cplx erfcx(cplx z) {
    if (z.imag() == 0.0) return erfcx(z.real());
    if (z.real() < 0.0) return 2.0 * std::exp(z * z) - erfcx(-z);
    const double r = std::abs(z);
    if (r >= 6.0) {
        // asymptotic series, |arg z| <= pi/2
        const cplx w = 1.0 / (2.0 * z * z);
        cplx term = 1.0, sum = 1.0;
        for (int n = 1; n < 200; ++n) {
            const cplx next = term * (-(2.0 * n - 1.0)) * w;
            if (std::abs(next) > std::abs(term)) break;
            term = next;
            sum += term;
            if (std::abs(term) < 1e-17 * std::abs(sum)) break;
        }
        return sum / (z * std::sqrt(kPi));
    }
    if (z.real() <= 1.2 || r < 2.0) {
        // e^{z^2} (1 - erf z) with the Maclaurin series of erf
        const cplx z2 = z * z;
        cplx term = z, sum = z;
        for (int n = 1; n < 400; ++n) {
            term *= -z2 / double(n);
            const cplx add = term / double(2 * n + 1);
            sum += add;
            if (std::abs(add) < 1e-17 * std::abs(sum)) break;
        }
        return std::exp(z2) * (1.0 - 2.0 / std::sqrt(kPi) * sum);
    }
    return 1.0 / (std::sqrt(kPi) * (z + cf_erfc(z)));
}

double binomial(double a, int k) {
    if (k < 0) return 0.0;
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= (a - i) / (i + 1);
    return r;
}

double hankel_symbol(double nu, int k) {
    double r = 1.0;
    const double n2 = 4.0 * nu * nu;
    for (int i = 1; i <= k; ++i) r *= (n2 - double(2 * i - 1) * (2 * i - 1)) / (4.0 * i);
    return r;
}

double aux(AuxKind kind, double x, int k) {
    switch (kind) {
        case AuxKind::gamma: return gamma_fn(x);
        case AuxKind::digamma: return digamma(x);
        case AuxKind::erfcx: return erfcx(x);
        case AuxKind::binomial: return binomial(x, k);
    }
    throw DomainError("aux: unknown kind");
}

}  // namespace macdonald
