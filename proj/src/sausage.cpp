#include "macdonald/sausage.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "macdonald/errors.hpp"
#include "macdonald/quadrature.hpp"
#include "macdonald/ratios.hpp"
#include "macdonald/zeros.hpp"

namespace macdonald {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kHalfTol = 1e-9;
const QuadSpec kSpec{1e-13, 1e-300, 8000};

void check_params(const SausageParams& p) {
    if (p.d < 1) throw DomainError("SausageParams: dimension must be >= 1");
    if (!(p.r > 0.0) || !std::isfinite(p.r)) throw DomainError("SausageParams: radius must be positive");
}

void check_t(double t, const char* who) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError(std::string(who) + ": t must be positive");
}

// sum_{n >= first} (-1)^n s^{n - first} / Gamma(n/2 + 1); first = 0 gives erfcx(s)
double erfcx_series(double s, int first) {
    static const std::vector<double> c = [] {
        std::vector<double> v(160);
        for (std::size_t n = 0; n < v.size(); ++n) v[n] = (n % 2 ? -1.0 : 1.0) / std::tgamma(0.5 * n + 1.0);
        return v;
    }();
    double sum = 0.0, pw = 1.0;
    for (std::size_t n = first; n < c.size(); ++n) {
        const double term = c[n] * pw;
        sum += term;
        if (n > static_cast<std::size_t>(first) + 2 && std::abs(term) < 1e-18 * std::abs(sum)) break;
        pw *= s;
    }
    return sum;
}

// (1 - erfcx(s)) / s
double one_minus_erfcx_s(double s) { return s < 1.0 ? -erfcx_series(s, 1) : (1.0 - erfcx(s)) / s; }
// (erfcx(s) - 1 + 2 s / sqrt(pi)) / s^2
double erfcx_quad_s2(double s) {
    return s < 1.0 ? erfcx_series(s, 2) : (erfcx(s) - 1.0 + 2.0 * s / kSqrtPi) / (s * s);
}

// int_0^inf f(y) dy for kernels carrying 1/G_m(y); near 0 the integrand ~ y^p (inverse log square at m = 0),
// and the interesting scale is y ~ 1/sqrt(t)
template <class F>
double y_integral(F&& f, double m, double p, double t) {
    EndpointBehavior b = EndpointBehavior::exp(2.0);
    const double s = 1.0 / std::sqrt(t);
    if (m == 0.0) {
        b.zero_log2().at(std::min(0.5, s));
    } else {
        if (p < 0.0) b.zero_pow(p);
        b.at(std::min(1.0, s));
    }
    return quad_semiinf(f, b, kSpec).value;
}

const ZeroSet* zero_set(double m) {
    const bool half = is_half_integer(m, kHalfTol);
    if (half ? m < 1.0 : m < 1.5) return nullptr;
    return &zeros_of(half ? std::floor(m) + 0.5 : m);
}

double zeta_sum(const ZeroSet* zs, int k) {
    if (!zs) return 0.0;
    cplx s = 0.0;
    for (const auto& z : zs->zeros) s += std::pow(z, -k);
    return s.real();
}

// Re sum_j z_j^{-2} erfcx(-z_j sqrt t)
double pole_part(const ZeroSet* zs, double t) {
    if (!zs) return 0.0;
    const double st = std::sqrt(t);
    cplx s = 0.0;
    for (const auto& z : zs->zeros) s += erfcx(-z * st) / (z * z);
    return s.real();
}

double int_exp(double m, double t) {
    const double st = std::sqrt(t);
    auto f = [&](double y) { return erfcx(y * st) * inv_g(m, y) / (y * y * y); };
    return y_integral(f, m, 2.0 * m - 3.0, t);
}

double int_lin(double m, double t) {
    const double st = std::sqrt(t);
    auto f = [&](double y) { return st * one_minus_erfcx_s(y * st) * inv_g(m, y) / (y * y); };
    return y_integral(f, m, 2.0 * m - 2.0, t);
}

// e_n in erfcx(w) ~ sum e_n w^{-2n-1}
double erfcx_asym(int n) {
    double e = 1.0 / kSqrtPi;
    for (int k = 1; k <= n; ++k) e *= -(2.0 * k - 1.0) / 2.0;
    return e;
}

// Power/log series of kappa^{-1} x^{-2m} / G_m(x) in u = (x/2)^2 and L = log(x/2).
class InverseGSeries {
public:
    explicit InverseGSeries(int m) : m_(m), lmax_(2 * kJ / m + 2) {
        Poly P = zero(), I = zero();
        const double gm = std::tgamma(m);
        for (int k = 0; k < m; ++k) P[k][0] += (k % 2 ? -1.0 : 1.0) * std::tgamma(m - k) / (gm * std::tgamma(k + 1.0));
        const double sg = (m + 1) % 2 ? -1.0 : 1.0;  // (-1)^{m+1}
        for (int k = 0; m + k <= kJ; ++k) {
            const double w = 1.0 / (std::tgamma(k + 1.0) * std::tgamma(k + m + 1.0));
            P[m + k][1] += (2.0 / gm) * sg * w;
            P[m + k][0] -= (1.0 / gm) * sg * w * (digamma(k + 1.0) + digamma(k + m + 1.0));
            I[m + k][0] += w;
        }
        Poly g0 = mul(P, P);
        Poly i2 = mul(I, I);
        const double c = 4.0 * kPi * kPi / (gm * gm);
        Poly e = zero();
        for (int j = 0; j <= kJ; ++j)
            for (int l = 0; l <= lmax_; ++l) e[j][l] = -(g0[j][l] + c * i2[j][l]);
        e[0][0] = 0.0;  // leading 1 removed exactly
        Poly s = zero();
        s[0][0] = 1.0;
        for (int n = 0; n < kJ; ++n) {
            s = mul(e, s);
            s[0][0] += 1.0;
        }
        c_ = s;
    }

    double coeff(int j, int l) const { return c_[j][l]; }

    // value with the terms (n, 0), n <= k removed; k = -1 keeps everything
    double eval(double x, int k) const {
        const double u = 0.25 * x * x, L = std::log(0.5 * x);
        double v = 0.0, uj = 1.0;
        for (int j = 0; j <= kJ; ++j) {
            double lp = 1.0, row = 0.0;
            for (int l = 0; l <= lmax_; ++l) {
                if (!(l == 0 && j <= k)) row += c_[j][l] * lp;
                lp *= L;
            }
            v += row * uj;
            uj *= u;
        }
        return v;
    }

    // int_0^h (terms beyond (k, 0)) / y^{2+2k} dy, term by term
    double tail_integral(int k, double h) const {
        double v = 0.0;
        const double lh = std::log(0.5 * h);
        for (int j = 0; j <= kJ; ++j)
            for (int l = 0; l <= lmax_; ++l) {
                if ((l == 0 && j <= k) || c_[j][l] == 0.0) continue;
                const double p = 2.0 * j - 2.0 - 2.0 * k;  // >= 0 here
                // int_0^h y^p log^l(y/2) dy
                double s = 0.0, ff = 1.0;
                for (int i = 0; i <= l; ++i) {
                    s += (i % 2 ? -1.0 : 1.0) * ff * std::pow(lh, l - i) / std::pow(p + 1.0, i + 1);
                    ff *= (l - i);
                }
                v += c_[j][l] * std::pow(0.25, j) * std::pow(h, p + 1.0) * s;
            }
        return v;
    }

private:
    static constexpr int kJ = 24;
    using Poly = std::vector<std::vector<double>>;
    int m_;
    int lmax_;
    Poly c_;

    Poly zero() const { return Poly(kJ + 1, std::vector<double>(lmax_ + 1, 0.0)); }
    Poly mul(const Poly& a, const Poly& b) const {
        Poly out = zero();
        for (int i = 0; i <= kJ; ++i)
            for (int k = 0; k <= lmax_; ++k) {
                if (a[i][k] == 0.0) continue;
                for (int j = 0; i + j <= kJ; ++j)
                    for (int l = 0; k + l <= lmax_; ++l) out[i + j][k + l] += a[i][k] * b[j][l];
            }
        return out;
    }
};

const InverseGSeries& series_of(int m) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<InverseGSeries>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, std::make_unique<InverseGSeries>(m)).first;
    return *it->second;
}

void check_m(int m, const char* who) {
    if (m < 1) throw DomainError(std::string(who) + ": m must be >= 1");
}

constexpr double kSwitch = 0.5;

double sign_pow(int n) { return n % 2 ? -1.0 : 1.0; }

}  // namespace

double SausageParams::surface() const {
    check_params(*this);
    return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
}

SausageConstants constants(double nu, int kmax) {
    if (!std::isfinite(nu)) throw DomainError("constants: non-finite order");
    if (kmax < 1) throw DomainError("constants: kmax must be >= 1");
    const double m = std::abs(nu);
    if (!(m > 0.5 * kmax))
        throw DomainError("constants: rho_{nu,k} diverges unless |nu| > k/2 (|nu| = " + std::to_string(m) +
                          ", k = " + std::to_string(kmax) + ")");
    SausageConstants c;
    c.nu = nu;
    c.kmax = kmax;
    const ZeroSet* zs = zero_set(m);
    for (int k = 1; k <= kmax; ++k) {
        c.zeta.push_back(zeta_sum(zs, k));
        c.rho.push_back(g_moment(m, -k - 1));
    }
    const bool half = is_half_integer(m, kHalfTol);
    const double cs = half ? 0.0 : cos_pi(m);
    auto add = [&](const char* name, double v) { c.residuals.push_back({name, std::abs(v)}); };
    if (half) return c;
    if (m <= 1.0) {
        add("1 + rho_1 cos(pi nu)", 1.0 + c.rho[0] * cs);
    } else if (m < 1.5) {
        add("1 + rho_1 cos(pi nu)", 1.0 + c.rho[0] * cs);
        if (kmax >= 2) add("-rho_2 cos(pi nu) - 1/(2(|nu|-1))", -c.rho[1] * cs - 0.5 / (m - 1.0));
    } else {
        add("1 + zeta_1 + rho_1 cos(pi nu)", 1.0 + c.zeta[0] + c.rho[0] * cs);
        if (kmax >= 2) add("zeta_2 - rho_2 cos(pi nu) - 1/(2(|nu|-1))", c.zeta[1] - c.rho[1] * cs - 0.5 / (m - 1.0));
        if (kmax >= 3) add("zeta_3 + rho_3 cos(pi nu)", c.zeta[2] + c.rho[2] * cs);
    }
    return c;
}

cplx sigma_nu(double nu, cplx lambda) {
    const cplx w = std::sqrt(lambda);
    return ratio_direct(nu, w) / (lambda * w);
}

cplx laplace_L(const SausageParams& p, cplx lambda) {
    check_params(p);
    if (lambda.imag() == 0.0 && !(lambda.real() > 0.0)) throw DomainError("laplace_L: lambda must be positive");
    const cplx s = std::sqrt(2.0 * lambda);
    return p.surface() * std::pow(p.r, p.d - 1) / (s * lambda) * ratio_direct(p.order(), p.r * s);
}

double laplace_L(const SausageParams& p, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("laplace_L: lambda must be positive");
    return laplace_L(p, cplx(lambda, 0.0)).real();
}

double q_nu(double nu, double t) {
    check_t(t, "q_nu");
    const double m = std::abs(nu), st = std::sqrt(t);
    auto f = [&](double y) { return t * erfcx_quad_s2(y * st) * inv_g(m, y) / y; };
    return y_integral(f, m, 2.0 * m - 1.0, t);
}

double q_nu_laplace(double nu, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("q_nu_laplace: lambda must be positive");
    const double m = std::abs(nu), s = std::sqrt(lambda);
    auto f = [&](double y) { return inv_g(m, y) / ((s + y) * y); };
    EndpointBehavior b = EndpointBehavior::exp(2.0);
    if (m == 0.0) b.zero_log2().at(0.5);
    else if (2.0 * m - 1.0 < 0.0) b.zero_pow(2.0 * m - 1.0);
    return quad_semiinf(f, b, kSpec).value / (lambda * s);
}

double t_nu(double nu, double t) {
    check_t(t, "t_nu");
    if (!std::isfinite(nu)) throw DomainError("t_nu: non-finite order");
    const double m = std::abs(nu), nup = std::max(nu, 0.0);
    const double base = 2.0 * nup * t;
    if (is_half_integer(m, kHalfTol)) {
        if (m < 1.0) return base + 2.0 * std::sqrt(t / kPi);
        return base + 0.5 / (m - 1.0) - pole_part(zero_set(m), t);
    }
    const double c = cos_pi(m);
    if (m < 0.5) return base + 2.0 * std::sqrt(t / kPi) + c * q_nu(m, t);
    if (m <= 1.0) return base - c * int_lin(m, t);
    if (m < 1.5) return base + 0.5 / (m - 1.0) + c * int_exp(m, t);
    return base + 0.5 / (m - 1.0) - pole_part(zero_set(m), t) + c * int_exp(m, t);
}

double volume_generic(const SausageParams& p, double t) {
    check_params(p);
    check_t(t, "volume");
    return p.surface() * std::pow(p.r, p.d) * t_nu(p.order(), t / (2.0 * p.r * p.r));
}

double volume(const SausageParams& p, double t) {
    check_params(p);
    check_t(t, "volume");
    const double r = p.r;
    if (p.d == 1) return 2.0 * std::sqrt(2.0 * t / kPi);
    if (p.d == 3) return 2.0 * kPi * r * t + 4.0 * r * r * std::sqrt(2.0 * kPi * t);
    if (p.d % 2 == 1) {
        const double tau = t / (2.0 * r * r);
        const double br = 0.5 * (p.d - 2) * t + r * r / (p.d - 4) - r * r * pole_part(zero_set(p.order()), tau);
        return p.surface() * std::pow(r, p.d - 2) * br;
    }
    return volume_generic(p, t);
}

double kappa_m(int m) {
    check_m(m, "kappa_m");
    return 1.0 / (std::pow(4.0, m - 1) * std::tgamma(m) * std::tgamma(m));
}

double asym_b(int m, int k) {
    check_m(m, "asym_b");
    if (k < 1 || k > m - 1) throw DomainError("asym_b: k must lie in [1, m-1]");
    double s = 0.0;
    for (int h = 0; h <= k; ++h)
        s += std::tgamma(m - h) * std::tgamma(m - k + h) / (std::tgamma(h + 1.0) * std::tgamma(k - h + 1.0));
    const double g = std::tgamma(m);
    return sign_pow(k + 1) * s / (std::pow(4.0, k) * g * g);
}

// sum over compositions k = k_1 + ... + k_h of b_{k_1} ... b_{k_h}
double asym_b(int m, int k, int h) {
    check_m(m, "asym_b");
    if (h < 1 || h > k || k > m - 1) throw DomainError("asym_b: need 1 <= h <= k <= m-1");
    // table[j][i]: compositions of i into j parts
    std::vector<std::vector<double>> table(h + 1, std::vector<double>(k + 1, 0.0));
    table[0][0] = 1.0;
    for (int j = 1; j <= h; ++j)
        for (int i = j; i <= k; ++i)
            for (int part = 1; part <= i - (j - 1); ++part) table[j][i] += table[j - 1][i - part] * asym_b(m, part);
    return table[h][k];
}

double asym_a(int m, int k) {
    check_m(m, "asym_a");
    if (k < 0 || k > m) throw DomainError("asym_a: k must lie in [0, m]");
    if (k == 0) return 1.0;
    if (k == m) {
        const double g = std::tgamma(m);
        return sign_pow(m + 1) / (std::pow(4.0, m - 1) * m * g * g);
    }
    double s = 0.0;
    for (int h = 1; h <= k; ++h) s += asym_b(m, k, h);
    return s;
}

double asym_a_series(int m, int k) {
    check_m(m, "asym_a_series");
    if (k < 0 || k > m) throw DomainError("asym_a_series: k must lie in [0, m]");
    const auto& s = series_of(m);
    if (k < m) return s.coeff(k, 0) / std::pow(4.0, k);
    return -s.coeff(m, 1) / std::pow(4.0, m);
}

double q_remainder(int m, int k, double x) {
    check_m(m, "q_remainder");
    if (k < 0 || k > m - 1) throw DomainError("q_remainder: k must lie in [0, m-1]");
    if (!(x > 0.0)) throw DomainError("q_remainder: x must be positive");
    const double kap = kappa_m(m);
    if (x < kSwitch) return kap * std::pow(x, 2 * m) * series_of(m).eval(x, k);
    double poly = 0.0;
    for (int n = 0; n <= k; ++n) poly += asym_a(m, n) * std::pow(x, 2 * n);
    return inv_g(m, x) - kap * std::pow(x, 2 * m) * poly;
}

double xi(int m, int k) {
    check_m(m, "xi");
    if (k < 0 || k > m - 1) throw DomainError("xi: k must lie in [0, m-1]");
    const double kap = kappa_m(m), h = kSwitch;
    const int e = 2 * m + 2 + 2 * k;
    double v = kap * series_of(m).tail_integral(k, h);
    auto f = [&](double y) { return inv_g(m, h + y) / std::pow(h + y, e); };
    v += quad_semiinf(f, EndpointBehavior::exp(2.0), kSpec).value;
    for (int n = 0; n <= k; ++n) v -= kap * asym_a(m, n) * std::pow(h, 2 * n - 1 - 2 * k) / (2.0 * k + 1.0 - 2.0 * n);
    return v;
}

AsymptoticExpansion expansion(const SausageParams& p, double t, int n_terms) {
    check_params(p);
    check_t(t, "expansion");
    const int d = p.d;
    if (d < 5) throw DomainError("expansion: needs d >= 5");
    AsymptoticExpansion out;
    out.params = p;
    out.t = t;
    const double r = p.r, r2 = r * r, pre = p.surface() * std::pow(r, d - 2);
    const double s = 2.0 * r2;  // t = s tau
    std::vector<ExpansionTerm> terms{{1.0, 0.5 * (d - 2)}, {0.0, r2 / (d - 4)}};
    if (d % 2 == 1) {
        const ZeroSet* zs = zero_set(p.order());
        const int N = n_terms > 0 ? n_terms : d - 3;
        for (int n = 0; n < N; ++n)
            terms.push_back({-(n + 0.5), r2 * erfcx_asym(n) * zeta_sum(zs, 2 * n + 3) * std::pow(s, n + 0.5)});
        out.remainder_order = N + 0.5;
    } else {
        const int m = d / 2 - 1;
        const ZeroSet* zs = zero_set(m);
        const double sm = sign_pow(m), kap = kappa_m(m);
        for (int n = 0; n <= 2 * m - 2; ++n) {
            const double x = n <= m - 2 ? g_moment(m, -2 * n - 4) : xi(m, n - m + 1);
            terms.push_back({-(n + 0.5), r2 * erfcx_asym(n) * (zeta_sum(zs, 2 * n + 3) + sm * x) * std::pow(s, n + 0.5)});
        }
        for (int k = 0; k <= m - 1; ++k)
            terms.push_back({-(m + k - 1.0),
                             -r2 * 0.5 * kap * sign_pow(k) * std::tgamma(m + k - 1.0) * asym_a(m, k) * std::pow(s, m + k - 1)});
        const double gm = std::tgamma(m);
        out.log_term = {-(2.0 * m - 1.0), pre * std::tgamma(m - 0.5) * std::pow(r, 4 * m) / (2.0 * kSqrtPi * m * gm * gm * gm)};
        out.remainder_order = 2.0 * m - 1.0;
    }
    std::sort(terms.begin(), terms.end(), [](const ExpansionTerm& a, const ExpansionTerm& b) { return a.power > b.power; });
    if (n_terms > 0 && d % 2 == 0 && static_cast<int>(terms.size()) > n_terms) terms.resize(n_terms);
    for (auto& term : terms) term.coeff *= pre;
    out.terms = terms;
    double v = 0.0;
    for (const auto& term : terms) v += term.coeff * std::pow(t, term.power);
    v += out.log_term.coeff * std::log(t) * std::pow(t, out.log_term.power);
    out.value = v;
    return out;
}

double expansion_remainder(const SausageParams& p, double t, bool include_log) {
    const AsymptoticExpansion e = expansion(p, t);
    const double r = p.r, r2 = r * r, tau = t / (2.0 * r2);
    const double pre = p.surface() * std::pow(r, p.d - 2);
    const ZeroSet* zs = zero_set(p.order());
    double tail = -r2 * pole_part(zs, tau);
    if (p.d % 2 == 0) {
        const int m = p.d / 2 - 1;
        tail += sign_pow(m) * r2 * int_exp(m, tau);
    }
    double v = pre * tail;
    for (const auto& term : e.terms)
        if (term.power < 0.0) v -= term.coeff * std::pow(t, term.power);
    if (include_log) v -= e.log_term.coeff * std::log(t) * std::pow(t, e.log_term.power);
    return v;
}

IdentityReport identity_checks(int d) {
    if (d < 6 || d % 2) throw DomainError("identity_checks: d must be even and >= 6");
    IdentityReport rep;
    rep.d = d;
    const int m = d / 2 - 1;
    const ZeroSet* zs = zero_set(m);
    const double sd = sign_pow(d / 2);
    const double zlast = zeta_sum(zs, d - 1);
    rep.literal.push_back({"zeta_{d-1}", std::abs(zlast)});
    rep.corrected.push_back({"zeta_{d-1} - (-1)^{d/2} xi_0", std::abs(zlast - sd * xi(m, 0))});
    for (int n = 0; n <= d / 2 - 3; ++n) {
        const int k = 2 * n + 3;
        const double z = zeta_sum(zs, k), rho = g_moment(m, -k - 1);
        const std::string tag = "_" + std::to_string(k);
        rep.literal.push_back({"zeta" + tag + " + (-1)^{d/2} rho" + tag, std::abs(z + sd * rho)});
        rep.corrected.push_back({"zeta" + tag + " - (-1)^{d/2} rho" + tag, std::abs(z - sd * rho)});
    }
    auto all = [&](const std::vector<IdentityResidual>& v) {
        return std::all_of(v.begin(), v.end(), [&](const IdentityResidual& x) { return x.residual < rep.tolerance; });
    };
    rep.literal_hold = all(rep.literal);
    rep.corrected_hold = all(rep.corrected);
    return rep;
}

double gauss_remainder(int n, double x) {
    if (n < 0) throw DomainError("gauss_remainder: n must be >= 0");
    if (!(x >= 0.0)) throw DomainError("gauss_remainder: x must be >= 0");
    if (x < 2.0) {
        // sum_{k > n} (-x)^k / k!
        double term = 1.0;
        for (int k = 1; k <= n + 1; ++k) term *= -x / k;
        double s = 0.0;
        for (int k = n + 1; k < n + 200; ++k) {
            s += term;
            if (std::abs(term) < 1e-18 * std::abs(s)) break;
            term *= -x / (k + 1);
        }
        return s;
    }
    double poly = 0.0, term = 1.0;
    for (int k = 0; k <= n; ++k) {
        poly += term;
        term *= -x / (k + 1);
    }
    return std::exp(-x) - poly;
}

}  // namespace macdonald
