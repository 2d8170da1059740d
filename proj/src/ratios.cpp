#include "macdonald/ratios.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "macdonald/errors.hpp"
#include "macdonald/quadrature.hpp"

namespace macdonald {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfTol = 1e-9;
const QuadSpec kSpec{1e-12, 1e-300, 8000};

bool near_half(double m) { return is_half_integer(m, kHalfTol); }

void check_w(cplx w) {
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) throw DomainError("ratio: non-finite w");
    if (w.imag() == 0.0 && w.real() <= 0.0) throw DomainError("ratio: w must lie off (-inf, 0]");
}

EndpointBehavior weight_behavior(double m) {
    if (m == 0.0) return EndpointBehavior::exp(2.0).zero_log2().at(0.5);
    EndpointBehavior b = EndpointBehavior::exp(2.0);
    if (2.0 * m - 1.0 < 0.0) b.zero_pow(2.0 * m - 1.0);
    return b;
}

// H_{nu,rho}(x)/G_nu(x), products formed in log space
double h_over_g(double nu, double rho, double x) {
    const double q = nu + rho;
    const double lg = g_fun(nu, x).log_g;
    const double lkq = log_bessel_k(q, x), lkp = log_bessel_k(nu, x);
    double v = 0.0;
    const double c1 = cos_pi(q), c2 = cos_pi(nu), s = sin_pi(rho) / kPi;
    if (c1 != 0.0) v -= c1 * std::exp(lkq + log_bessel_i(nu, x) - lg);
    if (c2 != 0.0) v += c2 * std::exp(log_bessel_i(q, x) + lkp - lg);
    if (s != 0.0) v += s * std::exp(lkq + lkp - lg);
    return v;
}

}  // namespace

const ZeroSet& zeros_of(double nu) {
    static std::mutex mu;
    static std::map<double, std::unique_ptr<ZeroSet>> cache;
    const double m = std::abs(nu);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(m);
        if (it != cache.end()) return *it->second;
    }
    auto z = std::make_unique<ZeroSet>(find_zeros(m));
    std::lock_guard<std::mutex> lock(mu);
    auto [it, fresh] = cache.emplace(m, std::move(z));
    return *it->second;
}

cplx ratio_direct(double nu, cplx w) {
    check_w(w);
    const double m0 = std::abs(nu), m1 = std::abs(nu + 1.0);
    if (w.imag() == 0.0) {
        const double x = w.real();
        const double k0 = ik_scaled(m0, x).k_scaled, k1 = ik_scaled(m1, x).k_scaled;
        if (!(std::abs(k0) > 1e-13 * std::abs(k1))) throw DomainError("ratio_direct: K_nu(w) vanishes");
        return k1 / k0;
    }
    const bool right = w.real() > 0.0;
    const cplx k0 = right ? k_complex_scaled(m0, w) : k_complex(m0, w);
    const cplx k1 = right ? k_complex_scaled(m1, w) : k_complex(m1, w);
    if (!(std::abs(k0) > 1e-13 * std::abs(k1))) throw DomainError("ratio_direct: w is a zero of K_nu");
    return k1 / k0;
}

RatioDecomposition ratio_decomposed(double nu, cplx w) {
    check_w(w);
    if (!std::isfinite(nu)) throw DomainError("ratio_decomposed: non-finite order");
    const double m = std::abs(nu);
    RatioDecomposition d{nu, w, RatioCase::generic_low};
    d.pole_at_zero = 2.0 * std::max(nu, 0.0) / w;
    const bool half = near_half(m);
    if (half) {
        d.which = m < 1.0 ? RatioCase::half_integer_low : RatioCase::half_integer_high;
    } else {
        d.which = m < 1.5 ? RatioCase::generic_low : RatioCase::generic_high;
    }
    if (d.which == RatioCase::half_integer_high || d.which == RatioCase::generic_high) {
        const auto& zs = zeros_of(half ? std::floor(m) + 0.5 : m);
        for (const auto& z : zs.zeros) {
            if (std::abs(z - w) < 1e-13 * (1.0 + std::abs(z))) throw DomainError("ratio_decomposed: w is a zero of K_nu");
            d.pole_sum += 1.0 / (z - w);
        }
    }
    if (!half) {
        const double c = cos_pi(m);
        auto f = [&](double x) -> cplx { return inv_g(m, x) / (x * (x + w)); };
        d.integral_part = c * quad_semiinf<cplx>(f, weight_behavior(m), kSpec).value;
    }
    d.total = d.constant_part + d.pole_at_zero + d.pole_sum + d.integral_part;
    return d;
}

cplx ratio_general(double nu, double rho, cplx w) {
    check_w(w);
    if (!(nu >= 0.0) || !std::isfinite(nu)) throw DomainError("ratio_general: nu must be >= 0");
    if (!(rho >= -nu && rho < 1.0) || rho == 0.0) throw DomainError("ratio_general: rho must lie in [-nu, 1) without 0");
    if (is_half_integer(nu) && static_cast<long long>(std::llround(nu - 1.5)) % 2 == 0 && nu >= 1.5)
        throw DomainError("ratio_general: nu = 2n+3/2 is not covered");
    const double q = nu + rho;
    cplx total = 1.0;
    if (nu > 1.5) {
        for (const auto& z : zeros_of(nu).zeros) {
            const cplx kq = k_complex(q, z), k1 = k_complex(nu + 1.0, z);
            total += kq / (k1 * (z - w));
        }
    }
    auto f = [&](double x) -> cplx { return h_over_g(nu, rho, x) / (x + w); };
    EndpointBehavior b = EndpointBehavior::exp(2.0);
    if (rho > 0.0) b.zero_pow(-rho);
    total += quad_semiinf<cplx>(f, b, kSpec).value;
    return total;
}

double log_xk(double mu, double x) {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("log_xk: mu must be positive");
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("log_xk: x must be positive");
    if (std::abs(mu - 0.5) <= kHalfTol) return 0.5 * std::log(kPi / 2.0) - x;
    double v = (mu - 1.0) * std::log(2.0) + std::lgamma(mu) - x;
    const bool half = near_half(mu);
    if (mu > 1.5) {
        const auto& zs = zeros_of(half ? std::floor(mu) + 0.5 : mu);
        // conjugate pairs share |z/(z-x)|, so the sum of logs is real
        for (const auto& z : zs.zeros) v -= std::log(std::abs(z / (z - x)));
    }
    if (!half) {
        auto f = [&](double y) { return std::log1p(x / y) * inv_g(mu, y) / y; };
        v -= cos_pi(mu) * quad_semiinf(f, weight_behavior(mu), kSpec).value;
    }
    return v;
}

}  // namespace macdonald
