#include "macdonald/levy.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "macdonald/errors.hpp"
#include "macdonald/quadrature.hpp"
#include "macdonald/ratios.hpp"

namespace macdonald {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfTol = 1e-9;
constexpr int kMaxTerms = 20000;

void validate(const HittingSpec& s) {
    if (!std::isfinite(s.nu) || !std::isfinite(s.a) || !std::isfinite(s.b))
        throw DomainError("HittingSpec: non-finite parameter");
    if (s.a < 0.0 || s.b < 0.0) throw DomainError("HittingSpec: radii must be non-negative");
    if (s.a == s.b) throw DomainError("HittingSpec: a and b must differ");
    if (s.downward() && s.b == 0.0 && !(s.nu < 0.0))
        throw DomainError("HittingSpec: reaching 0 requires nu < 0");
    if (!s.downward() && s.a == 0.0 && !(s.nu > -1.0))
        throw DomainError("HittingSpec: start at 0 requires nu > -1");
}

struct Downward {
    double m, c;
    bool half;
    const ZeroSet* zeros = nullptr;
};

Downward prepare(const HittingSpec& s) {
    Downward d;
    d.m = std::abs(s.nu);
    d.half = is_half_integer(d.m, kHalfTol);
    d.c = d.half ? 0.0 : cos_pi(d.m);
    if (d.m > 1.5 || (d.half && d.m >= 1.5)) d.zeros = &zeros_of(d.half ? std::floor(d.m) + 0.5 : d.m);
    return d;
}

// int_0^inf f for the index-0 kernel; in u = 1/log(1/eta) the integrand turns on
// near eta ~ c/sqrt(x), which moves towards u = 0 as x grows
template <class F>
double index_zero_integral(F& f, double x, double a, double b, const QuadSpec& qs) {
    const double c = 0.5;
    const double umin = 1.0 / 700.0, umax = -1.0 / std::log(c);
    auto g = [&](double u) {
        const double y = std::exp(-1.0 / u);
        return f(y) * (y / (u * u));
    };
    std::vector<double> pts{umin, umax};
    for (double r : {a, b}) {
        if (r <= 0.0) continue;
        const double eta = std::sqrt(2.0) * r / std::sqrt(x);
        if (!(eta < c)) continue;
        const double u0 = -1.0 / std::log(eta);
        for (double k : {0.5, 0.8, 1.0, 1.25, 2.0})
            if (u0 * k > umin && u0 * k < umax) pts.push_back(u0 * k);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    double I = quad_adaptive(g, pts, qs).value;
    const double g1 = g(umin), g2 = g(2.0 * umin), g3 = g(3.0 * umin);
    I += umin * ((23.0 / 12.0) * g1 - (4.0 / 3.0) * g2 + (5.0 / 12.0) * g3);
    I += quad_semiinf([&](double t) { return f(c + t); }, EndpointBehavior::exp(2.0), qs).value;
    return I;
}

double downward_density(const HittingSpec& s, const Downward& d, double x) {
    const double rt2 = std::sqrt(2.0);
    double v = (s.a - s.b) / std::sqrt(2.0 * kPi);
    if (d.zeros) {
        double poles = 0.0;
        for (const auto& z : d.zeros->zeros) {
            cplx e = quad_gauss_laplace(x, -z / (rt2 * s.a));
            if (s.b > 0.0) e -= quad_gauss_laplace(x, -z / (rt2 * s.b));
            poles += e.real();
        }
        v -= poles / (2.0 * std::sqrt(kPi));
    }
    if (d.c != 0.0) {
        const double sx = std::sqrt(x);
        auto f = [&](double eta) {
            double k = erfcx(eta * sx / (rt2 * s.a));
            if (s.b > 0.0) k -= erfcx(eta * sx / (rt2 * s.b));
            return std::sqrt(kPi * x) * k * inv_g(d.m, eta) / eta;
        };
        const QuadSpec qs{1e-11, 1e-300, 8000};
        double I;
        if (d.m == 0.0) {
            I = index_zero_integral(f, x, s.a, s.b, qs);
        } else {
            EndpointBehavior b = EndpointBehavior::exp(2.0);
            if (s.b == 0.0 && 2.0 * d.m - 1.0 < 0.0) b.zero_pow(2.0 * d.m - 1.0);
            I = quad_semiinf(f, b, qs).value;
        }
        v += d.c * I / (2.0 * std::sqrt(kPi));
    }
    return v / x / std::sqrt(x);
}

LevyValue upward_series(const HittingSpec& s, double x) {
    const double mu = s.nu > -1.0 ? s.nu : -s.nu;
    const double sb = x / (2.0 * s.b * s.b);
    const double sa = s.a > 0.0 ? x / (2.0 * s.a * s.a) : 0.0;
    std::vector<double> j;
    LevyValue out{0.0};
    double sum = 0.0, bound = INFINITY;
    int n = 0;
    while (n < kMaxTerms) {
        if (n + 1 >= static_cast<int>(j.size())) {
            const int start = static_cast<int>(j.size()) + 1;
            const int chunk = std::min(256, kMaxTerms + 1 - static_cast<int>(j.size()));
            j.resize(j.size() + chunk);
            boost::math::cyl_bessel_j_zero(mu, start, chunk, j.begin() + (start - 1));
        }
        const double jn = j[n];
        const double eb = std::exp(-jn * jn * sb);
        sum += s.a > 0.0 ? eb - std::exp(-jn * jn * sa) : eb;
        ++n;
        // later terms shrink at least geometrically with this ratio
        const double jm = j[n];
        const double r = std::exp(-(jm * jm - jn * jn) * sb);
        bound = std::exp(-jm * jm * sb) / (1.0 - r);
        if (bound <= 1e-12 * sum) break;
    }
    out.value = sum / x;
    out.tail_bound = bound / x;
    out.terms = n;
    if (!(bound <= 1e-12 * sum))
        throw NumericalError("levy_density: upward series not converged; partial sum " + std::to_string(out.value) +
                             ", tail bound " + std::to_string(out.tail_bound));
    return out;
}

}  // namespace

JZeroTable bessel_j_zeros(double mu, int count) {
    if (!(mu > -1.0) || !std::isfinite(mu)) throw DomainError("bessel_j_zeros: mu must exceed -1");
    if (count < 1) throw DomainError("bessel_j_zeros: count must be positive");
    JZeroTable t{mu, std::vector<double>(count)};
    boost::math::cyl_bessel_j_zero(mu, 1, count, t.zeros.begin());
    for (double z : t.zeros)
        if (!(std::abs(boost::math::cyl_bessel_j(mu, z)) < 1e-10))
            throw NumericalError("bessel_j_zeros: zero failed verification");
    return t;
}

LevyCase levy_case(const HittingSpec& s) {
    validate(s);
    if (!s.downward()) {
        if (s.a == 0.0) return LevyCase::up_from_zero;
        return s.nu > -1.0 ? LevyCase::up : LevyCase::up_negative;
    }
    const double m = std::abs(s.nu);
    const bool half = is_half_integer(m, kHalfTol);
    if (s.b == 0.0) {
        if (half) return m < 1.0 ? LevyCase::a0_minus_half : LevyCase::a0_half_integer;
        return m < 1.5 ? LevyCase::a0_low : LevyCase::a0_high;
    }
    if (half) return m < 1.0 ? LevyCase::ab_half : LevyCase::ab_half_integer;
    return m < 1.5 ? LevyCase::ab_low : LevyCase::ab_high;
}

LevyValue levy_density_detail(const HittingSpec& s, double x) {
    validate(s);
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("levy_density: x must be positive");
    if (!s.downward()) return upward_series(s, x);
    return {downward_density(s, prepare(s), x)};
}

double levy_density(const HittingSpec& s, double x) { return levy_density_detail(s, x).value; }

double log_laplace_direct(const HittingSpec& s, double lambda) {
    validate(s);
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("log_laplace: lambda must be positive");
    const double r = std::sqrt(2.0 * lambda);
    const double m = std::abs(s.nu);
    if (s.downward()) {
        const double ya = s.a * r;
        if (s.b == 0.0) return m * std::log(ya) + log_bessel_k(m, ya) - ((m - 1.0) * std::log(2.0) + std::lgamma(m));
        return m * std::log(s.a / s.b) + log_bessel_k(m, ya) - log_bessel_k(m, s.b * r);
    }
    const double yb = s.b * r;
    if (s.a == 0.0) return s.nu * std::log(yb / 2.0) - std::lgamma(s.nu + 1.0) - log_bessel_i(s.nu, yb);
    if (s.nu > -1.0) return s.nu * std::log(s.b / s.a) + log_bessel_i(s.nu, s.a * r) - log_bessel_i(s.nu, yb);
    return s.nu * std::log(s.a / s.b) + log_bessel_i(-s.nu, s.a * r) - log_bessel_i(-s.nu, yb);
}

double log_laplace(const HittingSpec& s, double lambda) {
    validate(s);
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("log_laplace: lambda must be positive");
    if (!(s.downward() && s.b > 0.0 && s.nu == 0.0)) return log_laplace_direct(s, lambda);
    const double r = std::sqrt(2.0 * lambda), A = s.a * r, B = s.b * r;
    auto f = [&](double eta) { return std::log1p((A - B) / (eta + B)) * inv_g(0.0, eta) / eta; };
    const double I = quad_semiinf(f, EndpointBehavior::exp(2.0).zero_log2().at(0.5), QuadSpec{1e-12, 1e-300, 8000}).value;
    return -(A - B) - I;
}

double verify_levy(const HittingSpec& s, double lambda) {
    validate(s);
    if (!s.downward()) throw DomainError("verify_levy: only downward hitting times are covered");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("verify_levy: lambda must be positive");
    const Downward d = prepare(s);
    const bool closed = d.c == 0.0;
    auto f = [&](double x) { return std::expm1(-lambda * x) * downward_density(s, d, x); };
    const QuadSpec spec = closed ? QuadSpec{1e-13, 1e-300, 8000} : QuadSpec{1e-9, 1e-300, 8000};
    // index 0 leaves a 1/(x log^2 x) tail
    const EndpointBehavior b =
        d.m == 0.0 ? EndpointBehavior{}.zero_pow(-0.5).inf_log2().at(4.0) : EndpointBehavior{}.zero_pow(-0.5).inf_pow(-1.5);
    const double lhs = quad_semiinf(f, b, spec).value;
    return std::abs(lhs - log_laplace(s, lambda));
}

}  // namespace macdonald
