#include "macdonald/zeros.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "macdonald/errors.hpp"
#include "macdonald/quadrature.hpp"

namespace macdonald {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSnap = 1e-4;

// N with N + 1/2 < nu < N + 3/2
int lower_index(double m) { return static_cast<int>(std::floor(m - 0.5)); }

// exact finite sum, also usable on the cut
cplx k_half_sum(int n, cplx z) {
    const double nu = n + 0.5;
    cplx sum = 0.0, pw = 1.0;
    for (int k = 0; k <= n; ++k) {
        sum += hankel_symbol(nu, k) * pw;
        pw /= 2.0 * z;
    }
    return std::sqrt(kPi / (2.0 * z)) * std::exp(-z) * sum;
}

cplx polish_poly(const MonicPoly& p, cplx z) {
    const int n = p.degree();
    for (int it = 0; it < 4; ++it) {
        cplx f = p.coeffs[n], d = 0.0;
        for (int k = n - 1; k >= 0; --k) {
            d = d * z + f;
            f = f * z + p.coeffs[k];
        }
        if (std::abs(d) == 0.0) break;
        const cplx step = f / d;
        if (!(std::abs(step) < 1e-3 * (1.0 + std::abs(z)))) break;
        z -= step;
        if (std::abs(step) <= 1e-16 * std::abs(z)) break;
    }
    return z;
}

// damped Newton on K_m, kept in the upper half-plane
cplx refine_k(double m, cplx z) {
    for (int it = 0; it < 80; ++it) {
        cplx k0, k1;
        k_complex_pair(m, z, k0, k1);
        const cplx kp = (m / z) * k0 - k1;
        if (std::abs(kp) == 0.0) throw NumericalError("find_zeros: vanishing derivative during refinement");
        cplx dz = k0 / kp;
        if (std::abs(dz) > 0.5) dz *= 0.5 / std::abs(dz);
        cplx next = z - dz;
        if (next.imag() <= 0.0) next = {next.real(), 0.5 * z.imag()};
        const double moved = std::abs(next - z);
        z = next;
        if (moved <= 4e-16 * (1.0 + std::abs(z))) break;
    }
    return z;
}

double residual(double m, cplx z) {
    if (is_half_integer(m)) return std::abs(k_half_sum(static_cast<int>(std::floor(m)), z));
    return std::abs(k_complex(m, z));
}

void order_roots(std::vector<cplx>& r) {
    std::sort(r.begin(), r.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
}

double match_distance(const std::vector<cplx>& a, std::vector<cplx> b) {
    double worst = 0.0;
    for (const cplx& z : a) {
        auto it = std::min_element(b.begin(), b.end(),
                                   [&](cplx u, cplx v) { return std::abs(u - z) < std::abs(v - z); });
        worst = std::max(worst, std::abs(*it - z));
        b.erase(it);
    }
    return worst;
}

}  // namespace

cplx MonicPoly::operator()(cplx z) const {
    cplx f = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) f = f * z + *it;
    return f;
}

int count_zeros(double nu) {
    if (!std::isfinite(nu)) throw DomainError("count_zeros: non-finite order");
    const double m = std::abs(nu);
    if (m < 1.5) return 0;
    if (is_half_integer(m)) return static_cast<int>(m - 0.5);
    return 2 * static_cast<int>(std::round((m - 0.5) / 2.0));
}

double theta(double nu) {
    if (!std::isfinite(nu)) throw DomainError("theta: non-finite order");
    if (is_half_integer(nu) && static_cast<long long>(std::llround(nu - 0.5)) % 2 != 0)
        throw DomainError("theta: undefined when nu - 1/2 is an odd integer");
    return std::atan2(cos_pi(nu), sin_pi(nu));
}

double g_moment(double nu, int k) {
    const double m = std::abs(nu);
    const double p = k + 2.0 * m;
    auto f = [&](double y) { return std::pow(y, k) * inv_g(m, y); };
    const QuadSpec spec{1e-12, 1e-300, 8000};
    if (m == 0.0 && k == -1) return quad_semiinf(f, EndpointBehavior::exp(2.0).zero_log2().at(0.5), spec).value;
    if (!(p > -1.0)) throw DomainError("g_moment: integrand not integrable at 0");
    EndpointBehavior b = EndpointBehavior::exp(2.0);
    if (p < 0.0) b.zero_pow(p);
    return quad_semiinf(f, b, spec).value;
}

CountCheck count_zeros_checked(double nu) {
    const int n = count_zeros(nu);
    const double m = std::abs(nu);
    if (is_half_integer(m)) return {n, std::numeric_limits<double>::quiet_NaN(), false};
    return {n, m - 0.5 + cos_pi(m) * g_moment(m, -1), true};
}

MonicPoly half_integer_poly(double nu) {
    const double m = std::abs(nu);
    if (!is_half_integer(m)) throw DomainError("half_integer_poly: order must be a half-integer");
    const int n = static_cast<int>(std::floor(m));
    MonicPoly p;
    p.coeffs.resize(n + 1);
    for (int k = 0; k <= n; ++k) p.coeffs[k] = hankel_symbol(m, n - k) / std::ldexp(1.0, n - k);
    return p;
}

SeriesCoeffs series_coeffs(SeriesKind kind, double nu, int order) {
    if (order < 0) throw DomainError("series_coeffs: negative order");
    if (!std::isfinite(nu)) throw DomainError("series_coeffs: non-finite order");
    SeriesCoeffs s{kind, nu, std::vector<double>(order + 1, 0.0)};
    auto& c = s.values;
    if (kind == SeriesKind::a_large_x) {
        for (int n = 0; n <= order; ++n) {
            double v = hankel_symbol(nu + 1.0, n) / std::ldexp(1.0, n);
            for (int k = 0; k < n; ++k) v -= hankel_symbol(nu, n - k) / std::ldexp(1.0, n - k) * c[k];
            c[n] = v;
        }
        return s;
    }
    const int N = lower_index(nu);
    if (N < 1 || is_half_integer(nu) || !(nu > N + 0.5 && nu < N + 1.5))
        throw DomainError("series_coeffs: small-x coefficients need N+1/2 < nu < N+3/2 with N >= 1");
    if (order > 2 * N + 1) throw DomainError("series_coeffs: small-x order exceeds 2N+1");
    const double tn = 2.0 * nu;
    for (int n = 0; n <= order; ++n) {
        double lhs = binomial(nu + 0.5, n) * std::ldexp(1.0, n);
        for (int i = 0; i < n; ++i) lhs /= (tn + 1.0 - i);
        double v = lhs;
        for (int k = 0; k < n; ++k) {
            const int j = n - k;
            double w = binomial(nu - 0.5, j) * std::ldexp(1.0, j);
            for (int i = 1; i <= j; ++i) w /= (tn - i);
            v -= w * c[k];
        }
        c[n] = v;
    }
    return s;
}

PowerSums power_sums(Direction dir, double nu, int count) {
    const double m = std::abs(nu);
    if (count < 0) count = count_zeros(m);
    PowerSums ps{dir, nu, {}};
    if (count == 0) return ps;
    const double c = cos_pi(m);
    auto moment = [&](int k) { return c == 0.0 ? 0.0 : c * g_moment(m, k); };
    if (dir == Direction::descending) {
        const auto a = series_coeffs(SeriesKind::a_large_x, m, count + 1).values;
        for (int n = 1; n <= count; ++n)
            ps.values.push_back(-a[n + 1] + ((n % 2) ? -1.0 : 1.0) * moment(n - 1));
        return ps;
    }
    const int N = lower_index(m);
    if (N < 1 || is_half_integer(m)) throw DomainError("power_sums: ascending route needs |nu| > 3/2, not a half-integer");
    if (count > 2 * N) throw DomainError("power_sums: ascending route limited to 2N sums");
    const auto b = series_coeffs(SeriesKind::b_small_x, m, count).values;
    ps.values.push_back(-1.0 - moment(-2));
    for (int n = 2; n <= count; ++n) ps.values.push_back(2.0 * m * b[n] + ((n % 2) ? -1.0 : 1.0) * moment(-n - 1));
    return ps;
}

MonicPoly newton_poly(const std::vector<cplx>& p, int degree) {
    if (degree < 0 || static_cast<int>(p.size()) < degree) throw DomainError("newton_poly: not enough power sums");
    std::vector<cplx> xi(degree + 1);
    xi[0] = 1.0;
    for (int n = 1; n <= degree; ++n) {
        cplx s = 0.0;
        for (int k = 1; k <= n; ++k) s += xi[n - k] * p[k - 1];
        xi[n] = -s / double(n);
    }
    MonicPoly out;
    out.coeffs.resize(degree + 1);
    for (int n = 0; n <= degree; ++n) out.coeffs[n] = xi[degree - n];
    return out;
}

MonicPoly newton_poly(const PowerSums& ps) {
    const int N = static_cast<int>(ps.values.size());
    MonicPoly w = newton_poly(ps.values, N);
    if (ps.direction == Direction::descending) return w;
    // roots of w are 1/z_j; reverse and normalise
    const cplx lead = w.coeffs[0];
    if (std::abs(lead) == 0.0) throw NumericalError("newton_poly: reciprocal polynomial has a zero root");
    MonicPoly out;
    out.coeffs.resize(N + 1);
    for (int n = 0; n <= N; ++n) out.coeffs[n] = w.coeffs[N - n] / lead;
    return out;
}

std::vector<cplx> poly_roots(const MonicPoly& p) {
    const int n = p.degree();
    if (n < 1) return {};
    if (std::abs(p.coeffs[n] - 1.0) > 1e-14) throw DomainError("poly_roots: polynomial must be monic");
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) C(i, n - 1) = -p.coeffs[i];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    if (es.info() != Eigen::Success) throw NumericalError("poly_roots: eigenvalue iteration failed");
    std::vector<cplx> r(n);
    for (int i = 0; i < n; ++i) r[i] = polish_poly(p, es.eigenvalues()[i]);
    order_roots(r);
    return r;
}

ZeroSet find_zeros(double nu) {
    ZeroSet zs;
    zs.nu = nu;
    const double m = std::abs(nu);
    zs.count = count_zeros(m);
    if (zs.count == 0) return zs;

    const double nh = std::floor(m) + 0.5;
    std::vector<cplx> seeds;
    if (std::abs(m - nh) < kSnap) {
        auto roots = poly_roots(half_integer_poly(nh));
        if (m == nh) {
            // closed form; Newton on the polynomial is enough
            zs.half_integer = true;
            for (auto& z : roots)
                if (std::abs(z.imag()) < 1e-14 * std::abs(z)) z = {z.real(), 0.0};
            zs.zeros = roots;
            for (const auto& z : roots) zs.residuals.push_back(residual(m, z));
            return zs;
        }
        for (const auto& z : roots)
            if (z.imag() > 1e-8 * std::abs(z)) seeds.push_back(z);
        // a real zero sitting on the cut at nh splits into a pair just above order 2n+3/2
        for (const auto& z : roots)
            if (std::abs(z.imag()) <= 1e-8 * std::abs(z) && 2 * static_cast<int>(seeds.size()) < zs.count)
                seeds.push_back({z.real(), 1e-2});
    } else {
        zs.descending_roots = poly_roots(newton_poly(power_sums(Direction::descending, m, zs.count)));
        zs.ascending_roots = poly_roots(newton_poly(power_sums(Direction::ascending, m, zs.count)));
        zs.route_agreement = match_distance(zs.descending_roots, zs.ascending_roots);
        if (!(zs.route_agreement <= 1e-4))
            throw NumericalError("find_zeros: polynomial routes disagree by " + std::to_string(zs.route_agreement));
        for (const auto& z : zs.descending_roots)
            if (z.imag() > 0.0) seeds.push_back(z);
    }
    if (2 * static_cast<int>(seeds.size()) != zs.count)
        throw NumericalError("find_zeros: roots do not come in conjugate pairs");

    for (const auto& s : seeds) {
        const cplx z = refine_k(m, s);
        zs.zeros.push_back(z);
        zs.zeros.push_back(std::conj(z));
    }
    order_roots(zs.zeros);
    for (const auto& z : zs.zeros) {
        const double r = residual(m, z);
        zs.residuals.push_back(r);
        if (!(r < 1e-10)) throw NumericalError("find_zeros: refinement left residual " + std::to_string(r));
    }
    for (std::size_t i = 0; i < zs.zeros.size(); ++i)
        for (std::size_t j = i + 1; j < zs.zeros.size(); ++j)
            if (std::abs(zs.zeros[i] - zs.zeros[j]) < 1e-8) throw NumericalError("find_zeros: refinement merged two zeros");
    return zs;
}

}  // namespace macdonald
