#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "macdonald/errors.hpp"

namespace macdonald {

enum class ZeroKind { regular, power, inverse_log_square };
enum class InfKind { exp_decay, power_decay, inverse_log_square };

struct EndpointBehavior {
    ZeroKind at_zero = ZeroKind::regular;
    double zero_power = 0.0;  // integrand ~ y^p near 0, p > -1
    InfKind at_infinity = InfKind::exp_decay;
    double inf_param = 1.0;   // decay rate > 0, or power p < -1; unused for 1/(x log^2 x) tails
    double split = 1.0;       // junction of the two mapped pieces

    static EndpointBehavior exp(double rate = 1.0) {
        EndpointBehavior b;
        b.inf_param = rate;
        return b;
    }
    EndpointBehavior& zero_pow(double p) {
        at_zero = ZeroKind::power;
        zero_power = p;
        return *this;
    }
    EndpointBehavior& zero_log2() {
        at_zero = ZeroKind::inverse_log_square;
        return *this;
    }
    EndpointBehavior& inf_pow(double p) {
        at_infinity = InfKind::power_decay;
        inf_param = p;
        return *this;
    }
    EndpointBehavior& inf_log2() {
        at_infinity = InfKind::inverse_log_square;
        return *this;
    }
    EndpointBehavior& at(double s) {
        split = s;
        return *this;
    }
};

struct QuadSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_subdivisions = 4000;
};

template <class T>
struct QuadResultT {
    T value{};
    double error = 0.0;
    int evaluations = 0;
};
using QuadResult = QuadResultT<double>;
using QuadResultC = QuadResultT<std::complex<double>>;

namespace detail {

inline constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600606667578, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

inline double mag(double v) { return std::abs(v); }
inline double mag(const std::complex<double>& v) { return std::abs(v); }
inline bool bad(double v) { return std::isnan(v); }
inline bool bad(const std::complex<double>& v) { return std::isnan(v.real()) || std::isnan(v.imag()); }

template <class T>
struct Piece {
    double a, b;
    T value;
    double error;
    bool operator<(const Piece& o) const { return error < o.error; }
};

// 21-point Kronrod rule with the embedded 10-point Gauss rule; QUADPACK error scaling.
template <class T, class F>
Piece<T> gk21(F& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const T fc = f(c);
    if (bad(fc)) throw NumericalError("quadrature: integrand returned NaN at x=" + std::to_string(c));
    T resk = fc * kWgk[10];
    T resg{};
    double resabs = mag(fc) * kWgk[10];
    T fv1[10], fv2[10];
    for (int j = 0; j < 10; ++j) {
        const double dx = h * kXgk[j];
        fv1[j] = f(c - dx);
        fv2[j] = f(c + dx);
        if (bad(fv1[j]) || bad(fv2[j]))
            throw NumericalError("quadrature: integrand returned NaN near x=" + std::to_string(c - dx));
        resk += kWgk[j] * (fv1[j] + fv2[j]);
        resabs += kWgk[j] * (mag(fv1[j]) + mag(fv2[j]));
        if (j % 2 == 1) resg += kWg[j / 2] * (fv1[j] + fv2[j]);
    }
    const T mean = resk * 0.5;
    double resasc = kWgk[10] * mag(fc - mean);
    for (int j = 0; j < 10; ++j) resasc += kWgk[j] * (mag(fv1[j] - mean) + mag(fv2[j] - mean));
    const double ah = std::abs(h);
    double err = mag((resk - resg) * h);
    resasc *= ah;
    resabs *= ah;
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > 1e-300 / 5e-29) err = std::max(5e-29 * resabs, err);
    return {a, b, resk * h, err};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod over consecutive intervals [p0, p1], [p1, p2], ...
template <class T = double, class F>
QuadResultT<T> quad_adaptive(F&& f, const std::vector<double>& points, const QuadSpec& spec = {}) {
    if (points.size() < 2) throw DomainError("quad_adaptive: need at least two points");
    std::vector<detail::Piece<T>> heap;
    T total{};
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (!(points[i + 1] > points[i])) throw DomainError("quad_adaptive: points must increase");
        heap.push_back(detail::gk21<T>(f, points[i], points[i + 1]));
        total += heap.back().value;
        err += heap.back().error;
    }
    std::make_heap(heap.begin(), heap.end());
    int n = static_cast<int>(heap.size());
    const int n0 = n;
    while (err > std::max(spec.abs_tol, spec.rel_tol * detail::mag(total))) {
        if (n >= spec.max_subdivisions + n0 - 1)
            throw NumericalError("quadrature: no convergence after max_subdivisions (error " +
                                 std::to_string(err) + ")");
        std::pop_heap(heap.begin(), heap.end());
        auto top = heap.back();
        heap.pop_back();
        const double m = 0.5 * (top.a + top.b);
        if (m <= top.a || m >= top.b) {
            // interval exhausted at machine resolution; keep its estimate
            heap.push_back({top.a, top.b, top.value, 0.0});
            std::push_heap(heap.begin(), heap.end());
            err -= top.error;
            continue;
        }
        auto l = detail::gk21<T>(f, top.a, m);
        auto r = detail::gk21<T>(f, m, top.b);
        total += l.value + r.value - top.value;
        err += l.error + r.error - top.error;
        heap.push_back(l);
        std::push_heap(heap.begin(), heap.end());
        heap.push_back(r);
        std::push_heap(heap.begin(), heap.end());
        ++n;
        if (n % 64 == 0) {
            // refresh sums to avoid drift
            T t{};
            double e = 0.0;
            for (const auto& pc : heap) {
                t += pc.value;
                e += pc.error;
            }
            total = t;
            err = e;
        }
    }
    return {total, err, 21 * (2 * n - n0)};
}

template <class T = double, class F>
QuadResultT<T> quad_adaptive(F&& f, double a, double b, const QuadSpec& spec = {}) {
    return quad_adaptive<T>(f, std::vector<double>{a, b}, spec);
}

// Integral over (0, inf) with declared endpoint behaviour.
template <class T = double, class F>
QuadResultT<T> quad_semiinf(F&& f, const EndpointBehavior& b = {}, const QuadSpec& spec = {}) {
    if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0) || spec.max_subdivisions < 1)
        throw DomainError("quad_semiinf: tolerances must be positive");
    const double c = b.split;
    if (!(c > 0.0)) throw DomainError("quad_semiinf: split must be positive");
    QuadSpec half = spec;
    half.abs_tol = 0.5 * spec.abs_tol;

    QuadResultT<T> lo;
    switch (b.at_zero) {
        case ZeroKind::regular: lo = quad_adaptive<T>(f, 0.0, c, half); break;
        case ZeroKind::power: {
            const double p = b.zero_power;
            if (!(p > -1.0)) throw DomainError("quad_semiinf: zero power must exceed -1");
            if (p >= 0.0) {
                lo = quad_adaptive<T>(f, 0.0, c, half);
            } else {
                const double m = 1.0 / (1.0 + p);
                auto g = [&](double u) -> T {
                    const double y = c * std::pow(u, m);
                    if (y <= 0.0) return T{};
                    return f(y) * (c * m * std::pow(u, m - 1.0));
                };
                lo = quad_adaptive<T>(g, 0.0, 1.0, half);
            }
            break;
        }
        case ZeroKind::inverse_log_square: {
            if (!(c < 1.0)) throw DomainError("quad_semiinf: inverse_log_square needs split < 1");
            // u = 1/log(1/y); f(y) dy = g(u) du with g regular at u = 0
            const double umax = -1.0 / std::log(c);
            const double umin = 1.0 / 700.0;
            auto g = [&](double u) -> T {
                const double y = std::exp(-1.0 / u);
                return f(y) * (y / (u * u));
            };
            lo = quad_adaptive<T>(g, umin, umax, half);
            // polynomial extrapolation of g over (0, umin)
            const T g1 = g(umin), g2 = g(2.0 * umin), g3 = g(3.0 * umin);
            const T quad = umin * ((23.0 / 12.0) * g1 - (4.0 / 3.0) * g2 + (5.0 / 12.0) * g3);
            const T lin = umin * (1.5 * g1 - 0.5 * g2);
            lo.value += quad;
            lo.error += detail::mag(quad - lin);
            break;
        }
    }

    QuadResultT<T> hi;
    if (b.at_infinity == InfKind::exp_decay) {
        if (!(b.inf_param > 0.0)) throw DomainError("quad_semiinf: decay rate must be positive");
        // half the declared rate, so the mapped integrand vanishes at v = 1
        const double rate = 0.5 * b.inf_param;
        auto g = [&](double v) -> T {
            const double s = 1.0 - v;
            if (s <= 0.0) return T{};
            const double x = c - std::log(s) / rate;
            const T fx = f(x);
            if (detail::mag(fx) == 0.0) return T{};
            return fx / (rate * s);
        };
        hi = quad_adaptive<T>(g, 0.0, 1.0, half);
    } else if (b.at_infinity == InfKind::inverse_log_square) {
        if (!(c > 1.0)) throw DomainError("quad_semiinf: inverse_log_square tail needs split > 1");
        // x = exp(1/u); mirror of the zero endpoint
        const double umax = 1.0 / std::log(c);
        const double umin = 1.0 / 650.0;
        auto g = [&](double u) -> T {
            const double x = std::exp(1.0 / u);
            return (f(x) * x) / (u * u);
        };
        hi = quad_adaptive<T>(g, umin, umax, half);
        const T g1 = g(umin), g2 = g(2.0 * umin), g3 = g(3.0 * umin);
        const T quad = umin * ((23.0 / 12.0) * g1 - (4.0 / 3.0) * g2 + (5.0 / 12.0) * g3);
        const T lin = umin * (1.5 * g1 - 0.5 * g2);
        hi.value += quad;
        hi.error += detail::mag(quad - lin);
    } else {
        const double p = b.inf_param;
        if (!(p < -1.0)) throw DomainError("quad_semiinf: power decay must be below -1");
        const double q = -1.0 / (p + 1.0);
        auto g = [&](double v) -> T {
            const double s = 1.0 - v;
            if (s <= 0.0) return T{};
            const double x = c * std::pow(s, -q);
            const T fx = f(x);
            if (detail::mag(fx) == 0.0) return T{};
            return fx * (c * q * std::pow(s, -q - 1.0));
        };
        hi = quad_adaptive<T>(g, 0.0, 1.0, half);
    }
    return {lo.value + hi.value, lo.error + hi.error, lo.evaluations + hi.evaluations};
}

// int_0^inf exp(-x^2/(4t) - x y) x^k dx for k in {0, 1}.
double quad_gauss_laplace(double t, double y, int k = 0);
std::complex<double> quad_gauss_laplace(double t, std::complex<double> y, int k = 0);

}  // namespace macdonald
