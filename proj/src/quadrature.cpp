#include "macdonald/quadrature.hpp"

#include <numbers>

#include "macdonald/specfun.hpp"

namespace macdonald {

namespace {

std::complex<double> erfcx_tail_c(std::complex<double> u) {
    if (u.real() >= 0.0 && std::abs(u) >= 6.0) {
        const std::complex<double> w = 1.0 / (2.0 * u * u);
        std::complex<double> term = 1.0, sum = 0.0;
        for (int n = 1; n < 200; ++n) {
            const std::complex<double> next = term * (-(2.0 * n - 1.0)) * w;
            if (std::abs(next) > std::abs(term)) break;
            term = next;
            sum -= term;
            if (std::abs(term) < 1e-17 * std::abs(sum)) break;
        }
        return sum;
    }
    return 1.0 - std::sqrt(std::numbers::pi) * u * erfcx(u);
}

}  // namespace

double quad_gauss_laplace(double t, double y, int k) {
    if (!(t > 0.0)) throw DomainError("quad_gauss_laplace: t must be positive");
    const double st = std::sqrt(t);
    if (k == 0) return std::sqrt(std::numbers::pi * t) * erfcx(y * st);
    if (k == 1) return 2.0 * t * erfcx_tail(y * st);
    throw DomainError("quad_gauss_laplace: k must be 0 or 1");
}

std::complex<double> quad_gauss_laplace(double t, std::complex<double> y, int k) {
    if (!(t > 0.0)) throw DomainError("quad_gauss_laplace: t must be positive");
    const double st = std::sqrt(t);
    if (k == 0) return std::sqrt(std::numbers::pi * t) * erfcx(y * st);
    if (k == 1) return 2.0 * t * erfcx_tail_c(y * st);
    throw DomainError("quad_gauss_laplace: k must be 0 or 1");
}

}  // namespace macdonald
