#include <cmath>
#include <numbers>

#include "doctest.h"
#include "macdonald/errors.hpp"
#include "macdonald/ratios.hpp"

using namespace macdonald;
using std::numbers::pi;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("direct ratio") {
    CHECK(std::abs(ratio_direct(0.5, 2.0) - 1.5) < 1e-15);
    CHECK(std::abs(ratio_direct(-0.5, 5.0) - 1.0) < 1e-15);
    // mpmath, 30 digits
    CHECK(std::abs(ratio_direct(0.0, 1.0) - 1.42962539826040175802810802345) < 1e-14);
    CHECK(std::abs(ratio_direct(1.5, cplx(1.0, 2.0)) - (1.0 + (2.0 * cplx(1.0, 2.0) + 3.0) / (cplx(1.0, 2.0) * cplx(1.0, 2.0) + cplx(1.0, 2.0)))) < 1e-13);
    CHECK_THROWS_AS(ratio_direct(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(ratio_direct(1.0, -2.0), DomainError);
    auto z = find_zeros(2.0).zeros[0];
    CHECK_THROWS_AS(ratio_direct(2.0, z), DomainError);
}

TEST_CASE("decomposition examples") {
    auto a = ratio_decomposed(-0.5, 3.0);
    CHECK(a.which == RatioCase::half_integer_low);
    CHECK(std::abs(a.total - 1.0) < 1e-15);
    CHECK(std::abs(a.pole_at_zero) == 0.0);
    auto b = ratio_decomposed(2.0, 1.0);
    CHECK(b.which == RatioCase::generic_high);
    CHECK(rel(b.total, ratio_direct(2.0, 1.0)) < 1e-8);
    CHECK(std::abs(b.pole_sum.imag()) < 1e-15);
    const auto& zs = zeros_of(2.0);
    cplx ps = 0.0;
    for (auto z : zs.zeros) ps += 1.0 / (z - 1.0);
    CHECK(std::abs(b.pole_sum - ps) < 1e-15);
    auto c = ratio_decomposed(0.0, 1.0);
    CHECK(c.which == RatioCase::generic_low);
    CHECK(std::abs(c.total - 1.42962539826040175802810802345) < 1e-8);
    auto d = ratio_decomposed(2.5, 1.3);
    CHECK(d.which == RatioCase::half_integer_high);
    CHECK(std::abs(d.integral_part) == 0.0);
    CHECK(rel(d.total, ratio_direct(2.5, 1.3)) < 1e-13);
}

TEST_CASE("parts add up and are real on the positive axis") {
    for (double nu : {0.3, 1.2, 2.7, -0.8}) {
        auto d = ratio_decomposed(nu, 2.0);
        CHECK(std::abs(d.total - (d.constant_part + d.pole_at_zero + d.pole_sum + d.integral_part)) < 1e-15);
        CHECK(std::abs(d.pole_at_zero.imag()) == 0.0);
        CHECK(std::abs(d.pole_sum.imag()) < 1e-14);
        CHECK(std::abs(d.integral_part.imag()) < 1e-14);
    }
}

TEST_CASE("decomposition grid across the four cases") {
    const double orders[] = {0.5, -0.5, 1.5, 3.5, 0.0, 0.7, -1.2, 2.2, 3.0, -4.0};
    const cplx points[] = {0.05, 1.0, 50.0, std::polar(2.0, 3 * pi / 4), std::polar(0.7, -3 * pi / 4)};
    int n = 0;
    for (double nu : orders)
        for (cplx w : points) {
            auto d = ratio_decomposed(nu, w);
            CHECK(rel(d.total, ratio_direct(nu, w)) < 1e-8);
            ++n;
        }
    CHECK(n >= 40);
}

TEST_CASE("reflection between nu and -nu") {
    for (double nu : {0.3, 1.7, 2.2})
        for (cplx w : {cplx(1.5, 0.0), cplx(0.4, 1.1)}) {
            auto p = ratio_decomposed(nu, w), m = ratio_decomposed(-nu, w);
            CHECK(std::abs(m.total - (p.total - 2.0 * nu / w)) < 1e-10 * std::abs(p.total));
        }
}

TEST_CASE("general ratio") {
    CHECK(std::abs(ratio_general(1.0, 0.5, 2.0) - 1.28627979615568910424889483731) < 1e-7);
    CHECK(std::abs(ratio_general(2.0, -0.5, 1.0) - 0.567525192602392938041480781264) < 1e-7);
    CHECK(std::abs(ratio_general(0.5, 0.25, 1.5) - 1.08497321923295790231717729701) < 1e-7);
    CHECK(std::abs(ratio_general(0.0, 0.5, 1.0) - 1.09511102579820368669958542055) < 1e-7);
    const double triples[][2] = {{0.3, 0.6}, {1.2, -1.0}, {2.7, 0.4}, {4.0, -3.5}, {2.5, 0.9}};
    for (auto [nu, rho] : triples)
        for (cplx w : {cplx(0.8, 0.0), cplx(-1.0, 1.5)}) {
            const cplx direct = k_complex(nu + rho, w) / k_complex(nu, w);
            CHECK(rel(ratio_general(nu, rho, w), direct) < 1e-7);
        }
    CHECK_THROWS_AS(ratio_general(1.5, 0.5, 1.0), DomainError);
    CHECK_THROWS_AS(ratio_general(3.5, 0.5, 1.0), DomainError);
    CHECK_THROWS_AS(ratio_general(1.0, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(ratio_general(1.0, -1.5, 1.0), DomainError);
    CHECK_THROWS_AS(ratio_general(1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("log of x^mu K_mu") {
    CHECK(std::abs(log_xk(0.5, 3.0) - (0.5 * std::log(pi / 2) - 3.0)) < 1e-15);
    for (double mu : {2.0, 0.3, 1.0, 2.5, 3.5, 5.3})
        for (double x : {0.1, 1.0, 7.0}) {
            const double direct = mu * std::log(x) + log_bessel_k(mu, x);
            CHECK(std::abs(log_xk(mu, x) - direct) < 1e-8);
        }
    CHECK(std::abs(log_xk(2.5, 1e-6) - std::log(std::pow(2.0, 1.5) * std::tgamma(2.5))) < 1e-4);
    CHECK_THROWS_AS(log_xk(0.0, 1.0), DomainError);
}

TEST_CASE("log derivative identity") {
    const double h = 1e-4;
    for (double mu : {0.7, 2.0, 3.3})
        for (double x : {0.5, 2.0}) {
            const double d = (log_xk(mu, x + h) - log_xk(mu, x - h)) / (2 * h);
            CHECK(std::abs(d - (-ratio_direct(mu, x).real() + 2 * mu / x)) < 1e-5);
        }
}

TEST_CASE("memoised zero sets are shared") {
    const auto& a = zeros_of(3.0);
    const auto& b = zeros_of(-3.0);
    CHECK(&a == &b);
}
