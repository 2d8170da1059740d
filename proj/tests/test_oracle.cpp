#include <cmath>
#include <cstdlib>
#include <numbers>

#include "doctest.h"
#include "macdonald/errors.hpp"
#include "macdonald/levy.hpp"
#include "macdonald/oracle.hpp"
#include "macdonald/sausage.hpp"

using namespace macdonald;
using std::numbers::pi;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

struct Pair {
    Transform F;
    double t, exact;
};

std::vector<Pair> corpus() {
    const SausageParams p3{3, 1.0};
    return {
        {[](cplx s) { return 1.0 / (s * s); }, 3.0, 3.0},
        {[](cplx s) { return std::pow(s, -1.5); }, 1.0, 2.0 / std::sqrt(pi)},
        {[](cplx s) { return 1.0 / (s + 1.0); }, 2.0, std::exp(-2.0)},
        {[](cplx s) { return std::exp(-std::sqrt(s)); }, 0.7, std::exp(-1.0 / 2.8) / (2.0 * std::sqrt(pi * 0.343))},
        {[](cplx s) { return std::exp(-1.0 / s) / s; }, 1.0, 0.22389077914123566805},  // J_0(2 sqrt t)
        {[](cplx s) { return 1.0 / ((s + 1.0) * (s + 1.0)); }, 3.0, 3.0 * std::exp(-3.0)},
        {[p3](cplx s) { return laplace_L(p3, s); }, 1.0, 2 * pi + 4 * std::sqrt(2 * pi)},
        {[p3](cplx s) { return laplace_L(p3, s); }, 40.0, 2 * pi * 40.0 + 4 * std::sqrt(2 * pi * 40.0)},
    };
}

}  // namespace

TEST_CASE("Talbot corpus") {
    TalbotConfig wide;
    wide.nodes = 96;
    for (const auto& c : corpus()) {
        const double a = talbot(c.F, c.t), b = talbot(c.F, c.t, wide);
        CHECK_MESSAGE(rel(a, c.exact) < 1e-8, c.t, " ", a, " ", c.exact);
        CHECK(rel(a, b) < 1e-9);
    }
    CHECK_THROWS_AS(talbot([](cplx s) { return 1.0 / s; }, 0.0), DomainError);
    TalbotConfig bad;
    bad.nodes = 8;
    CHECK_THROWS_AS(talbot([](cplx s) { return 1.0 / s; }, 1.0, bad), DomainError);
    bad.nodes = 33;
    CHECK_THROWS_AS(talbot([](cplx s) { return 1.0 / s; }, 1.0, bad), DomainError);
}

TEST_CASE("worker count cap") {
    CHECK(resolve_workers(3) >= 1);
    setenv("MACDONALD_KIT_THREADS", "2", 1);
    CHECK(resolve_workers(0) == 2);
    CHECK(resolve_workers(5) == 2);
    CHECK(resolve_workers(1) == 1);
    setenv("MACDONALD_KIT_THREADS", "zero", 1);
    CHECK_THROWS_AS(resolve_workers(0), DomainError);
    unsetenv("MACDONALD_KIT_THREADS");
}

TEST_CASE("Monte Carlo determinism") {
    MCConfig c;
    c.paths = 3000;
    c.dt = 1e-2;
    c.seed = 42;
    c.workers = 1;
    const auto a = mc_hit_probability({3, 1.0}, 1.5, 1.0, c);
    const auto s1 = mc_sausage({4, 1.0}, 0.5, c);
    const auto h1 = mc_bessel_hit(2.0, 2.0, 1.0, 5.0, c);
    c.workers = 3;
    const auto b = mc_hit_probability({3, 1.0}, 1.5, 1.0, c);
    const auto s2 = mc_sausage({4, 1.0}, 0.5, c);
    const auto h2 = mc_bessel_hit(2.0, 2.0, 1.0, 5.0, c);
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
    CHECK(s1.value == s2.value);
    CHECK(s1.std_error == s2.std_error);
    CHECK(h1.hit_fraction == h2.hit_fraction);
    CHECK(h1.laplace == h2.laplace);
    c.seed = 43;
    CHECK(mc_hit_probability({3, 1.0}, 1.5, 1.0, c).value != a.value);
}

TEST_CASE("Monte Carlo preconditions") {
    MCConfig c;
    c.paths = 10;
    CHECK_THROWS_AS(mc_sausage({7, 1.0}, 1.0, c), DomainError);
    CHECK_THROWS_AS(mc_sausage({1, 1.0}, 1.0, c), DomainError);
    MCConfig tr = c;
    tr.truncation_radius = 3.0;
    CHECK_THROWS_AS(mc_sausage({3, 1.0}, 1.0, tr), DomainError);
    MCConfig z = c;
    z.paths = 0;
    CHECK_THROWS_AS(mc_hit_probability({3, 1.0}, 2.0, 1.0, z), DomainError);
    z = c;
    z.dt = 0.0;
    CHECK_THROWS_AS(mc_hit_probability({3, 1.0}, 2.0, 1.0, z), DomainError);
    CHECK_THROWS_AS(mc_hit_probability({3, 1.0}, 0.5, 1.0, c), DomainError);
    MCConfig coarse = c;
    coarse.dt = 0.02;
    CHECK_THROWS_AS(mc_bessel_hit(0.5, 2.0, 1.0, 10.0, coarse), DomainError);
    CHECK_THROWS_AS(mc_bessel_hit(0.5, 1.0, 2.0, 10.0, c), DomainError);
}

TEST_CASE("hit probability, d = 3") {
    MCConfig c;
    c.paths = 40000;
    c.dt = 1e-3;
    c.seed = 5;
    const auto e = mc_hit_probability({3, 1.0}, 2.0, 1.0, c);
    // (r/|x|) erfc((|x|-r)/sqrt(2t))
    const double exact = 0.5 * std::erfc(1.0 / std::sqrt(2.0));
    CHECK(std::abs(e.value - exact) < 3.0 * e.std_error);
    CHECK(e.paths == 40000);
}

TEST_CASE("standard error scaling") {
    double mean_ratio = 0.0;
    for (std::uint64_t seed : {1, 2, 3}) {
        MCConfig c;
        c.dt = 1e-2;
        c.seed = seed;
        c.paths = 4000;
        const double s1 = mc_hit_probability({3, 1.0}, 1.5, 0.5, c).std_error;
        c.paths = 16000;
        const double s4 = mc_hit_probability({3, 1.0}, 1.5, 0.5, c).std_error;
        CHECK(std::abs(s1 / s4 / 2.0 - 1.0) < 0.2);
        mean_ratio += s1 / s4 / 3.0;
    }
    CHECK(std::abs(mean_ratio / 2.0 - 1.0) < 0.1);
}

TEST_CASE("sausage volume, d = 3") {
    MCConfig c;
    c.paths = 80000;
    c.dt = 1e-3;
    c.seed = 9;
    const auto e = mc_sausage({3, 1.0}, 1.0, c);
    const double exact = 2 * pi + 4 * std::sqrt(2 * pi);
    CHECK(std::abs(e.value - exact) < 3.0 * e.std_error);
    CHECK(e.std_error / e.value < 0.01);
    CHECK(e.truncation_bound > 0.0);
    CHECK(e.truncation_bound < 1e-5);
}

TEST_CASE("sausage volume, d = 2") {
    MCConfig c;
    c.paths = 20000;
    c.dt = 2.5e-4;
    c.seed = 13;
    const auto e = mc_sausage({2, 1.0}, 1.0, c);
    CHECK(std::abs(e.value - volume({2, 1.0}, 1.0)) < 3.0 * e.std_error);
}

TEST_CASE("Bessel hitting, index 1/2") {
    MCConfig c;
    c.paths = 40000;
    c.dt = 1e-3;
    c.seed = 21;
    const double H = 50.0;
    const auto s = mc_bessel_hit(0.5, 2.0, 1.0, H, c);
    CHECK(std::abs(s.hit_fraction - 0.5 * std::erfc(1.0 / std::sqrt(2.0 * H))) < 3.0 * s.hit_fraction_se);
    CHECK(std::abs(s.hit_extrapolated - 0.5) < 3.0 * s.hit_extrapolated_se);
    REQUIRE(s.laplace.size() == 3);
    for (std::size_t j = 0; j < 3; ++j) {
        const double exact = std::exp(-std::sqrt(2.0 * s.lambdas[j]));
        CHECK_MESSAGE(std::abs(s.laplace[j] - exact) < 3.0 * s.laplace_se[j], s.lambdas[j]);
        CHECK(std::abs(std::exp(log_laplace({0.5, 2.0, 1.0}, s.lambdas[j])) - exact) < 1e-14);
    }
}

TEST_CASE("Bessel hitting, index 2") {
    MCConfig c;
    c.paths = 40000;
    c.dt = 1e-3;
    c.seed = 22;
    const auto s = mc_bessel_hit(2.0, 2.0, 1.0, 50.0, c);
    CHECK(std::abs(s.hit_extrapolated - 0.0625) < 3.0 * s.hit_extrapolated_se);
    for (std::size_t j = 0; j < 3; ++j) {
        const double exact = std::exp(log_laplace({2.0, 2.0, 1.0}, s.lambdas[j]));
        CHECK_MESSAGE(std::abs(s.laplace[j] - exact) < 3.0 * s.laplace_se[j], s.lambdas[j]);
    }
    // lambda = 1 against (a/b)^2 K_2(2 sqrt2) / K_2(sqrt2)
    const double s2 = std::sqrt(2.0);
    const double k = 4.0 * std::exp(log_bessel_k(2.0, 2 * s2) - log_bessel_k(2.0, s2));
    CHECK(std::abs(s.laplace[1] - k) < 3.0 * s.laplace_se[1]);
}

TEST_CASE("Bessel hitting, index -1/2") {
    // Brownian motion: P(tau <= H) = erfc((a-b)/sqrt(2H))
    MCConfig c;
    c.paths = 20000;
    c.dt = 1e-3;
    c.seed = 23;
    const auto s = mc_bessel_hit(-0.5, 2.0, 1.0, 4.0, c);
    CHECK(std::abs(s.hit_fraction - std::erfc(1.0 / std::sqrt(8.0))) < 3.0 * s.hit_fraction_se);
    CHECK(s.hit_extrapolated == 1.0);
}
