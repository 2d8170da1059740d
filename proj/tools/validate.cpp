#include "validate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "macdonald/errors.hpp"
#include "macdonald/levy.hpp"
#include "macdonald/oracle.hpp"
#include "macdonald/ratios.hpp"
#include "macdonald/sausage.hpp"
#include "macdonald/specfun.hpp"
#include "macdonald/zeros.hpp"

namespace macdonald::validate {

namespace {

constexpr double kPi = std::numbers::pi;

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

struct Collector {
    std::string suite;
    std::vector<Check>& out;
    // body returns the worst residual; exceptions count as failures
    void add(const std::string& name, double tol, const std::function<double()>& body) {
        double v;
        try {
            v = body();
        } catch (const std::exception&) {
            v = NAN;
        }
        out.push_back({suite, name, v, tol, std::isfinite(v) && v < tol});
    }
};

double nearest(const std::vector<cplx>& zs, cplx target) {
    double best = INFINITY;
    for (cplx z : zs) best = std::min(best, std::abs(z - target));
    return best;
}

void specfun_suite(Collector& c) {
    c.add("wronskian", 1e-10, [] {
        double w = 0.0;
        for (double mu : {0.0, 0.3, 1.0, 2.7, 5.0})
            for (double x = 0.1; x <= 50.0; x *= 1.25) {
                const auto a = ik_scaled(mu, x), b = ik_scaled(mu + 1.0, x);
                w = std::max(w, std::abs(x * (b.k_scaled * a.i_scaled + b.i_scaled * a.k_scaled) - 1.0));
            }
        return w;
    });
    c.add("recurrence", 1e-10, [] {
        double w = 0.0;
        for (double mu : {0.2, 1.0, 2.6, 7.1}) {
            for (double x : {0.3, 1.0, 4.0, 20.0}) {
                const double km = ik_scaled(mu - 1.0, x).k_scaled, k0 = ik_scaled(mu, x).k_scaled,
                             kp = ik_scaled(mu + 1.0, x).k_scaled;
                w = std::max(w, std::abs(kp - km - 2.0 * mu / x * k0) / kp);
            }
            for (cplx z : {cplx(0.5, 0.5), cplx(-3.0, 1.0), cplx(2.0, -7.0), cplx(-10.0, -0.5)}) {
                const cplx km = k_complex(mu - 1.0, z), k0 = k_complex(mu, z), kp = k_complex(mu + 1.0, z);
                w = std::max(w, std::abs(kp - km - 2.0 * mu / z * k0) / std::abs(kp));
            }
        }
        return w;
    });
    c.add("continuation", 1e-9, [] {
        double w = 0.0;
        for (double mu : {0.0, 0.3, 1.0, 2.5, 4.7})
            for (double r : {0.8, 1.0, 3.0, 11.0}) {
                const cplx above = k_complex(mu, cplx(-r, 1e-13));
                const cplx rhs = std::exp(cplx(0.0, -kPi * mu)) * k_complex(mu, cplx(r, 0.0)) -
                                 cplx(0.0, kPi) * i_complex(mu, cplx(r, 0.0));
                w = std::max(w, rel(above, rhs));
            }
        return w;
    });
    c.add("large-x envelope of K", 1.0, [] {
        // worst C x / (2 |4 mu^2 - 1| / 8 + 1); must stay below 1
        double w = 0.0;
        for (double mu : {0.0, 0.3, 1.0, 2.7, 5.0})
            for (double x = 10.0; x <= 200.0; x *= 1.2) {
                const double e = ik_scaled(mu, x).k_scaled * std::sqrt(2.0 * x / kPi) - 1.0;
                w = std::max(w, std::abs(e) * x / (2.0 * std::abs(4.0 * mu * mu - 1.0) / 8.0 + 1.0));
            }
        return w;
    });
    c.add("large-x law of G", 0.02, [] {
        double w = 0.0;
        for (double mu : {0.0, 1.0, 2.2, 0.5})
            w = std::max(w, std::abs(g_fun(mu, 300.0).log_g - std::log(kPi * std::exp(600.0) / 600.0)));
        return w;
    });
    c.add("large-x law of I_mu - I_{mu+1}", 0.02, [] {
        double w = 0.0;
        for (double mu : {0.3, 0.5, 1.0, 2.0}) {
            const double x = 200.0;
            const double d = (ik_scaled(mu, x).i_scaled - ik_scaled(mu + 1.0, x).i_scaled) * std::sqrt(2 * kPi * x) * x;
            w = std::max(w, std::abs(d / ((2.0 * mu + 1.0) / 2.0) - 1.0));
        }
        return w;
    });
    c.add("small-x law of K_0", 0.05, [] {
        const double x = 1e-6;
        return std::abs(ik_scaled(0.0, x).k_scaled * std::exp(-x) / std::log(2.0 / x) - 1.0);
    });
    c.add("small-x law of K_mu", 1e-2, [] {
        double w = 0.0;
        for (double mu : {0.4, 1.0, 2.5}) {
            const double x = 1e-6, k = std::exp(log_bessel_k(mu, x));
            w = std::max(w, std::abs(k / (std::tgamma(mu) / 2.0 * std::pow(2.0 / x, mu)) - 1.0));
        }
        return w;
    });
    c.add("small-x law of G", 1e-2, [] {
        double w = 0.0;
        for (double mu : {1.0, 2.0, 3.3}) {
            const double x = 1e-3;
            const double kap = 1.0 / (std::pow(4.0, mu - 1.0) * std::tgamma(mu) * std::tgamma(mu));
            w = std::max(w, std::abs(std::exp(g_fun(mu, x).log_g) * kap * std::pow(x, 2 * mu) - 1.0));
        }
        return w;
    });
    c.add("half-integer K closed form", 1e-13, [] {
        double w = 0.0;
        for (double x : {0.5, 2.0, 9.0}) w = std::max(w, std::abs(ik_scaled(0.5, x).k_scaled - std::sqrt(kPi / (2 * x))));
        return w;
    });
}

void zeros_suite(Collector& c) {
    c.add("K_2 zeros near -1.28 +- 0.43i", 0.01, [] {
        const auto z = find_zeros(2.0);
        return std::max(nearest(z.zeros, {-1.28, 0.43}), nearest(z.zeros, {-1.28, -0.43}));
    });
    c.add("K_3 zeros near -1.68 +- 1.31i", 0.01, [] {
        const auto z = find_zeros(3.0);
        return std::max(nearest(z.zeros, {-1.68, 1.31}), nearest(z.zeros, {-1.68, -1.31}));
    });
    c.add("zero residuals", 1e-10, [] {
        double w = 0.0;
        for (double nu : {2.0, 2.2, 3.0, 4.0, 5.3})
            for (double r : find_zeros(nu).residuals) w = std::max(w, r);
        return w;
    });
    c.add("route agreement", 1e-6, [] {
        double w = 0.0;
        for (double nu : {2.0, 2.2, 3.0, 4.0, 5.3}) w = std::max(w, find_zeros(nu).route_agreement);
        return w;
    });
    c.add("half-integer zeros (nu = 5/2)", 1e-12, [] {
        const auto z = find_zeros(2.5);
        return std::max(nearest(z.zeros, {-1.5, std::sqrt(3.0) / 2}), nearest(z.zeros, {-1.5, -std::sqrt(3.0) / 2}));
    });
    c.add("reciprocal G integral equals 1/2", 1e-8, [] {
        double w = 0.0;
        for (int n = 0; n <= 3; ++n) w = std::max(w, std::abs(g_moment(n, -1) - 0.5));
        return w;
    });
    c.add("zero count from the integral", 1e-6, [] {
        double w = 0.0;
        for (double nu : {2.0, 2.6, 4.0, 5.3}) {
            const auto k = count_zeros_checked(nu);
            w = std::max(w, std::abs(k.numeric - k.count));
        }
        return w;
    });
    c.add("ratio decomposition", 1e-8, [] {
        double w = 0.0;
        for (double nu : {0.5, -0.5, 1.5, 3.5, 0.0, 0.7, -1.2, 2.2, 3.0, -4.0})
            for (cplx z : {cplx(0.05), cplx(1.0), cplx(50.0), std::polar(2.0, 3 * kPi / 4), std::polar(0.7, -3 * kPi / 4)})
                w = std::max(w, rel(ratio_decomposed(nu, z).total, ratio_direct(nu, z)));
        return w;
    });
}

void levy_suite(Collector& c) {
    c.add("closed-form densities", 1e-14, [] {
        return std::max(std::abs(levy_density({0.5, 2, 1}, 1.0) - 1.0 / std::sqrt(2 * kPi)),
                        std::abs(levy_density({-0.5, 3, 0}, 4.0) - 3.0 / (8.0 * std::sqrt(2 * kPi))));
    });
    c.add("Laplace check, exact cases", 1e-12,
          [] { return std::max(verify_levy({0.5, 2, 1}, 1.0), verify_levy({-0.5, 3, 0}, 0.5)); });
    c.add("Laplace check, quadrature cases", 1e-5, [] {
        double w = 0.0;
        for (HittingSpec s : {HittingSpec{2.0, 2, 1}, {0.0, 3, 1}, {-0.3, 1.5, 0}, {-2.2, 2, 0}})
            w = std::max(w, verify_levy(s, 1.0));
        return w;
    });
    c.add("index 0 exponent, two forms", 1e-8,
          [] { return std::abs(log_laplace({0.0, 2, 1}, 1.0) - log_laplace_direct({0.0, 2, 1}, 1.0)); });
}

void sausage_suite(Collector& c) {
    c.add("constant identities", 1e-8, [] {
        double w = 0.0;
        for (double nu : {1.0, 1.25, 2.0, 3.0}) {
            const int k = nu > 1.5 ? 3 : (nu > 1.0 ? 2 : 1);
            for (const auto& r : constants(nu, k).residuals) w = std::max(w, r.residual);
        }
        return w;
    });
    c.add("d = 3 closed form", 1e-10, [] {
        double w = 0.0;
        for (double t : {0.1, 1.0, 10.0}) {
            const double closed = 2 * kPi * t + 4 * std::sqrt(2 * kPi * t);
            w = std::max(w, std::abs(volume_generic({3, 1.0}, t) / closed - 1.0));
        }
        return w;
    });
    c.add("volume against Talbot", 1e-5, [] {
        double w = 0.0;
        for (int d : {2, 4, 5, 6})
            for (double t : {0.1, 1.0, 10.0, 100.0}) {
                const SausageParams p{d, 1.0};
                const double tb = talbot([p](cplx s) { return laplace_L(p, s); }, t);
                w = std::max(w, std::abs(volume(p, t) / tb - 1.0));
            }
        return w;
    });
    c.add("large-time identities (corrected signs)", 1e-7, [] {
        double w = 0.0;
        for (int d : {6, 8})
            for (const auto& r : identity_checks(d).corrected) w = std::max(w, r.residual);
        return w;
    });
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"specfun", "zeros", "levy", "sausage"};
    return names;
}

std::vector<Check> run_suite(const std::string& suite) {
    std::vector<Check> out;
    const auto& names = suite_names();
    if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end())
        throw DomainError("validate: unknown suite '" + suite + "'");
    for (const auto& n : names) {
        if (suite != "all" && suite != n) continue;
        Collector c{n, out};
        if (n == "specfun") specfun_suite(c);
        if (n == "zeros") zeros_suite(c);
        if (n == "levy") levy_suite(c);
        if (n == "sausage") sausage_suite(c);
    }
    return out;
}

}  // namespace macdonald::validate
