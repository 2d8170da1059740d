#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "macdonald/errors.hpp"
#include "macdonald/levy.hpp"
#include "macdonald/oracle.hpp"
#include "macdonald/ratios.hpp"
#include "macdonald/sausage.hpp"
#include "macdonald/specfun.hpp"
#include "macdonald/zeros.hpp"
#include "validate.hpp"

namespace py = pybind11;
using namespace macdonald;
using namespace py::literals;

namespace {

SausageParams sp(int d, double r) { return SausageParams{d, r}; }

MCConfig mc_config(long long paths, double dt, std::uint64_t seed, int workers) {
    MCConfig c;
    c.paths = paths;
    c.dt = dt;
    c.seed = seed;
    c.workers = workers;
    return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Macdonald functions, their complex zeros, hitting-time laws and Wiener sausage volumes";

    static py::exception<DomainError> domain_exc(m, "DomainError", PyExc_ValueError);
    static py::exception<NumericalError> numerical_exc(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const DomainError& e) {
            py::set_error(domain_exc, e.what());
        } catch (const NumericalError& e) {
            py::set_error(numerical_exc, e.what());
        }
    });

    // special functions
    m.def("bessel_k", [](double mu, double x) { return std::exp(log_bessel_k(mu, x)); }, "mu"_a, "x"_a);
    m.def("log_bessel_k", &log_bessel_k, "mu"_a, "x"_a);
    m.def("k_complex", &k_complex, "mu"_a, "z"_a);
    m.def("i_complex", &i_complex, "mu"_a, "z"_a);
    m.def("log_g", [](double mu, double x) { return g_fun(mu, x).log_g; }, "mu"_a, "x"_a,
          "log of K_mu^2 + pi^2 I_mu^2 + 2 pi sin(pi mu) K_mu I_mu");

    // zeros
    py::class_<ZeroSet>(m, "ZeroSet")
        .def_readonly("nu", &ZeroSet::nu)
        .def_readonly("count", &ZeroSet::count)
        .def_readonly("zeros", &ZeroSet::zeros)
        .def_readonly("residuals", &ZeroSet::residuals)
        .def_readonly("descending_roots", &ZeroSet::descending_roots)
        .def_readonly("ascending_roots", &ZeroSet::ascending_roots)
        .def_readonly("route_agreement", &ZeroSet::route_agreement)
        .def_readonly("half_integer", &ZeroSet::half_integer);
    m.def("find_zeros", &find_zeros, "nu"_a);
    m.def("count_zeros", &count_zeros, "nu"_a);

    // ratios
    py::enum_<RatioCase>(m, "RatioCase")
        .value("half_integer_low", RatioCase::half_integer_low)
        .value("half_integer_high", RatioCase::half_integer_high)
        .value("generic_low", RatioCase::generic_low)
        .value("generic_high", RatioCase::generic_high);
    py::class_<RatioDecomposition>(m, "RatioDecomposition")
        .def_readonly("nu", &RatioDecomposition::nu)
        .def_readonly("w", &RatioDecomposition::w)
        .def_readonly("which", &RatioDecomposition::which)
        .def_readonly("constant_part", &RatioDecomposition::constant_part)
        .def_readonly("pole_at_zero", &RatioDecomposition::pole_at_zero)
        .def_readonly("pole_sum", &RatioDecomposition::pole_sum)
        .def_readonly("integral_part", &RatioDecomposition::integral_part)
        .def_readonly("total", &RatioDecomposition::total);
    m.def("ratio_direct", &ratio_direct, "nu"_a, "w"_a);
    m.def("ratio_decomposed", &ratio_decomposed, "nu"_a, "w"_a);
    m.def("ratio_general", &ratio_general, "nu"_a, "rho"_a, "w"_a);

    // hitting times
    auto spec = [](double nu, double a, double b) { return HittingSpec{nu, a, b}; };
    m.def("levy_case", [spec](double nu, double a, double b) { return static_cast<int>(levy_case(spec(nu, a, b))); },
          "nu"_a, "a"_a, "b"_a);
    m.def("levy_density", [spec](double nu, double a, double b, double x) { return levy_density(spec(nu, a, b), x); },
          "nu"_a, "a"_a, "b"_a, "x"_a);
    m.def("log_laplace", [spec](double nu, double a, double b, double lambda) { return log_laplace(spec(nu, a, b), lambda); },
          "nu"_a, "a"_a, "b"_a, "lam"_a);
    m.def("verify_levy", [spec](double nu, double a, double b, double lambda) { return verify_levy(spec(nu, a, b), lambda); },
          "nu"_a, "a"_a, "b"_a, "lam"_a);

    // sausage
    m.def("volume", [](int d, double r, double t) { return volume(sp(d, r), t); }, "d"_a, "r"_a, "t"_a);
    m.def("laplace_L", [](int d, double r, double lambda) { return laplace_L(sp(d, r), lambda); }, "d"_a, "r"_a, "lam"_a);
    m.def("volume_talbot", [](int d, double r, double t, int nodes) {
            TalbotConfig c;
            c.nodes = nodes;
            const SausageParams p = sp(d, r);
            return talbot([p](cplx s) { return laplace_L(p, s); }, t, c);
        }, "d"_a, "r"_a, "t"_a, "nodes"_a = 48);
    m.def("talbot", [](const std::function<cplx(cplx)>& F, double t, int nodes) {
            TalbotConfig c;
            c.nodes = nodes;
            return talbot(F, t, c);
        }, "F"_a, "t"_a, "nodes"_a = 48);
    m.def("expansion", [](int d, double r, double t) {
            const auto e = expansion(sp(d, r), t);
            py::list terms;
            for (const auto& x : e.terms) terms.append(py::make_tuple(x.power, x.coeff));
            return py::dict("terms"_a = terms, "log_term"_a = py::make_tuple(e.log_term.power, e.log_term.coeff),
                            "remainder_order"_a = e.remainder_order, "value"_a = e.value);
        }, "d"_a, "r"_a, "t"_a);
    m.def("expansion_remainder", [](int d, double r, double t, bool include_log) {
            return expansion_remainder(sp(d, r), t, include_log);
        }, "d"_a, "r"_a, "t"_a, "include_log"_a = true);
    m.def("identity_checks", [](int d) {
            const auto rep = identity_checks(d);
            auto rows = [](const std::vector<IdentityResidual>& v) {
                py::dict out;
                for (const auto& x : v) out[py::str(x.name)] = x.residual;
                return out;
            };
            return py::dict("literal"_a = rows(rep.literal), "corrected"_a = rows(rep.corrected),
                            "literal_hold"_a = rep.literal_hold, "corrected_hold"_a = rep.corrected_hold);
        }, "d"_a);

    // Monte Carlo
    py::class_<MCEstimate>(m, "MCEstimate")
        .def_readonly("value", &MCEstimate::value)
        .def_readonly("std_error", &MCEstimate::std_error)
        .def_readonly("truncation_bound", &MCEstimate::truncation_bound)
        .def_readonly("paths", &MCEstimate::paths)
        .def_readonly("steps", &MCEstimate::steps);
    py::class_<BesselHitSummary>(m, "BesselHitSummary")
        .def_readonly("hit_fraction", &BesselHitSummary::hit_fraction)
        .def_readonly("hit_fraction_se", &BesselHitSummary::hit_fraction_se)
        .def_readonly("hit_extrapolated", &BesselHitSummary::hit_extrapolated)
        .def_readonly("hit_extrapolated_se", &BesselHitSummary::hit_extrapolated_se)
        .def_readonly("lambdas", &BesselHitSummary::lambdas)
        .def_readonly("laplace", &BesselHitSummary::laplace)
        .def_readonly("laplace_se", &BesselHitSummary::laplace_se)
        .def_readonly("paths", &BesselHitSummary::paths);
    m.def("mc_sausage", [](int d, double r, double t, long long paths, double dt, std::uint64_t seed, int workers) {
            py::gil_scoped_release nogil;
            return mc_sausage(sp(d, r), t, mc_config(paths, dt, seed, workers));
        }, "d"_a, "r"_a, "t"_a, "paths"_a = 100000, "dt"_a = 1e-3, "seed"_a = 1, "workers"_a = 0);
    m.def("mc_bessel_hit", [](double nu, double a, double b, double horizon, long long paths, double dt,
                              std::uint64_t seed, int workers, const std::vector<double>& lambdas) {
            py::gil_scoped_release nogil;
            return mc_bessel_hit(nu, a, b, horizon, mc_config(paths, dt, seed, workers), lambdas);
        }, "nu"_a, "a"_a, "b"_a, "horizon"_a, "paths"_a = 100000, "dt"_a = 1e-3, "seed"_a = 1, "workers"_a = 0,
        "lambdas"_a = std::vector<double>{0.5, 1.0, 2.0});

    m.def("validate", [](const std::string& suite) {
            py::list out;
            for (const auto& c : validate::run_suite(suite))
                out.append(py::dict("suite"_a = c.suite, "check"_a = c.name, "value"_a = c.value,
                                    "tolerance"_a = c.tolerance, "pass"_a = c.pass));
            return out;
        }, "suite"_a = "all");
}
