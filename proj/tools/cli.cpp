#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "macdonald/errors.hpp"
#include "macdonald/levy.hpp"
#include "macdonald/oracle.hpp"
#include "macdonald/ratios.hpp"
#include "macdonald/sausage.hpp"
#include "macdonald/zeros.hpp"
#include "validate.hpp"

using json = nlohmann::ordered_json;
using namespace macdonald;

namespace {

// CSV layouts; --help prints this same table
const std::vector<std::pair<std::string, std::vector<std::string>>> kColumns = {
    {"zeros", {"nu", "index", "re", "im", "residual"}},
    {"ratio", {"nu", "w_re", "w_im", "case", "part", "re", "im"}},
    {"levy", {"nu", "a", "b", "x", "case", "density"}},
    {"sausage", {"method", "dim", "radius", "t", "value", "stderr", "truncation_bound", "paths"}},
    {"expand", {"dim", "radius", "t", "kind", "power", "coeff", "contribution"}},
    {"validate", {"suite", "check", "value", "tolerance", "pass"}},
};

const std::vector<std::string>& columns(const std::string& cmd) {
    for (const auto& [name, cols] : kColumns)
        if (name == cmd) return cols;
    throw std::logic_error("no columns for " + cmd);
}

std::string join(const std::vector<std::string>& v, char sep) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? std::string(1, sep) : "") + v[i];
    return s;
}

std::string num(double v) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// nlohmann's own float formatting is shortest round-trip; this keeps 17 digits
void emit(const json& j, std::ostream& os, int indent = 0) {
    const std::string pad(indent + 2, ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                break;
            }
            os << "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                os << (first ? "" : ",\n") << pad << json(it.key()).dump() << ": ";
                emit(it.value(), os, indent + 2);
                first = false;
            }
            os << "\n" << std::string(indent, ' ') << "}";
            break;
        }
        case json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                break;
            }
            os << "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                os << (i ? ",\n" : "") << pad;
                emit(j[i], os, indent + 2);
            }
            os << "\n" << std::string(indent, ' ') << "]";
            break;
        }
        case json::value_t::number_float: {
            const double v = j.get<double>();
            os << (std::isfinite(v) ? num(v) : "null");
            break;
        }
        default:
            os << j.dump();
    }
}

std::string cell(const json& v) {
    if (v.is_null()) return "";
    if (v.is_number_float()) return num(v.get<double>());
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        return s.find_first_of(",\"\n") == std::string::npos ? s : json(s).dump();
    }
    return v.dump();
}

struct Table {
    std::string command;
    json params = json::object();
    json rows = json::array();
    json extra = json::object();  // JSON-only fields
};

void write(const Table& t, const std::string& format, std::ostream& os) {
    if (format == "csv") {
        const auto& cols = columns(t.command);
        os << join(cols, ',') << "\n";
        for (const auto& r : t.rows) {
            std::vector<std::string> cells;
            for (const auto& c : cols) cells.push_back(r.contains(c) ? cell(r[c]) : "");
            os << join(cells, ',') << "\n";
        }
        return;
    }
    json j;
    j["schema"] = "1";
    j["command"] = t.command;
    j["params"] = t.params;
    for (auto it = t.extra.begin(); it != t.extra.end(); ++it) j[it.key()] = it.value();
    j["columns"] = columns(t.command);
    j["rows"] = t.rows;
    emit(j, os);
    os << "\n";
}

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

const char* ratio_case_name(RatioCase c) {
    switch (c) {
        case RatioCase::half_integer_low: return "half_integer_low";
        case RatioCase::half_integer_high: return "half_integer_high";
        case RatioCase::generic_low: return "generic_low";
        case RatioCase::generic_high: return "generic_high";
    }
    return "?";
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.push_back(item);
    return out;
}

// zeros keeps the documented record shape, with the row table alongside
Table run_zeros(double nu) {
    Table t{"zeros"};
    t.params["nu"] = nu;
    const ZeroSet z = find_zeros(nu);
    json list = json::array();
    for (std::size_t i = 0; i < z.zeros.size(); ++i) {
        list.push_back({{"re", z.zeros[i].real()}, {"im", z.zeros[i].imag()}, {"residual", z.residuals[i]}});
        t.rows.push_back({{"nu", nu},
                          {"index", static_cast<int>(i)},
                          {"re", z.zeros[i].real()},
                          {"im", z.zeros[i].imag()},
                          {"residual", z.residuals[i]}});
    }
    t.extra["nu"] = nu;
    t.extra["count"] = z.count;
    t.extra["zeros"] = list;
    t.extra["route_agreement"] = z.route_agreement;
    t.extra["half_integer"] = z.half_integer;
    return t;
}

Table run_ratio(double nu, double wre, double wim) {
    Table t{"ratio"};
    t.params = {{"nu", nu}, {"w_re", wre}, {"w_im", wim}};
    const cplx w(wre, wim);
    const auto d = ratio_decomposed(nu, w);
    const cplx direct = ratio_direct(nu, w);
    const std::vector<std::pair<std::string, cplx>> parts = {{"constant", cplx(d.constant_part)},
                                                             {"pole_at_zero", d.pole_at_zero},
                                                             {"pole_sum", d.pole_sum},
                                                             {"integral", d.integral_part},
                                                             {"total", d.total},
                                                             {"direct", direct}};
    for (const auto& [name, v] : parts)
        t.rows.push_back({{"nu", nu},
                          {"w_re", wre},
                          {"w_im", wim},
                          {"case", ratio_case_name(d.which)},
                          {"part", name},
                          {"re", v.real()},
                          {"im", v.imag()}});
    t.extra["relative_difference"] = std::abs(d.total - direct) / std::abs(direct);
    return t;
}

Table run_levy(double nu, double a, double b, const std::vector<double>& xs) {
    Table t{"levy"};
    t.params = {{"nu", nu}, {"a", a}, {"b", b}, {"x", xs}};
    const HittingSpec s{nu, a, b};
    const int c = static_cast<int>(levy_case(s));
    for (double x : xs)
        t.rows.push_back({{"nu", nu}, {"a", a}, {"b", b}, {"x", x}, {"case", c}, {"density", levy_density(s, x)}});
    return t;
}

struct SausageArgs {
    int dim = 3;
    double radius = 1.0;
    std::vector<double> t;
    std::string method = "exact";
    long long paths = 100000;
    double dt = 1e-3;
    int workers = 0;
    int nodes = 48;
};

Table run_sausage(const SausageArgs& a, std::uint64_t seed, bool seeded) {
    Table tb{"sausage"};
    const SausageParams p{a.dim, a.radius};
    const auto methods = split(a.method);
    if (methods.empty()) throw DomainError("sausage: --method must name at least one method");
    for (const auto& m : methods)
        if (m != "exact" && m != "asymptotic" && m != "talbot" && m != "mc")
            throw DomainError("sausage: unknown method '" + m + "' (exact|asymptotic|talbot|mc)");
    tb.params = {{"dim", a.dim}, {"radius", a.radius}, {"t", a.t}, {"method", methods}};
    const bool mc = std::find(methods.begin(), methods.end(), "mc") != methods.end();
    if (mc) {
        tb.params["paths"] = a.paths;
        tb.params["dt"] = a.dt;
        tb.params["seed"] = seeded ? seed : 1;
    }
    for (const auto& m : methods)
        for (double t : a.t) {
            json row = {{"method", m}, {"dim", a.dim}, {"radius", a.radius}, {"t", t}};
            if (m == "exact") {
                row["value"] = volume(p, t);
            } else if (m == "asymptotic") {
                row["value"] = expansion(p, t).value;
            } else if (m == "talbot") {
                TalbotConfig cfg;
                cfg.nodes = a.nodes;
                row["value"] = talbot([p](cplx s) { return laplace_L(p, s); }, t, cfg);
            } else {
                MCConfig cfg;
                cfg.paths = a.paths;
                cfg.dt = a.dt;
                cfg.workers = a.workers;
                if (seeded) cfg.seed = seed;
                const auto e = mc_sausage(p, t, cfg);
                row["value"] = e.value;
                row["stderr"] = e.std_error;
                row["truncation_bound"] = e.truncation_bound;
                row["paths"] = e.paths;
            }
            tb.rows.push_back(row);
        }
    return tb;
}

Table run_expand(int dim, double radius, double t) {
    Table tb{"expand"};
    tb.params = {{"dim", dim}, {"radius", radius}, {"t", t}};
    const SausageParams p{dim, radius};
    const auto e = expansion(p, t);
    for (const auto& term : e.terms)
        tb.rows.push_back({{"dim", dim},
                           {"radius", radius},
                           {"t", t},
                           {"kind", "term"},
                           {"power", term.power},
                           {"coeff", term.coeff},
                           {"contribution", term.coeff * std::pow(t, term.power)}});
    if (e.log_term.coeff != 0.0)
        tb.rows.push_back({{"dim", dim},
                           {"radius", radius},
                           {"t", t},
                           {"kind", "log"},
                           {"power", e.log_term.power},
                           {"coeff", e.log_term.coeff},
                           {"contribution", e.log_term.coeff * std::log(t) * std::pow(t, e.log_term.power)}});
    const double exact = volume(p, t);
    tb.rows.push_back({{"dim", dim}, {"radius", radius}, {"t", t}, {"kind", "sum"}, {"contribution", e.value}});
    tb.rows.push_back({{"dim", dim}, {"radius", radius}, {"t", t}, {"kind", "exact"}, {"contribution", exact}});
    tb.extra["remainder_order"] = e.remainder_order;
    tb.extra["remainder"] = expansion_remainder(p, t);
    return tb;
}

Table run_validate(const std::string& suite, bool& ok) {
    Table tb{"validate"};
    tb.params["suite"] = suite;
    ok = true;
    for (const auto& c : validate::run_suite(suite)) {
        tb.rows.push_back({{"suite", c.suite},
                           {"check", c.name},
                           {"value", nullable(c.value)},
                           {"tolerance", c.tolerance},
                           {"pass", c.pass}});
        ok = ok && c.pass;
    }
    tb.extra["pass"] = ok;
    return tb;
}

std::string help_footer() {
    std::string s = "CSV columns:\n";
    for (const auto& [name, cols] : kColumns) s += "  " + name + ": " + join(cols, ',') + "\n";
    s += "Exit status: 0 success, 1 numerical or validation failure, 2 precondition violation.\n";
    s += "MACDONALD_KIT_THREADS caps the Monte Carlo worker count.";
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Macdonald-function toolkit: zeros, ratios, Levy densities, Wiener sausage volumes"};
    app.footer(help_footer());
    app.require_subcommand(1);
    app.fallthrough();

    std::string output = "json", out_path;
    std::uint64_t seed = 1;
    app.add_option("--output", output, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", out_path, "write to this file instead of stdout");
    auto* seed_opt = app.add_option("--seed", seed, "seed for Monte Carlo methods");

    double nu = 0.0;
    auto* zeros = app.add_subcommand("zeros", "complex zeros of K_nu");
    zeros->add_option("--nu", nu, "order")->required();

    double wre = 0.0, wim = 0.0;
    auto* ratio = app.add_subcommand("ratio", "decomposition of K_{nu+1}(w)/K_nu(w)");
    ratio->add_option("--nu", nu, "order")->required();
    ratio->add_option("--w-re", wre, "real part of w")->required();
    ratio->add_option("--w-im", wim, "imaginary part of w");

    double a = 0.0, b = 0.0;
    std::vector<double> xs;
    auto* levy = app.add_subcommand("levy", "Levy density of the hitting time of b from a");
    levy->add_option("--nu", nu, "index")->required();
    levy->add_option("--a", a, "start")->required();
    levy->add_option("--b", b, "target")->required();
    levy->add_option("--x", xs, "evaluation points, comma-separated")->required()->delimiter(',');

    SausageArgs sa;
    auto* sausage = app.add_subcommand("sausage", "expected Wiener sausage volume L(t)");
    sausage->add_option("--dim", sa.dim, "dimension")->required();
    sausage->add_option("--radius", sa.radius, "ball radius");
    sausage->add_option("--t", sa.t, "times, comma-separated")->required()->delimiter(',');
    sausage->add_option("--method", sa.method, "exact|asymptotic|talbot|mc, comma-separated");
    sausage->add_option("--paths", sa.paths, "Monte Carlo path budget");
    sausage->add_option("--dt", sa.dt, "Monte Carlo time step");
    sausage->add_option("--workers", sa.workers, "Monte Carlo workers (0: automatic)");
    sausage->add_option("--nodes", sa.nodes, "Talbot nodes");

    int edim = 6;
    double er = 1.0, et = 100.0;
    auto* expand = app.add_subcommand("expand", "large-time expansion of L(t)");
    expand->add_option("--dim", edim, "dimension (>= 5)")->required();
    expand->add_option("--radius", er, "ball radius");
    expand->add_option("--t", et, "evaluation time");

    std::string suite = "all";
    auto* val = app.add_subcommand("validate", "run the invariant suites");
    val->add_option("--suite", suite, "all|specfun|zeros|levy|sausage");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        Table t;
        bool ok = true;
        if (*zeros) t = run_zeros(nu);
        if (*ratio) t = run_ratio(nu, wre, wim);
        if (*levy) t = run_levy(nu, a, b, xs);
        if (*sausage) t = run_sausage(sa, seed, seed_opt->count() > 0);
        if (*expand) t = run_expand(edim, er, et);
        if (*val) t = run_validate(suite, ok);
        if (out_path.empty()) {
            write(t, output, std::cout);
        } else {
            std::ofstream f(out_path);
            if (!f) throw DomainError("cannot open --out file " + out_path);
            write(t, output, f);
        }
        return ok ? 0 : 1;
    } catch (const DomainError& e) {
        std::cerr << "precondition violated: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    }
}
