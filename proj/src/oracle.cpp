#include "macdonald/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <thread>

#include "macdonald/errors.hpp"
#include "macdonald/quadrature.hpp"

namespace macdonald {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// xoshiro256**; one independent stream per (seed, stream id), so results do not depend on scheduling
class Stream {
public:
    using result_type = std::uint64_t;
    Stream(std::uint64_t seed, std::uint64_t id) {
        std::uint64_t x = seed ^ (0xD1B54A32D192ED03ULL * (id + 1));
        for (auto& w : s_) w = splitmix64(x);
    }
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() {
        const std::uint64_t out = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return out;
    }
    double uniform() { return (operator()() >> 11) * 0x1.0p-53; }
    double normal() { return gauss_(*this); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
    std::normal_distribution<double> gauss_;
};

std::uint64_t stream_id(std::uint64_t phase, std::uint64_t group, std::uint64_t index) {
    return (phase << 56) ^ (group << 36) ^ index;
}

// Runs body(task) for task in [0, n) on the worker pool; body writes only to its own slot.
template <class F>
void parallel_for(long long n, int workers, F&& body) {
    workers = static_cast<int>(std::min<long long>(workers, std::max<long long>(n, 1)));
    if (workers <= 1) {
        for (long long i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<long long> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (long long i = next++; i < n; i = next++) body(i);
        });
    for (auto& th : pool) th.join();
}

constexpr long long kBlock = 256;

struct Moments {
    double sum = 0.0, sum2 = 0.0;
    long long n = 0, steps = 0;
    void add(double v) {
        sum += v;
        sum2 += v * v;
        ++n;
    }
    void merge(const Moments& o) {
        sum += o.sum;
        sum2 += o.sum2;
        n += o.n;
        steps += o.steps;
    }
    double mean() const { return n ? sum / n : 0.0; }
    double var() const {
        if (n < 2) return 0.0;
        const double m = mean();
        return std::max(0.0, (sum2 - n * m * m) / (n - 1));
    }
};

void check_mc(const MCConfig& c) {
    if (c.paths < 1) throw DomainError("MCConfig: paths must be >= 1");
    if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw DomainError("MCConfig: dt must be positive");
    if (c.workers < 0) throw DomainError("MCConfig: workers must be >= 0");
}

// One path from |x| = rho: 1 minus the survival product of the per-step bridge crossing probabilities.
double hit_path(Stream& g, int d, double r, double rho, double t, double dt, long long& steps) {
    const int n = std::max(1, static_cast<int>(std::ceil(t / dt)));
    const double h = t / n, sh = std::sqrt(h);
    double x[8] = {rho, 0, 0, 0, 0, 0, 0, 0};
    double dist = rho - r, surv = 1.0;
    for (int i = 0; i < n; ++i) {
        // far enough that the remaining time cannot bring the path in
        if (dist > 8.5 * std::sqrt(t - i * h)) break;
        double q = 0.0;
        for (int k = 0; k < d; ++k) {
            x[k] += sh * g.normal();
            q += x[k] * x[k];
        }
        ++steps;
        const double nd = std::sqrt(q) - r;
        if (nd <= 0.0) return 1.0;
        surv *= 1.0 - std::exp(-2.0 * dist * nd / h);
        dist = nd;
    }
    return 1.0 - surv;
}

void check_sausage_dim(const SausageParams& p) {
    if (p.d < 2 || p.d > 6) throw DomainError("mc_sausage: d must lie in {2,...,6}");
    if (!(p.r > 0.0)) throw DomainError("mc_sausage: radius must be positive");
}

}  // namespace

int resolve_workers(int requested) {
    int cap = 0;
    if (const char* env = std::getenv("MACDONALD_KIT_THREADS")) {
        try {
            cap = std::stoi(env);
        } catch (const std::exception&) {
            throw DomainError("MACDONALD_KIT_THREADS must be a positive integer");
        }
        if (cap < 1) throw DomainError("MACDONALD_KIT_THREADS must be a positive integer");
    }
    int n = requested > 0 ? requested : (cap > 0 ? cap : static_cast<int>(std::thread::hardware_concurrency()));
    if (cap > 0) n = std::min(n, cap);
    return std::max(1, n);
}

double talbot(const Transform& F, double t, const TalbotConfig& cfg) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("talbot: t must be positive");
    if (cfg.nodes < 16 || cfg.nodes % 2) throw DomainError("talbot: nodes must be even and >= 16");
    if (!(cfg.scale > 0.0)) throw DomainError("talbot: scale must be positive");
    const int N = cfg.nodes;
    const double h = 2.0 * kPi / N, c = cfg.scale / t;
    double sum = 0.0;
    for (int j = 0; j < N / 2; ++j) {
        const double th = (j + 0.5) * h;
        const double at = cfg.alpha * th;
        const double cot = std::cos(at) / std::sin(at), sn = std::sin(at);
        const cplx s = c * cplx(cfg.sigma + cfg.mu * th * cot, cfg.nu * th);
        const cplx ds = c * cplx(cfg.mu * cot - cfg.mu * at / (sn * sn), cfg.nu);
        sum += (std::exp(s * t) * F(s) * ds).imag();
    }
    return sum * h / kPi;
}

MCEstimate mc_hit_probability(const SausageParams& p, double radius, double t, const MCConfig& cfg) {
    check_sausage_dim(p);
    check_mc(cfg);
    if (!(t > 0.0)) throw DomainError("mc_hit_probability: t must be positive");
    if (!(radius > p.r)) throw DomainError("mc_hit_probability: start must lie outside the ball");
    const long long blocks = (cfg.paths + kBlock - 1) / kBlock;
    std::vector<Moments> acc(blocks);
    parallel_for(blocks, resolve_workers(cfg.workers), [&](long long b) {
        const long long lo = b * kBlock, hi = std::min(cfg.paths, lo + kBlock);
        for (long long i = lo; i < hi; ++i) {
            Stream g(cfg.seed, stream_id(3, 0, i));
            acc[b].add(hit_path(g, p.d, p.r, radius, t, cfg.dt, acc[b].steps));
        }
    });
    Moments m;
    for (const auto& a : acc) m.merge(a);
    return {m.mean(), std::sqrt(m.var() / m.n), 0.0, m.n, m.steps};
}

MCEstimate mc_sausage(const SausageParams& p, double t, const MCConfig& cfg) {
    check_sausage_dim(p);
    check_mc(cfg);
    if (!(t > 0.0)) throw DomainError("mc_sausage: t must be positive");
    const double r = p.r, R = cfg.truncation_radius > 0.0 ? cfg.truncation_radius : r + 6.0 * std::sqrt(t);
    if (R < r + 6.0 * std::sqrt(t)) throw DomainError("mc_sausage: truncation_radius must be >= r + 6 sqrt(t)");
    const int d = p.d, K = 48;
    const double S = p.surface();
    std::vector<double> edge(K + 1), vol(K);
    for (int k = 0; k <= K; ++k) edge[k] = r + (R - r) * k / K;
    for (int k = 0; k < K; ++k) vol[k] = S / d * (std::pow(edge[k + 1], d) - std::pow(edge[k], d));
    const int workers = resolve_workers(cfg.workers);

    // shell sampling with density proportional to rho^{d-1}
    auto run = [&](int phase, const std::vector<long long>& counts) {
        std::vector<std::pair<int, long long>> tasks;
        for (int k = 0; k < K; ++k)
            for (long long b = 0; b * kBlock < counts[k]; ++b) tasks.push_back({k, b});
        std::vector<Moments> acc(tasks.size());
        parallel_for(static_cast<long long>(tasks.size()), workers, [&](long long ti) {
            const auto [k, b] = tasks[ti];
            const double a0 = std::pow(edge[k], d), a1 = std::pow(edge[k + 1], d);
            const long long lo = b * kBlock, hi = std::min(counts[k], lo + kBlock);
            for (long long i = lo; i < hi; ++i) {
                Stream g(cfg.seed, stream_id(phase, k, i));
                const double rho = std::pow(a0 + g.uniform() * (a1 - a0), 1.0 / d);
                acc[ti].add(hit_path(g, d, r, rho, t, cfg.dt, acc[ti].steps));
            }
        });
        std::vector<Moments> shell(K);
        for (std::size_t ti = 0; ti < tasks.size(); ++ti) shell[tasks[ti].first].merge(acc[ti]);
        return shell;
    };

    // pilot for the Neyman allocation; its paths are not reused
    const long long pilot_n = std::max<long long>(32, cfg.paths / (10 * K));
    const auto pilot = run(1, std::vector<long long>(K, pilot_n));
    std::vector<double> w(K);
    double wsum = 0.0;
    for (int k = 0; k < K; ++k) {
        // a small pilot misses rare hits in the outer shells; the half-space law bounds them from above
        const double q = std::erfc((edge[k] - r) / std::sqrt(2.0 * t));
        w[k] = vol[k] * std::max(std::sqrt(pilot[k].var()), std::sqrt(q * (1.0 - q)));
        wsum += w[k];
    }
    std::vector<long long> counts(K);
    for (int k = 0; k < K; ++k) counts[k] = std::max<long long>(16, std::llround(cfg.paths * w[k] / wsum));
    const auto main = run(2, counts);

    MCEstimate e;
    double var = 0.0;
    for (int k = 0; k < K; ++k) {
        e.value += vol[k] * main[k].mean();
        var += vol[k] * vol[k] * main[k].var() / main[k].n;
        e.paths += main[k].n;
        e.steps += main[k].steps + pilot[k].steps;
    }
    e.std_error = std::sqrt(var);
    // P_x[tau <= t] <= erfc((|x| - r) / sqrt(2t)) since the ball sits in a half-space
    auto tail = [&](double u) {
        const double rho = R + u;
        return S * std::pow(rho, d - 1) * std::erfc((rho - r) / std::sqrt(2.0 * t));
    };
    e.truncation_bound = quad_semiinf(tail, EndpointBehavior::exp(1.0).at(std::sqrt(t)), QuadSpec{1e-8, 1e-300, 2000}).value;
    return e;
}

BesselHitSummary mc_bessel_hit(double nu, double a, double b, double horizon, const MCConfig& cfg,
                               const std::vector<double>& lambdas) {
    check_mc(cfg);
    if (!std::isfinite(nu)) throw DomainError("mc_bessel_hit: non-finite order");
    if (!(b > 0.0 && a > b)) throw DomainError("mc_bessel_hit: needs 0 < b < a");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("mc_bessel_hit: horizon must be positive");
    if (cfg.dt > (a - b) * (a - b) / 100.0) throw DomainError("mc_bessel_hit: dt must not exceed (a-b)^2/100");
    for (double l : lambdas)
        if (!(l > 0.0)) throw DomainError("mc_bessel_hit: lambdas must be positive");

    const double delta = 2.0 * nu + 2.0, B = b * b, half = 0.5 * horizon;
    const std::size_t nl = lambdas.size();
    // tail of P(tau in (h, inf)) ~ h^{-nu} for nu > 0; Richardson on h = horizon/2, horizon
    const double rw = nu > 0.0 ? std::pow(2.0, -nu) : 0.0;
    const double c_full = 1.0 / (1.0 - rw), c_half = -rw / (1.0 - rw);

    struct Acc {
        Moments hit, ext;
        std::vector<double> sl, sl2, slp;
        long long steps = 0;
    };
    const long long blocks = (cfg.paths + kBlock - 1) / kBlock;
    std::vector<Acc> acc(blocks);
    parallel_for(blocks, resolve_workers(cfg.workers), [&](long long blk) {
        Acc& A = acc[blk];
        A.sl.assign(nl, 0.0);
        A.sl2.assign(nl, 0.0);
        A.slp.assign(nl, 0.0);
        std::vector<double> lap(nl);
        const long long lo = blk * kBlock, hi = std::min(cfg.paths, lo + kBlock);
        for (long long i = lo; i < hi; ++i) {
            Stream g(cfg.seed, stream_id(4, 0, i));
            double X = a * a, t = 0.0, surv = 1.0, hit = 0.0, hit_half = 0.0;
            std::fill(lap.begin(), lap.end(), 0.0);
            while (t < horizon && surv > 1e-16) {
                const double gap = X - B;
                // base step near the boundary, larger where a one-step crossing is out of reach
                const double reach = gap / (40.0 * std::sqrt(X));
                double h = std::max(cfg.dt, reach * reach);
                const double stop = t < half ? half : horizon;
                h = std::min(h, stop - t);
                const double Xn = X + delta * h + 2.0 * std::sqrt(std::max(X, 0.0)) * std::sqrt(h) * g.normal();
                ++A.steps;
                double w;
                if (Xn <= B) {
                    w = surv;
                    surv = 0.0;
                } else {
                    // bridge crossing of the level B; local variance 4B per unit time
                    const double pc = std::exp(-2.0 * gap * (Xn - B) / (4.0 * B * h));
                    w = surv * pc;
                    surv -= w;
                }
                if (w > 0.0) {
                    const double tau = t + 0.5 * h;
                    hit += w;
                    if (t + h <= half) hit_half += w;
                    for (std::size_t j = 0; j < nl; ++j) lap[j] += w * std::exp(-lambdas[j] * tau);
                }
                X = Xn;
                t += h;
                if (stop == half && t >= half) t = half;
            }
            const double ext = c_full * hit + c_half * hit_half;
            A.hit.add(hit);
            A.ext.add(ext);
            for (std::size_t j = 0; j < nl; ++j) {
                A.sl[j] += lap[j];
                A.sl2[j] += lap[j] * lap[j];
                A.slp[j] += lap[j] * ext;
            }
        }
    });

    Acc tot;
    tot.sl.assign(nl, 0.0);
    tot.sl2.assign(nl, 0.0);
    tot.slp.assign(nl, 0.0);
    for (const auto& A : acc) {
        tot.hit.merge(A.hit);
        tot.ext.merge(A.ext);
        tot.steps += A.steps;
        for (std::size_t j = 0; j < nl; ++j) {
            tot.sl[j] += A.sl[j];
            tot.sl2[j] += A.sl2[j];
            tot.slp[j] += A.slp[j];
        }
    }
    BesselHitSummary s;
    s.nu = nu;
    s.a = a;
    s.b = b;
    s.horizon = horizon;
    s.lambdas = lambdas;
    s.paths = tot.hit.n;
    s.steps = tot.steps;
    const double n = static_cast<double>(tot.hit.n);
    s.hit_fraction = tot.hit.mean();
    s.hit_fraction_se = std::sqrt(tot.hit.var() / n);
    s.hit_extrapolated = nu > 0.0 ? tot.ext.mean() : 1.0;
    s.hit_extrapolated_se = nu > 0.0 ? std::sqrt(tot.ext.var() / n) : 0.0;
    const double P = s.hit_extrapolated;
    for (std::size_t j = 0; j < nl; ++j) {
        const double Lm = tot.sl[j] / n, ratio = Lm / P;
        // delta method for the ratio of means
        double v;
        if (nu > 0.0) {
            const double vl = tot.sl2[j] / n - Lm * Lm;
            const double vp = tot.ext.sum2 / n - P * P;
            const double cov = tot.slp[j] / n - Lm * P;
            v = (vl - 2.0 * ratio * cov + ratio * ratio * vp) / (P * P);
        } else {
            v = tot.sl2[j] / n - Lm * Lm;
        }
        s.laplace.push_back(ratio);
        s.laplace_se.push_back(std::sqrt(std::max(v, 0.0) / (n - 1.0 > 0.0 ? n - 1.0 : 1.0)));
    }
    return s;
}

}  // namespace macdonald
