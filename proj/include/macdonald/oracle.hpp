#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "macdonald/sausage.hpp"
#include "macdonald/specfun.hpp"

namespace macdonald {

// Cotangent contour s(theta) = (scale/t) (sigma + mu theta cot(alpha theta) + i nu theta),
// trapezoidal rule on (-pi, pi). The contour size is fixed by `scale`, so raising `nodes`
// only refines the quadrature.
struct TalbotConfig {
    int nodes = 48;
    double scale = 24.0;
    double sigma = -0.6122;
    double mu = 0.5017;
    double alpha = 0.6407;
    double nu = 0.2645;
};

using Transform = std::function<cplx(cplx)>;

double talbot(const Transform& F, double t, const TalbotConfig& cfg = {});

struct MCConfig {
    long long paths = 100000;
    double dt = 1e-3;
    std::uint64_t seed = 1;
    double truncation_radius = 0.0;  // 0 picks r + 6 sqrt(t)
    int workers = 0;                 // 0 reads MACDONALD_KIT_THREADS, else hardware concurrency
};

struct MCEstimate {
    double value = 0.0;
    double std_error = 0.0;
    double truncation_bound = 0.0;  // mass of int_{|x|>R} P_x[tau <= t] dx, bounded by the half-space law
    long long paths = 0;
    long long steps = 0;
};

// P_x[tau <= t] for one starting radius.
MCEstimate mc_hit_probability(const SausageParams& p, double radius, double t, const MCConfig& cfg);
MCEstimate mc_sausage(const SausageParams& p, double t, const MCConfig& cfg);

struct BesselHitSummary {
    double nu = 0.0, a = 0.0, b = 0.0, horizon = 0.0;
    double hit_fraction = 0.0;       // P(tau <= horizon)
    double hit_fraction_se = 0.0;
    double hit_extrapolated = 0.0;   // P(tau < inf) from the horizon and horizon/2 fractions
    double hit_extrapolated_se = 0.0;
    std::vector<double> lambdas;
    std::vector<double> laplace;     // E[exp(-lambda tau) | tau < inf]
    std::vector<double> laplace_se;
    long long paths = 0;
    long long steps = 0;
};

BesselHitSummary mc_bessel_hit(double nu, double a, double b, double horizon, const MCConfig& cfg,
                               const std::vector<double>& lambdas = {0.5, 1.0, 2.0});

// Worker count after the environment cap.
int resolve_workers(int requested);

}  // namespace macdonald
