#pragma once

#include "igw/rng.hpp"

#include <cstddef>
#include <vector>

namespace igw {

// ===========================================================================
// The diffusion limit of the rescaled unit-root process X_{floor(ns)}/n:
//
//   dY_s = mu0 ds + sigma0 sqrt(Y_s) dB_s,   Y_0 = 0,
//
// simulated on a uniform grid of [0,1] by full-truncation Euler-Maruyama,
// plus the integral functionals that appear as weak limits of the
// normalized least-squares statistics.
// ===========================================================================

struct CirConfig {
    double mu0 = 1.0;          // drift, > 0
    double sigma0 = 1.0;       // volatility coefficient, >= 0
    std::size_t grid_size = 1000; // N; grid step 1/N

    double step() const noexcept { return 1.0 / static_cast<double>(grid_size); }
    void validate() const; // throws ConfigError
};

/// One discretized trajectory Y_0..Y_N with the Brownian increments that
/// drove it (increments[k] steps Y_k to Y_{k+1}).
struct CirPath {
    std::vector<double> values;
    std::vector<double> increments;
    SeedRecord seed;
};

/// Weak-limit functionals of one trajectory. Integrals with a 1/s weight
/// start at the first grid point s = 1/N, mirroring the discrete sums that
/// start at t = 1; the [0, 1/N) strip vanishes as the grid refines because
/// Y_s/s -> mu0 near zero.
struct LimitFunctionals {
    double int_Y_over_s = 0.0;   // int_0^1 Y_s / s ds
    double int_Y2_over_s = 0.0;  // int_0^1 Y_s^2 / s ds
    double stoch_int_Y32 = 0.0;  // sigma0 int_0^1 Y_s^{3/2} / s dB_s
    double stoch_int_sqrtY = 0.0;// sigma0 int_0^1 sqrt(Y_s) dB_s
    double int_Y = 0.0;          // int_0^1 Y_s ds
    double int_Y2 = 0.0;         // int_0^1 Y_s^2 ds
    double z_gauss = 0.0;        // independent N(0, sigma0^2 mu0) draw
};

/// Full-truncation Euler-Maruyama:
/// Y_{k+1} = max(0, Y_k + mu0/N + sigma0 sqrt(max(Y_k,0)) dB_k).
/// Deterministic given (cfg, seed).
CirPath simulate_cir(const CirConfig& cfg, SeedRecord seed);

/// Left-endpoint Riemann/Ito sums of the functionals above. The z_gauss
/// component is drawn from an independent substream of the path's seed, so
/// it is independent of the trajectory but reproducible.
LimitFunctionals limit_functionals(const CirPath& path, const CirConfig& cfg);

enum class LimitLaw {
    WlsSlope, // n(m_tilde - 1) limit: sigma0 int Y^{3/2}/s dB / int Y^2/s ds
    OlsPair,  // [n(m_hat - 1), mu_hat - mu0] limit via the 2x2 OLS system
    MuGauss,  // sqrt(ln n)(mu_tilde - mu0) limit: N(0, sigma0^2 mu0)
};

/// Monte Carlo sample from one of the limit laws. Scalar laws fill
/// `values`; OlsPair fills `values` (slope component) and `values2`
/// (intercept component) pairwise. Draws whose 2x2 system is singular are
/// rejected, resampled and counted.
struct LimitSample {
    LimitLaw law = LimitLaw::WlsSlope;
    std::vector<double> values;
    std::vector<double> values2;
    std::size_t rejected = 0;
};

LimitSample sample_limit_law(LimitLaw law, const CirConfig& cfg,
                             std::size_t draws, SeedRecord seed,
                             unsigned workers = 1);

} // namespace igw
