#pragma once

#include "igw/cir.hpp"
#include "igw/estimators.hpp"
#include "igw/model.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace igw {

// ===========================================================================
// Unit-root decision procedure: test H0: m = 1 against the simulated limit
// law of n(m_hat - 1), with nuisance parameters (mu, sigma^2) replaced by
// their plug-in estimates (1/t-WLS intercept, ratio sigma^2 estimator).
// The acceptance region is equal-tailed and two-sided.
// ===========================================================================

enum class UnitRootEstimator { Wls, Ols };
const char* to_string(UnitRootEstimator e) noexcept;

/// Equal-tailed acceptance intervals per level, nested by construction
/// (computed from one sample of limit draws).
using CriticalValueMap = std::map<double, std::pair<double, double>>;

struct UnitRootResult {
    double statistic = 0.0; // n(m_hat - 1)
    UnitRootEstimator estimator_used = UnitRootEstimator::Wls;
    double mu_tilde = 0.0;    // plug-in intercept (1/t-WLS)
    double sigma2_hat = 0.0;  // plug-in ratio estimator
    CriticalValueMap critical_values;
    bool reject = false;
    double level = 0.05;
    std::size_t limit_draws = 0;
    std::size_t rejected_draws = 0; // degenerate limit draws resampled
    SeedRecord seed;
    std::vector<std::string> warnings;
};

/// Simulation knobs for the limit-law calibration.
struct UnitRootOptions {
    std::size_t grid_size = 1000; // CIR grid for the limit draws
    unsigned workers = 1;
};

/// Tests H0: m = 1 on the path at the given level.
///
/// Plug-ins are estimated from the path, `limit_draws` samples of the
/// Theorem-2 (WLS) or Theorem-3 (OLS) slope limit are drawn from the CIR
/// module at those plug-ins, and n(m_hat - 1) is compared with the
/// equal-tailed acceptance interval. Deterministic given
/// (path, level, estimator, limit_draws, seed).
UnitRootResult unit_root_test(const CountPath& path, double level,
                              UnitRootEstimator estimator,
                              std::size_t limit_draws, SeedRecord seed,
                              const UnitRootOptions& opt = {});

enum class Regime { LikelyIntegrated, LikelyStationary, Inconclusive };
const char* to_string(Regime r) noexcept;

struct RegimeDecision {
    Regime regime = Regime::Inconclusive;
    /// True when no stationarity p-value was supplied and only the
    /// unit-root half of the procedure drove the call.
    bool unilateral = false;
    UnitRootResult unit_root;
    std::optional<double> stationarity_pvalue;
};

/// Combines the unit-root test with an externally supplied stationarity-test
/// p-value (KPSS-style, null = stationary):
///   unit root kept, stationarity rejected -> LikelyIntegrated
///   unit root rejected, stationarity kept -> LikelyStationary
///   otherwise                             -> Inconclusive
/// Without a p-value the unit-root half decides alone and the result is
/// flagged unilateral.
RegimeDecision decide_regime(const CountPath& path, double level,
                             std::optional<double> stationarity_pvalue,
                             UnitRootEstimator estimator, std::size_t limit_draws,
                             SeedRecord seed, const UnitRootOptions& opt = {});

/// Cache key for critical-value tables: plug-ins rounded to 4 decimals,
/// joined with the estimator, draw count and seed.
std::string critical_value_cache_key(double mu_tilde, double sigma2_hat,
                                     UnitRootEstimator estimator,
                                     std::size_t limit_draws, SeedRecord seed);

} // namespace igw
