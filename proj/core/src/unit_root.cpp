#include "igw/unit_root.hpp"

#include "igw/errors.hpp"
#include "igw/stats.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace igw {

namespace {

constexpr double kStandardLevels[] = {0.01, 0.025, 0.05, 0.10};

// The limit sampler for the test draws from a substream-tagged copy of the
// caller's seed so path simulation and calibration never share a stream.
constexpr std::uint64_t kCalibrationTag = 0xCA1B;

} // namespace

const char* to_string(UnitRootEstimator e) noexcept {
    return e == UnitRootEstimator::Wls ? "wls" : "ols";
}

const char* to_string(Regime r) noexcept {
    switch (r) {
    case Regime::LikelyIntegrated: return "likely-integrated";
    case Regime::LikelyStationary: return "likely-stationary";
    case Regime::Inconclusive: return "inconclusive";
    }
    return "?";
}

UnitRootResult unit_root_test(const CountPath& path, double level,
                              UnitRootEstimator estimator,
                              std::size_t limit_draws, SeedRecord seed,
                              const UnitRootOptions& opt) {
    if (!(level > 0.0 && level < 1.0))
        throw ConfigError("unit_root_test: level must lie in (0, 1)");
    if (limit_draws < 100)
        throw ConfigError("unit_root_test: need at least 100 limit draws");

    UnitRootResult result;
    result.level = level;
    result.estimator_used = estimator;
    result.limit_draws = limit_draws;
    result.seed = seed;
    if (path.n() < 50) {
        result.warnings.push_back(
            "path shorter than 50 observations: plug-in estimates may be unstable");
    }

    // Plug-in nuisance parameters, always from the 1/t-WLS recipe.
    const Estimate wls = fit(path, WeightScheme::reciprocal_t());
    result.mu_tilde = wls.mu_hat;
    result.sigma2_hat = estimate_sigma2(path, wls.mu_hat);
    if (!(result.sigma2_hat > 0.0)) {
        throw DomainError("unit_root_test: sigma2_hat = 0, cannot calibrate the "
                          "limit distribution");
    }
    if (!(result.mu_tilde > 0.0)) {
        std::ostringstream msg;
        msg << "unit_root_test: plug-in mu_tilde = " << result.mu_tilde
            << " is not positive, cannot calibrate the limit distribution";
        throw DomainError(msg.str());
    }

    // Test statistic n(m_hat - 1) under the requested weighting.
    const double n = static_cast<double>(path.n());
    if (estimator == UnitRootEstimator::Wls) {
        result.statistic = n * (wls.m_hat - 1.0);
    } else {
        result.statistic = n * (fit(path, WeightScheme::ols()).m_hat - 1.0);
    }

    // Simulated limit law at the plug-ins.
    const CirConfig cfg{result.mu_tilde, std::sqrt(result.sigma2_hat),
                        opt.grid_size};
    const LimitLaw law = estimator == UnitRootEstimator::Wls ? LimitLaw::WlsSlope
                                                             : LimitLaw::OlsPair;
    const LimitSample draws = sample_limit_law(
        law, cfg, limit_draws,
        SeedRecord{derive_seed(seed.master, seed.stream, kCalibrationTag), 0},
        opt.workers);
    result.rejected_draws = draws.rejected;

    // Equal-tailed acceptance intervals, nested across levels because all
    // come from the same draw sample.
    auto add_level = [&](double alpha) {
        if (result.critical_values.count(alpha)) return;
        result.critical_values[alpha] = {quantile(draws.values, alpha / 2.0),
                                         quantile(draws.values, 1.0 - alpha / 2.0)};
    };
    for (double alpha : kStandardLevels) add_level(alpha);
    add_level(level);

    const auto [lo, hi] = result.critical_values.at(level);
    result.reject = result.statistic < lo || result.statistic > hi;
    return result;
}

RegimeDecision decide_regime(const CountPath& path, double level,
                             std::optional<double> stationarity_pvalue,
                             UnitRootEstimator estimator, std::size_t limit_draws,
                             SeedRecord seed, const UnitRootOptions& opt) {
    if (stationarity_pvalue &&
        !(*stationarity_pvalue >= 0.0 && *stationarity_pvalue <= 1.0)) {
        throw ConfigError("decide_regime: stationarity p-value must lie in [0, 1]");
    }

    RegimeDecision decision;
    decision.unit_root =
        unit_root_test(path, level, estimator, limit_draws, seed, opt);
    decision.stationarity_pvalue = stationarity_pvalue;

    const bool unit_root_rejected = decision.unit_root.reject;
    if (!stationarity_pvalue) {
        decision.unilateral = true;
        decision.regime = unit_root_rejected ? Regime::LikelyStationary
                                             : Regime::LikelyIntegrated;
        return decision;
    }

    const bool stationarity_rejected = *stationarity_pvalue < level;
    if (!unit_root_rejected && stationarity_rejected) {
        decision.regime = Regime::LikelyIntegrated;
    } else if (unit_root_rejected && !stationarity_rejected) {
        decision.regime = Regime::LikelyStationary;
    } else {
        decision.regime = Regime::Inconclusive;
    }
    return decision;
}

std::string critical_value_cache_key(double mu_tilde, double sigma2_hat,
                                     UnitRootEstimator estimator,
                                     std::size_t limit_draws, SeedRecord seed) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%.4f|%.4f|%s|%zu|%llu:%llu", mu_tilde,
                  sigma2_hat, to_string(estimator), limit_draws,
                  static_cast<unsigned long long>(seed.master),
                  static_cast<unsigned long long>(seed.stream));
    return buf;
}

} // namespace igw
