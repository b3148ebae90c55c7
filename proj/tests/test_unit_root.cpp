#include "igw/unit_root.hpp"

#include "igw/errors.hpp"
#include "igw/io.hpp"
#include "igw/model.hpp"

#include <doctest.h>

#include <cmath>

using namespace igw;

namespace {

UnitRootOptions fast_options() {
    UnitRootOptions opt;
    opt.grid_size = 200;
    opt.workers = 2;
    return opt;
}

CountPath integrated_path() {
    return simulate_path(ModelSpec::poisson_inarch(2.0), 400, {301, 0});
}

CountPath stationary_path() {
    return simulate_path({OffspringDist::bernoulli(0.5),
                          ImmigrationDist::poisson(2.0)},
                         400, {302, 0});
}

} // namespace

TEST_CASE("constant path cannot be tested") {
    CountPath zeros;
    zeros.values.assign(40, 0);
    CHECK_THROWS_AS(unit_root_test(zeros, 0.05, UnitRootEstimator::Wls, 500,
                                   {1, 0}, fast_options()),
                    DomainError);
}

TEST_CASE("input validation") {
    const CountPath path = integrated_path();
    CHECK_THROWS_AS(unit_root_test(path, 0.0, UnitRootEstimator::Wls, 500, {1, 0}),
                    ConfigError);
    CHECK_THROWS_AS(unit_root_test(path, 1.0, UnitRootEstimator::Wls, 500, {1, 0}),
                    ConfigError);
    CHECK_THROWS_AS(unit_root_test(path, 0.05, UnitRootEstimator::Wls, 10, {1, 0}),
                    ConfigError);
}

TEST_CASE("unit root is kept on an integrated path, rejected on a stationary one") {
    const UnitRootResult keep = unit_root_test(
        integrated_path(), 0.05, UnitRootEstimator::Wls, 1000, {5, 0}, fast_options());
    CHECK_FALSE(keep.reject);
    CHECK(keep.mu_tilde > 0.0);
    CHECK(keep.sigma2_hat > 0.0);

    const UnitRootResult reject = unit_root_test(
        stationary_path(), 0.05, UnitRootEstimator::Wls, 1000, {5, 0}, fast_options());
    CHECK(reject.reject);
    // the statistic n(m_tilde - 1) is strongly negative under m0 = 0.5
    CHECK(reject.statistic < reject.critical_values.at(0.05).first);
}

TEST_CASE("test is deterministic given (path, level, draws, seed)") {
    const CountPath path = integrated_path();
    const UnitRootResult a = unit_root_test(path, 0.05, UnitRootEstimator::Wls,
                                            800, {6, 0}, fast_options());
    UnitRootOptions serial = fast_options();
    serial.workers = 1;
    const UnitRootResult b =
        unit_root_test(path, 0.05, UnitRootEstimator::Wls, 800, {6, 0}, serial);
    CHECK(unit_root_result_to_json(a) == unit_root_result_to_json(b));
}

TEST_CASE("acceptance intervals are nested across levels") {
    const UnitRootResult r = unit_root_test(
        integrated_path(), 0.05, UnitRootEstimator::Wls, 1000, {7, 0}, fast_options());
    const auto& cv = r.critical_values;
    REQUIRE(cv.count(0.01) == 1);
    REQUIRE(cv.count(0.05) == 1);
    REQUIRE(cv.count(0.10) == 1);
    CHECK(cv.at(0.01).first <= cv.at(0.05).first);
    CHECK(cv.at(0.05).first <= cv.at(0.10).first);
    CHECK(cv.at(0.10).second <= cv.at(0.05).second);
    CHECK(cv.at(0.05).second <= cv.at(0.01).second);

    // monotonicity: a 5%-level keep cannot become a rejection at 1%
    auto inside = [&](double level) {
        return r.statistic >= cv.at(level).first &&
               r.statistic <= cv.at(level).second;
    };
    if (inside(0.05)) CHECK(inside(0.01));
}

TEST_CASE("both estimator variants produce a finite calibrated test") {
    for (UnitRootEstimator est : {UnitRootEstimator::Wls, UnitRootEstimator::Ols}) {
        const UnitRootResult r = unit_root_test(integrated_path(), 0.05, est, 600,
                                                {8, 0}, fast_options());
        CHECK(std::isfinite(r.statistic));
        CHECK(r.critical_values.at(0.05).first < r.critical_values.at(0.05).second);
    }
}

TEST_CASE("short paths carry a warning") {
    const CountPath path = simulate_path(ModelSpec::poisson_inarch(2.0), 30, {9, 0});
    const UnitRootResult r =
        unit_root_test(path, 0.05, UnitRootEstimator::Wls, 500, {9, 0}, fast_options());
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].find("shorter than 50") != std::string::npos);
}

// ===========================================================================
// decide_regime
// ===========================================================================

TEST_CASE("regime rules with a stationarity p-value") {
    const double level = 0.05;
    // unit root kept + stationarity rejected -> integrated
    const RegimeDecision a =
        decide_regime(integrated_path(), level, 0.01, UnitRootEstimator::Wls, 800,
                      {10, 0}, fast_options());
    CHECK_FALSE(a.unit_root.reject);
    CHECK(a.regime == Regime::LikelyIntegrated);
    CHECK_FALSE(a.unilateral);

    // unit root kept + stationarity kept -> inconclusive
    const RegimeDecision b =
        decide_regime(integrated_path(), level, 0.60, UnitRootEstimator::Wls, 800,
                      {10, 0}, fast_options());
    CHECK(b.regime == Regime::Inconclusive);

    // unit root rejected + stationarity kept -> stationary
    const RegimeDecision c =
        decide_regime(stationary_path(), level, 0.60, UnitRootEstimator::Wls, 800,
                      {10, 0}, fast_options());
    CHECK(c.unit_root.reject);
    CHECK(c.regime == Regime::LikelyStationary);

    // both rejected -> inconclusive
    const RegimeDecision d =
        decide_regime(stationary_path(), level, 0.01, UnitRootEstimator::Wls, 800,
                      {10, 0}, fast_options());
    CHECK(d.regime == Regime::Inconclusive);
}

TEST_CASE("regime decision without a p-value is unilateral") {
    const RegimeDecision a =
        decide_regime(integrated_path(), 0.05, std::nullopt, UnitRootEstimator::Wls,
                      800, {11, 0}, fast_options());
    CHECK(a.unilateral);
    CHECK(a.regime == Regime::LikelyIntegrated);

    const RegimeDecision b =
        decide_regime(stationary_path(), 0.05, std::nullopt, UnitRootEstimator::Wls,
                      800, {11, 0}, fast_options());
    CHECK(b.unilateral);
    CHECK(b.regime == Regime::LikelyStationary);
}

TEST_CASE("invalid p-values are rejected") {
    CHECK_THROWS_AS(decide_regime(integrated_path(), 0.05, 1.5,
                                  UnitRootEstimator::Wls, 500, {12, 0},
                                  fast_options()),
                    ConfigError);
}

TEST_CASE("cache keys round plug-ins to four decimals") {
    const std::string key = critical_value_cache_key(
        1.23456789, 0.98765432, UnitRootEstimator::Wls, 1000, {42, 7});
    CHECK(key == "1.2346|0.9877|wls|1000|42:7");
}
