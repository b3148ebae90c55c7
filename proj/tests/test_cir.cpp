#include "igw/cir.hpp"

#include "igw/errors.hpp"
#include "igw/estimators.hpp"
#include "igw/model.hpp"
#include "igw/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace igw;

// ===========================================================================
// Trajectories
// ===========================================================================

TEST_CASE("zero volatility reduces to the deterministic drift line") {
    const CirConfig cfg{2.0, 0.0, 10000};
    const CirPath path = simulate_cir(cfg, {1, 0});
    const double dt = cfg.step();
    for (std::size_t k = 0; k <= cfg.grid_size; k += 1000) {
        CHECK(path.values[k] ==
              doctest::Approx(2.0 * static_cast<double>(k) * dt).epsilon(1e-12));
    }
    CHECK(path.values.back() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("paths are nonnegative and reproducible") {
    const CirConfig cfg{0.5, 2.0, 2000}; // violent volatility to stress truncation
    const CirPath a = simulate_cir(cfg, {9, 4});
    const CirPath b = simulate_cir(cfg, {9, 4});
    CHECK(a.values == b.values);
    for (double y : a.values) CHECK(y >= 0.0);
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(simulate_cir({0.0, 1.0, 100}, {1, 0}), ConfigError);
    CHECK_THROWS_AS(simulate_cir({1.0, -1.0, 100}, {1, 0}), ConfigError);
    CHECK_THROWS_AS(simulate_cir({1.0, 1.0, 1}, {1, 0}), ConfigError);
}

TEST_CASE("drift and variance identities at interior times") {
    // E[Y_s] = mu0 s and Var(Y_s) = sigma0^2 mu0 s^2 / 2 (constant drift).
    const CirConfig cfg{2.0, 1.0, 400};
    const std::size_t reps = 20000;
    const std::vector<double> times{0.25, 0.5, 1.0};
    std::vector<RunningMoments> at_time(times.size());
    for (std::size_t r = 0; r < reps; ++r) {
        const CirPath path = simulate_cir(cfg, {17, r});
        for (std::size_t i = 0; i < times.size(); ++i) {
            const auto k = static_cast<std::size_t>(times[i] * cfg.grid_size);
            at_time[i].add(path.values[k]);
        }
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double s = times[i];
        const double target_mean = 2.0 * s;
        const double target_var = 1.0 * 2.0 * s * s / 2.0;
        CHECK(std::abs(at_time[i].mean() - target_mean) <=
              4.0 * at_time[i].stderr_mean());
        const double var_se =
            at_time[i].variance() * std::sqrt(2.0 / static_cast<double>(reps - 1));
        // Euler bias at this grid is well under the Monte Carlo band
        CHECK(std::abs(at_time[i].variance() - target_var) <=
              4.0 * var_se + 0.01 * target_var);
    }
}

// ===========================================================================
// Functionals
// ===========================================================================

TEST_CASE("zero-volatility functionals match the closed forms") {
    const CirConfig cfg{2.0, 0.0, 10000};
    const CirPath path = simulate_cir(cfg, {1, 0});
    const LimitFunctionals f = limit_functionals(path, cfg);
    const double tol = 3.0 / static_cast<double>(cfg.grid_size); // O(dt) quadrature
    CHECK(f.int_Y_over_s == doctest::Approx(2.0).epsilon(tol));
    CHECK(f.int_Y2_over_s == doctest::Approx(2.0).epsilon(tol));  // mu0^2/2
    CHECK(f.int_Y == doctest::Approx(1.0).epsilon(tol));          // mu0/2
    CHECK(f.int_Y2 == doctest::Approx(4.0 / 3.0).epsilon(tol));   // mu0^2/3
    CHECK(f.stoch_int_Y32 == 0.0);
    CHECK(f.stoch_int_sqrtY == 0.0);
    CHECK(f.z_gauss == 0.0); // N(0, 0)
}

TEST_CASE("mean of int Y/s ds is mu0 and z_gauss is independent of the path") {
    const CirConfig cfg{2.0, 1.0, 500};
    const std::size_t reps = 8000;
    RunningMoments mean_int;
    std::vector<double> zs(reps), ints(reps), int2s(reps), stochs(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        const CirPath path = simulate_cir(cfg, {23, r});
        const LimitFunctionals f = limit_functionals(path, cfg);
        mean_int.add(f.int_Y_over_s);
        zs[r] = f.z_gauss;
        ints[r] = f.int_Y_over_s;
        int2s[r] = f.int_Y2_over_s;
        stochs[r] = f.stoch_int_Y32;
    }
    CHECK(std::abs(mean_int.mean() - 2.0) <= 3.0 * mean_int.stderr_mean());

    const double corr_bound = 4.0 / std::sqrt(static_cast<double>(reps));
    CHECK(std::abs(correlation(zs, ints)) < corr_bound);
    CHECK(std::abs(correlation(zs, int2s)) < corr_bound);
    CHECK(std::abs(correlation(zs, stochs)) < corr_bound);

    // z_gauss has the advertised variance
    RunningMoments mz;
    for (double z : zs) mz.add(z);
    const double var_se = mz.variance() * std::sqrt(2.0 / static_cast<double>(reps));
    CHECK(std::abs(mz.variance() - 2.0) <= 4.0 * var_se);
}

TEST_CASE("halving the grid step moves functional means by less than one se") {
    const std::size_t reps = 4000;
    auto mean_funcs = [&](std::size_t grid, std::uint64_t master) {
        const CirConfig cfg{2.0, 1.0, grid};
        std::vector<RunningMoments> m(4);
        for (std::size_t r = 0; r < reps; ++r) {
            const LimitFunctionals f =
                limit_functionals(simulate_cir(cfg, {master, r}), cfg);
            m[0].add(f.int_Y_over_s);
            m[1].add(f.int_Y2_over_s);
            m[2].add(f.int_Y);
            m[3].add(f.stoch_int_sqrtY);
        }
        return m;
    };
    const auto coarse = mean_funcs(512, 31);
    const auto fine = mean_funcs(1024, 32);
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        const double se = std::hypot(coarse[i].stderr_mean(), fine[i].stderr_mean());
        CHECK(std::abs(coarse[i].mean() - fine[i].mean()) < se);
    }
}

// ===========================================================================
// Limit-law sampling
// ===========================================================================

TEST_CASE("MuGauss draws have variance sigma0^2 mu0") {
    const CirConfig cfg{2.0, 1.0, 100};
    const LimitSample s = sample_limit_law(LimitLaw::MuGauss, cfg, 20000, {41, 0});
    RunningMoments m;
    for (double v : s.values) m.add(v);
    const double var_se =
        m.variance() * std::sqrt(2.0 / static_cast<double>(s.values.size()));
    CHECK(std::abs(m.mean()) <= 3.0 * m.stderr_mean());
    CHECK(std::abs(m.variance() - 2.0) <= 3.0 * var_se);
    CHECK(s.rejected == 0);
}

TEST_CASE("WlsSlope draws center at zero") {
    const CirConfig cfg{2.0, 1.0, 1000};
    const LimitSample s = sample_limit_law(LimitLaw::WlsSlope, cfg, 4000, {42, 0});
    RunningMoments m;
    for (double v : s.values) m.add(v);
    CHECK(std::abs(m.mean()) <= 4.0 * m.stderr_mean());
}

TEST_CASE("limit sampling is reproducible and worker-independent") {
    const CirConfig cfg{2.0, 1.0, 300};
    const LimitSample a =
        sample_limit_law(LimitLaw::OlsPair, cfg, 500, {43, 0}, /*workers=*/1);
    const LimitSample b =
        sample_limit_law(LimitLaw::OlsPair, cfg, 500, {43, 0}, /*workers=*/4);
    CHECK(a.values == b.values);
    CHECK(a.values2 == b.values2);
}

TEST_CASE("OlsPair intercept component matches discrete OLS at n = 10^4") {
    // Two-sample KS between mu_hat - mu0 on simulated unit-root paths and
    // the Theorem-3 limit draws.
    const double mu0 = 2.0;
    const ModelSpec spec = ModelSpec::poisson_inarch(mu0);
    const std::size_t reps = 2000;

    std::vector<double> discrete(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        const CountPath path = simulate_path(spec, 10000, {44, r});
        discrete[r] = fit(path, WeightScheme::ols()).mu_hat - mu0;
    }

    const CirConfig cfg{mu0, 1.0, 2048};
    const LimitSample limit =
        sample_limit_law(LimitLaw::OlsPair, cfg, reps, {45, 0}, /*workers=*/2);

    CHECK(ks_statistic_two_sample(discrete, limit.values2) < 0.05);
}
