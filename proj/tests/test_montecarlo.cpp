#include "igw/montecarlo.hpp"

#include "igw/errors.hpp"
#include "igw/io.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace igw;

namespace {

const ModelSpec kInarch2 = ModelSpec::poisson_inarch(2.0);

/// Approximate quantile from histogram counts (piecewise-uniform bins).
double histogram_quantile(const Histogram& h, double p) {
    const double total = static_cast<double>(h.total());
    double cum = 0.0;
    for (std::size_t k = 0; k < h.counts.size(); ++k) {
        const double next = cum + static_cast<double>(h.counts[k]);
        if (next >= p * total) {
            const double frac =
                (p * total - cum) / std::max(1.0, static_cast<double>(h.counts[k]));
            return h.edges[k] + frac * (h.edges[k + 1] - h.edges[k]);
        }
        cum = next;
    }
    return h.edges.back();
}

} // namespace

TEST_CASE("experiment on the exact fixture is degenerate at (1, mu)") {
    ExperimentConfig cfg{{OffspringDist::dirac(1), ImmigrationDist::dirac(2)},
                         50,
                         200,
                         {WeightScheme::ols(), WeightScheme::wei_winnicki(),
                          WeightScheme::reciprocal_t()},
                         7};
    const MCSummary summary = run_experiment(cfg, 2);
    for (const auto& est : summary.estimators) {
        CHECK(est.sample_mean == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(est.sample_variance == doctest::Approx(0.0));
        CHECK(est.failure_count == 0);
        CHECK(est.histogram.total() == 200);
    }
}

TEST_CASE("experiment output is identical across worker counts") {
    ExperimentConfig cfg{kInarch2, 100, 400,
                         {WeightScheme::ols(), WeightScheme::reciprocal_t()},
                         99};
    const MCSummary a = run_experiment(cfg, 1);
    const MCSummary b = run_experiment(cfg, 4);
    CHECK(mc_summary_to_json(a) == mc_summary_to_json(b));
}

TEST_CASE("moderate-size run approaches the reported summary statistics") {
    // Loose bands at B = 1200; the acceptance suite pins the B = 5000 values.
    ExperimentConfig cfg{kInarch2, 100, 1200,
                         {WeightScheme::ols(), WeightScheme::reciprocal_t()},
                         2024};
    const MCSummary summary = run_experiment(cfg, 2);
    const auto& ols = summary.estimators[0];
    const auto& wls = summary.estimators[1];
    CHECK(ols.scheme == "ols");
    CHECK(wls.scheme == "recip-t");
    CHECK(ols.sample_mean == doctest::Approx(3.23).epsilon(0.08));
    CHECK(wls.sample_mean == doctest::Approx(1.65).epsilon(0.05));
    CHECK(wls.sample_variance < ols.sample_variance);
}

TEST_CASE("WLS histogram is narrower than the OLS histogram") {
    ExperimentConfig cfg{kInarch2, 100, 1500,
                         {WeightScheme::ols(), WeightScheme::reciprocal_t()},
                         11, /*histogram_bins=*/80};
    const MCSummary summary = run_experiment(cfg, 2);
    const Histogram& ols = summary.estimators[0].histogram;
    const Histogram& wls = summary.estimators[1].histogram;
    CHECK(ols.edges == wls.edges); // shared panel edges
    const double ols_iqr =
        histogram_quantile(ols, 0.75) - histogram_quantile(ols, 0.25);
    const double wls_iqr =
        histogram_quantile(wls, 0.75) - histogram_quantile(wls, 0.25);
    CHECK(wls_iqr < ols_iqr);
}

TEST_CASE("experiment config validation") {
    ExperimentConfig cfg{kInarch2, 100, 100, {WeightScheme::ols()}, 1};
    cfg.replications = 0;
    CHECK_THROWS_AS(run_experiment(cfg, 1), ConfigError);
    cfg.replications = 10;
    cfg.schemes.clear();
    CHECK_THROWS_AS(run_experiment(cfg, 1), ConfigError);
    cfg.schemes = {WeightScheme::ols()};
    cfg.histogram_bins = 1;
    CHECK_THROWS_AS(run_experiment(cfg, 1), ConfigError);
}

TEST_CASE("clt check rejects inapplicable specs") {
    CHECK_THROWS_AS(verify_clt({OffspringDist::dirac(1), ImmigrationDist::dirac(2)},
                               1000, 100, 1),
                    DomainError);
    CHECK_THROWS_AS(verify_clt({OffspringDist::bernoulli(0.5),
                                ImmigrationDist::poisson(2.0)},
                               1000, 100, 1),
                    DomainError); // m != 1
}

TEST_CASE("clt check is sane at desk scale") {
    const CltReport report = verify_clt(kInarch2, 5000, 400, 77, 2);
    CHECK(report.target_sd == doctest::Approx(std::sqrt(2.0)));
    CHECK(report.failures == 0);
    CHECK(report.empirical_sd > 0.5 * report.target_sd);
    CHECK(report.empirical_sd < 2.0 * report.target_sd);
    CHECK(report.ks_stat < 0.25);
}

TEST_CASE("theorem 1 records at desk scale") {
    Theorem1Options opt;
    opt.limit_draws = 600;
    opt.grid_size = 2000;
    opt.ks_threshold = 0.12;   // small-n slack; acceptance pins 0.08 at n=10^4
    opt.corr_threshold = 0.15;
    const auto records = verify_theorem1_sums(kInarch2, 2000, 600, 5, opt, 2);

    REQUIRE(records.size() == 7);
    CHECK(records[0].statistic == "theorem1_a_mean");
    CHECK(records[0].pass);
    for (const auto& rec : records) {
        INFO(rec.statistic, " empirical=", rec.empirical, " target=", rec.target);
        CHECK(rec.pass);
    }
}

TEST_CASE("stationary rates on a long path") {
    const ModelSpec spec{OffspringDist::bernoulli(0.5),
                         ImmigrationDist::poisson(2.0)};
    const auto records = verify_stationary(spec, 100000, 123);
    REQUIRE(records.size() == 2);
    CHECK(records[0].target == doctest::Approx(4.0));
    CHECK(records[1].target == doctest::Approx(20.0));
    CHECK(records[0].pass);
    CHECK(records[1].pass);

    // m = 0: i.i.d. immigration, the ln-weighted mean goes to mu
    const ModelSpec iid{OffspringDist::poisson(0.0), ImmigrationDist::poisson(3.0)};
    const auto iid_records = verify_stationary(iid, 100000, 124);
    CHECK(iid_records[0].target == doctest::Approx(3.0));
    CHECK(iid_records[0].pass);
}

TEST_CASE("stationary verification requires m < 1") {
    CHECK_THROWS_AS(verify_stationary(kInarch2, 1000, 1), DomainError);
}

TEST_CASE("table CSV layout") {
    WlsMeanTable table;
    table.mu0_values = {0.4, 2.0};
    table.n_values = {100};
    table.means = {{0.45, 1.66}};
    std::ostringstream os;
    write_table1_csv(os, table);
    CHECK(os.str() == "mu0,n,wls_mean\n0.4,100,0.45\n2,100,1.66\n");
}
