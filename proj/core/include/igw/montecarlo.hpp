#pragma once

#include "igw/cir.hpp"
#include "igw/estimators.hpp"
#include "igw/model.hpp"
#include "igw/stats.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace igw {

// ===========================================================================
// Replication engine: reproduces the paper-scale finite-sample experiments
// (estimator histograms, the WLS sample-mean table) and checks the limit
// theorems against the CIR module numerically.
//
// Replications are independent seeded streams, so results are bit-identical
// for a given configuration regardless of worker count.
// ===========================================================================

struct ExperimentConfig {
    ModelSpec spec;
    std::size_t n = 100;          // path length (sample size)
    std::size_t replications = 5000;
    std::vector<WeightScheme> schemes;
    std::uint64_t master_seed = 0;
    /// Number of histogram bins; 0 selects the Freedman-Diaconis width on
    /// the sample pooled across estimators. Explicit values must be >= 2.
    std::size_t histogram_bins = 0;

    void validate() const; // throws ConfigError
};

/// Per-estimator replication statistics. Sample moments are over successful
/// fits only; histogram edges are shared across estimators of one run.
struct EstimatorSummary {
    std::string scheme;
    double sample_mean = 0.0;
    double sample_variance = 0.0;
    Histogram histogram;
    std::size_t failure_count = 0;
};

struct MCSummary {
    std::vector<EstimatorSummary> estimators;
    ExperimentConfig config;
    /// Wall-clock time of the run. Not part of the serialized artifact
    /// (outputs stay byte-identical across runs and worker counts).
    double wall_seconds = 0.0;
};

/// Simulates cfg.replications paths, fits every requested scheme on each and
/// aggregates the intercept estimates. Per-replication fit failures are
/// counted, never fatal.
MCSummary run_experiment(const ExperimentConfig& cfg, unsigned workers = 1);

/// The WLS sample-mean table: replication means of the 1/t-WLS intercept for
/// the conditionally-Poisson model over mu0 x n, B replications each.
struct WlsMeanTable {
    std::vector<double> mu0_values;   // columns
    std::vector<std::size_t> n_values;// rows
    std::vector<std::vector<double>> means; // means[row][col]
    std::size_t replications = 0;
    std::uint64_t master_seed = 0;
};

WlsMeanTable reproduce_table1(std::uint64_t master_seed, unsigned workers = 1);

/// One line of a Monte-Carlo-vs-target comparison, mechanical enough to
/// assert on: pass is evaluated against the stated tolerance, and stderr
/// carries the Monte Carlo standard error where one exists (0 otherwise).
struct ComparisonRecord {
    std::string statistic;
    double empirical = 0.0;
    double target = 0.0;
    double stderr_mc = 0.0;
    bool pass = false;
};

/// Central limit check for the 1/t-WLS intercept: distribution of
/// sqrt(ln n)(mu_tilde - mu0) across replications against N(0, sigma0^2 mu0).
struct CltReport {
    double empirical_sd = 0.0;
    double target_sd = 0.0; // sigma0 sqrt(mu0)
    double ks_stat = 0.0;
    std::size_t replications = 0;
    std::size_t failures = 0;
};

/// Requires an integrated spec (m = 1) with sigma^2 > 0; throws DomainError
/// otherwise (the deterministic fixture has no CLT).
CltReport verify_clt(const ModelSpec& spec, std::size_t n, std::size_t replications,
                     std::uint64_t master_seed, unsigned workers = 1);

/// Distributional check of the four normalized statistics
///   a) (1/n)      sum X_{t-1}/t      vs  int Y_s/s ds
///   b) (1/n^2)    sum X_{t-1}^2/t    vs  int Y_s^2/s ds
///   c) (1/n)      sum W_t X_{t-1}/t  vs  sigma0 int Y^{3/2}/s dB
///   d) (1/sqrt(ln n)) sum W_t/t      vs  N(0, sigma0^2 mu0)
/// via two-sample Kolmogorov-Smirnov against limit draws from the CIR
/// module, plus the asymptotic-independence check: the correlation between
/// statistics d) and a) across replications.
struct Theorem1Options {
    std::size_t limit_draws = 2000;
    std::size_t grid_size = 10000;
    double ks_threshold = 0.08;   // pass bound for each KS record
    double corr_threshold = 0.1;  // pass bound for the decoupling record
};
std::vector<ComparisonRecord> verify_theorem1_sums(const ModelSpec& spec,
                                                   std::size_t n,
                                                   std::size_t replications,
                                                   std::uint64_t master_seed,
                                                   const Theorem1Options& opt = {},
                                                   unsigned workers = 1);

/// Stationary-case rates on a single long path (m < 1):
///   (1/ln n) sum X_{t-1}/t   -> stationary mean     (within 10%)
///   (1/ln n) sum X_{t-1}^2/t -> stationary 2nd mom. (within 15%)
std::vector<ComparisonRecord> verify_stationary(const ModelSpec& spec, std::size_t n,
                                                std::uint64_t master_seed);

} // namespace igw
