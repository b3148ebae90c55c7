#pragma once

#include "igw/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace igw {

// ===========================================================================
// The data-generating process:
//
//   X_0 = 0,   X_t = sum_{i=1}^{X_{t-1}} Z_{i,t} + eps_t,
//
// with i.i.d. offspring Z (mean m, variance sigma^2) and i.i.d. immigration
// eps (mean mu > 0, variance b), independent of the offspring. The process
// is integrated (has a unit root) when m = 1.
// ===========================================================================

enum class OffspringKind { Poisson, Geometric, Bernoulli, Dirac };
enum class ImmigrationKind { Poisson, NegativeBinomial, Dirac };

/// Offspring law. Geometric means "failures before the first success" on
/// {0,1,2,...}; mean m corresponds to success probability 1/(1+m).
class OffspringDist {
public:
    static OffspringDist poisson(double mean);
    static OffspringDist geometric(double mean);
    static OffspringDist bernoulli(double mean); // requires mean <= 1
    static OffspringDist dirac(std::int64_t value);

    OffspringKind kind() const noexcept { return kind_; }
    double mean() const noexcept { return mean_; }
    /// Analytic variance: Poisson m, Geometric m(1+m), Bernoulli m(1-m), Dirac 0.
    double variance() const noexcept;
    /// Integer value for a Dirac law.
    std::int64_t dirac_value() const noexcept { return dirac_value_; }

private:
    OffspringDist(OffspringKind kind, double mean, std::int64_t value)
        : kind_(kind), mean_(mean), dirac_value_(value) {}

    OffspringKind kind_;
    double mean_;
    std::int64_t dirac_value_ = 0;
};

/// Immigration law. NegativeBinomial uses the (mean, dispersion) form:
/// variance mu(1 + mu/dispersion).
class ImmigrationDist {
public:
    static ImmigrationDist poisson(double mean);
    static ImmigrationDist negative_binomial(double mean, double dispersion);
    static ImmigrationDist dirac(std::int64_t value);

    ImmigrationKind kind() const noexcept { return kind_; }
    double mean() const noexcept { return mean_; }
    double variance() const noexcept;
    double dispersion() const noexcept { return dispersion_; }
    std::int64_t dirac_value() const noexcept { return dirac_value_; }

private:
    ImmigrationDist(ImmigrationKind kind, double mean, double dispersion,
                    std::int64_t value)
        : kind_(kind), mean_(mean), dispersion_(dispersion), dirac_value_(value) {}

    ImmigrationKind kind_;
    double mean_;
    double dispersion_ = 0.0;
    std::int64_t dirac_value_ = 0;
};

/// The full data-generating law: an offspring/immigration pair exposing
/// (m, mu, sigma^2, b).
class ModelSpec {
public:
    ModelSpec(OffspringDist offspring, ImmigrationDist immigration);

    const OffspringDist& offspring() const noexcept { return offspring_; }
    const ImmigrationDist& immigration() const noexcept { return immigration_; }

    double m() const noexcept { return offspring_.mean(); }
    double mu() const noexcept { return immigration_.mean(); }
    double sigma2() const noexcept { return offspring_.variance(); }
    double b() const noexcept { return immigration_.variance(); }

    /// Unit-root regime: m = 1 (the paper additionally requires sigma^2 > 0).
    bool is_integrated() const noexcept { return m() == 1.0; }

    /// Non-fatal deviations from the paper's model assumptions, e.g. a
    /// Dirac(1) offspring fixture with sigma^2 = 0.
    std::vector<std::string> warnings() const;

    /// Same spec with the immigration mean replaced (used by the parametric
    /// bootstrap). For Dirac immigration the new mean must be integral.
    ModelSpec with_immigration_mean(double mu) const;

    /// Convenience: the conditionally-Poisson model X_t | X_{t-1} ~
    /// Poisson(X_{t-1} + mu), i.e. Poisson(1) offspring, Poisson(mu)
    /// immigration.
    static ModelSpec poisson_inarch(double mu);

private:
    OffspringDist offspring_;
    ImmigrationDist immigration_;
};

/// A simulated (or observed) count series X_0..X_n with its seed provenance.
struct CountPath {
    std::vector<std::int64_t> values; // X_0..X_n
    SeedRecord seed;

    /// Sample size n (number of transitions).
    std::size_t n() const noexcept { return values.empty() ? 0 : values.size() - 1; }
};

/// Simulates X_0..X_n from the spec. Deterministic given (spec, n, seed).
///
/// The offspring sum uses each law's additive closure (Poisson sum of x
/// draws is one Poisson(m*x) draw; geometric sums are negative binomial;
/// Bernoulli sums are binomial), so a step costs O(1) even though unit-root
/// paths grow linearly.
CountPath simulate_path(const ModelSpec& spec, std::size_t n, SeedRecord seed);

/// (m*x_prev + mu, sigma^2*x_prev + b): mean and variance of X_t | X_{t-1}.
struct ConditionalMoments {
    double mean;
    double variance;
};
ConditionalMoments conditional_moments(const ModelSpec& spec, std::int64_t x_prev);

/// Stationary mean mu/(1-m) and second moment
/// (mu/(1-m))^2 + (sigma^2 * mu/(1-m) + b) / (1-m^2). Requires m < 1.
struct StationaryMoments {
    double mean;
    double second_moment;
};
StationaryMoments stationary_moments(const ModelSpec& spec);

} // namespace igw
