#include "igw/model.hpp"

#include "igw/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace igw {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

bool is_integral_value(double x) {
    return std::abs(x - std::round(x)) <= 1e-9 * std::max(1.0, std::abs(x));
}

} // namespace

// ---------------------------------------------------------------------------
// OffspringDist
// ---------------------------------------------------------------------------

OffspringDist OffspringDist::poisson(double mean) {
    require(mean >= 0.0 && std::isfinite(mean), "offspring poisson: mean must be >= 0");
    return {OffspringKind::Poisson, mean, 0};
}

OffspringDist OffspringDist::geometric(double mean) {
    require(mean >= 0.0 && std::isfinite(mean), "offspring geometric: mean must be >= 0");
    return {OffspringKind::Geometric, mean, 0};
}

OffspringDist OffspringDist::bernoulli(double mean) {
    require(mean >= 0.0 && mean <= 1.0, "offspring bernoulli: mean must be in [0, 1]");
    return {OffspringKind::Bernoulli, mean, 0};
}

OffspringDist OffspringDist::dirac(std::int64_t value) {
    require(value >= 0, "offspring dirac: value must be >= 0");
    return {OffspringKind::Dirac, static_cast<double>(value), value};
}

double OffspringDist::variance() const noexcept {
    switch (kind_) {
    case OffspringKind::Poisson: return mean_;
    case OffspringKind::Geometric: return mean_ * (1.0 + mean_);
    case OffspringKind::Bernoulli: return mean_ * (1.0 - mean_);
    case OffspringKind::Dirac: return 0.0;
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// ImmigrationDist
// ---------------------------------------------------------------------------

ImmigrationDist ImmigrationDist::poisson(double mean) {
    require(mean > 0.0 && std::isfinite(mean), "immigration poisson: mean must be > 0");
    return {ImmigrationKind::Poisson, mean, 0.0, 0};
}

ImmigrationDist ImmigrationDist::negative_binomial(double mean, double dispersion) {
    require(mean > 0.0 && std::isfinite(mean),
            "immigration negative-binomial: mean must be > 0");
    require(dispersion > 0.0 && std::isfinite(dispersion),
            "immigration negative-binomial: dispersion must be > 0");
    return {ImmigrationKind::NegativeBinomial, mean, dispersion, 0};
}

ImmigrationDist ImmigrationDist::dirac(std::int64_t value) {
    // Dirac immigration is a test fixture; value 0 would freeze the process
    // at zero forever, so keep mu > 0 here as well.
    require(value > 0, "immigration dirac: value must be > 0");
    return {ImmigrationKind::Dirac, static_cast<double>(value), 0.0, value};
}

double ImmigrationDist::variance() const noexcept {
    switch (kind_) {
    case ImmigrationKind::Poisson: return mean_;
    case ImmigrationKind::NegativeBinomial:
        return mean_ * (1.0 + mean_ / dispersion_);
    case ImmigrationKind::Dirac: return 0.0;
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// ModelSpec
// ---------------------------------------------------------------------------

ModelSpec::ModelSpec(OffspringDist offspring, ImmigrationDist immigration)
    : offspring_(offspring), immigration_(immigration) {}

std::vector<std::string> ModelSpec::warnings() const {
    std::vector<std::string> out;
    if (m() == 1.0 && sigma2() == 0.0) {
        out.push_back("offspring has m = 1 with sigma^2 = 0 (deterministic unit "
                      "root); outside the model assumptions, fixture use only");
    }
    if (b() == 0.0) {
        out.push_back("immigration variance b = 0 (Dirac fixture); outside the "
                      "model assumptions, fixture use only");
    }
    return out;
}

ModelSpec ModelSpec::with_immigration_mean(double mu) const {
    require(mu > 0.0 && std::isfinite(mu), "with_immigration_mean: mu must be > 0");
    switch (immigration_.kind()) {
    case ImmigrationKind::Poisson:
        return {offspring_, ImmigrationDist::poisson(mu)};
    case ImmigrationKind::NegativeBinomial:
        return {offspring_,
                ImmigrationDist::negative_binomial(mu, immigration_.dispersion())};
    case ImmigrationKind::Dirac: {
        require(is_integral_value(mu),
                "with_immigration_mean: Dirac immigration needs an integral mean");
        return {offspring_,
                ImmigrationDist::dirac(static_cast<std::int64_t>(std::llround(mu)))};
    }
    }
    throw ConfigError("with_immigration_mean: unknown immigration kind");
}

ModelSpec ModelSpec::poisson_inarch(double mu) {
    return {OffspringDist::poisson(1.0), ImmigrationDist::poisson(mu)};
}

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

namespace {

std::int64_t draw_poisson(std::mt19937_64& gen, double mean) {
    if (mean <= 0.0) return 0;
    return std::poisson_distribution<std::int64_t>(mean)(gen);
}

/// NB(shape, scale) as a Poisson-Gamma mixture: lambda ~ Gamma(shape, scale),
/// then Poisson(lambda). Handles non-integer shape.
std::int64_t draw_negative_binomial(std::mt19937_64& gen, double shape, double scale) {
    if (shape <= 0.0 || scale <= 0.0) return 0;
    const double lambda = std::gamma_distribution<double>(shape, scale)(gen);
    return draw_poisson(gen, lambda);
}

/// Sum of `count` i.i.d. offspring draws via the law's additive closure.
std::int64_t draw_offspring_sum(std::mt19937_64& gen, const OffspringDist& z,
                                std::int64_t count) {
    if (count <= 0) return 0;
    switch (z.kind()) {
    case OffspringKind::Poisson:
        return draw_poisson(gen, z.mean() * static_cast<double>(count));
    case OffspringKind::Geometric:
        // Sum of x geometric(p) failure counts is NB(x, p); as a mixture the
        // gamma scale is (1-p)/p = m.
        return draw_negative_binomial(gen, static_cast<double>(count), z.mean());
    case OffspringKind::Bernoulli:
        if (z.mean() <= 0.0) return 0;
        if (z.mean() >= 1.0) return count;
        return std::binomial_distribution<std::int64_t>(count, z.mean())(gen);
    case OffspringKind::Dirac:
        return z.dirac_value() * count;
    }
    return 0;
}

std::int64_t draw_immigration(std::mt19937_64& gen, const ImmigrationDist& eps) {
    switch (eps.kind()) {
    case ImmigrationKind::Poisson:
        return draw_poisson(gen, eps.mean());
    case ImmigrationKind::NegativeBinomial:
        return draw_negative_binomial(gen, eps.dispersion(),
                                      eps.mean() / eps.dispersion());
    case ImmigrationKind::Dirac:
        return eps.dirac_value();
    }
    return 0;
}

} // namespace

CountPath simulate_path(const ModelSpec& spec, std::size_t n, SeedRecord seed) {
    require(n >= 1, "simulate_path: n must be >= 1");

    CountPath path;
    path.seed = seed;
    path.values.resize(n + 1);
    path.values[0] = 0;

    Rng rng(seed);
    auto& gen = rng.engine();

    // Poisson/Poisson closes over the whole step: offspring Poisson(m*x)
    // plus immigration Poisson(mu) is one Poisson(m*x + mu) draw.
    const bool poisson_step = spec.offspring().kind() == OffspringKind::Poisson &&
                              spec.immigration().kind() == ImmigrationKind::Poisson;

    std::int64_t x = 0;
    for (std::size_t t = 1; t <= n; ++t) {
        if (poisson_step) {
            x = draw_poisson(gen, spec.m() * static_cast<double>(x) + spec.mu());
        } else {
            x = draw_offspring_sum(gen, spec.offspring(), x) +
                draw_immigration(gen, spec.immigration());
        }
        path.values[t] = x;
    }
    return path;
}

ConditionalMoments conditional_moments(const ModelSpec& spec, std::int64_t x_prev) {
    const double x = static_cast<double>(x_prev);
    return {spec.m() * x + spec.mu(), spec.sigma2() * x + spec.b()};
}

StationaryMoments stationary_moments(const ModelSpec& spec) {
    const double m = spec.m();
    if (!(m < 1.0)) {
        std::ostringstream msg;
        msg << "stationary_moments: no stationary law for m = " << m << " (need m < 1)";
        throw DomainError(msg.str());
    }
    const double mean = spec.mu() / (1.0 - m);
    const double second =
        mean * mean + (spec.sigma2() * mean + spec.b()) / (1.0 - m * m);
    return {mean, second};
}

} // namespace igw
