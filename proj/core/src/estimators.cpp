#include "igw/estimators.hpp"

#include "igw/errors.hpp"
#include "igw/parallel.hpp"
#include "igw/stats.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace igw {

namespace {

constexpr double kMaxCondition = 1e12;

} // namespace

// ---------------------------------------------------------------------------
// WeightScheme
// ---------------------------------------------------------------------------

WeightScheme WeightScheme::custom(std::vector<double> weights) {
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw ConfigError("custom weights must be strictly positive and finite");
        }
    }
    WeightScheme s(WeightKind::Custom);
    s.weights_ = std::move(weights);
    return s;
}

double WeightScheme::weight(std::size_t t, std::int64_t x_prev) const {
    switch (kind_) {
    case WeightKind::Ols: return 1.0;
    case WeightKind::WeiWinnicki:
        return 1.0 / (1.0 + static_cast<double>(x_prev));
    case WeightKind::ReciprocalT:
        return 1.0 / static_cast<double>(t);
    case WeightKind::Custom:
        return weights_.at(t - 1);
    }
    return 1.0;
}

std::string WeightScheme::name() const {
    switch (kind_) {
    case WeightKind::Ols: return "ols";
    case WeightKind::WeiWinnicki: return "wei";
    case WeightKind::ReciprocalT: return "recip-t";
    case WeightKind::Custom: return "custom";
    }
    return "?";
}

double GramMatrix::condition() const noexcept {
    // Eigenvalues of [[sxx, sx], [sx, sw]].
    const double tr = sxx + sw;
    const double disc = std::sqrt((sxx - sw) * (sxx - sw) + 4.0 * sx * sx);
    const double lo = 0.5 * (tr - disc);
    const double hi = 0.5 * (tr + disc);
    if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
    return hi / lo;
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

namespace {

struct WeightedSums {
    GramMatrix gram;
    double sxy = 0.0; // sum w_t X_{t-1} X_t
    double sy = 0.0;  // sum w_t X_t
};

WeightedSums accumulate_sums(const CountPath& path, const WeightScheme& scheme) {
    const std::size_t n = path.n();
    CompensatedSum sw, sx, sxx, sy, sxy;
    for (std::size_t t = 1; t <= n; ++t) {
        const double x = static_cast<double>(path.values[t - 1]);
        const double y = static_cast<double>(path.values[t]);
        const double w = scheme.weight(t, path.values[t - 1]);
        sw.add(w);
        sx.add(w * x);
        sxx.add(w * x * x);
        sy.add(w * y);
        sxy.add(w * x * y);
    }
    WeightedSums out;
    out.gram = {sxx.value(), sx.value(), sw.value()};
    out.sxy = sxy.value();
    out.sy = sy.value();
    return out;
}

void check_fit_preconditions(const CountPath& path, const WeightScheme& scheme) {
    if (path.n() < 2) throw ConfigError("fit: need a path of length n >= 2");
    if (scheme.kind() == WeightKind::Custom &&
        scheme.custom_weights().size() != path.n()) {
        std::ostringstream msg;
        msg << "fit: custom weights length " << scheme.custom_weights().size()
            << " does not match sample size " << path.n();
        throw ConfigError(msg.str());
    }
}

void check_conditioning(const GramMatrix& gram) {
    const double cond = gram.condition();
    if (!(cond <= kMaxCondition)) {
        std::ostringstream msg;
        msg << "degenerate design: weighted normal equations have condition number "
            << cond << " (constant path?)";
        throw DegenerateDesignError(msg.str());
    }
}

} // namespace

Estimate fit(const CountPath& path, const WeightScheme& scheme) {
    check_fit_preconditions(path, scheme);

    const WeightedSums s = accumulate_sums(path, scheme);
    check_conditioning(s.gram);

    const double det = s.gram.determinant();
    const double m_hat = (s.gram.sw * s.sxy - s.gram.sx * s.sy) / det;
    const double mu_hat = (s.gram.sxx * s.sy - s.gram.sx * s.sxy) / det;

    Estimate est;
    est.m_hat = m_hat;
    est.mu_hat = mu_hat;
    est.scheme = scheme;
    est.gram = s.gram;
    est.n = path.n();

    // Orthogonality byproducts at the fitted values.
    CompensatedSum rx, r;
    for (std::size_t t = 1; t <= path.n(); ++t) {
        const double x = static_cast<double>(path.values[t - 1]);
        const double y = static_cast<double>(path.values[t]);
        const double w = scheme.weight(t, path.values[t - 1]);
        const double res = y - m_hat * x - mu_hat;
        rx.add(w * x * res);
        r.add(w * res);
    }
    est.rhs = {rx.value(), r.value()};
    return est;
}

ResidualSeries residuals(const CountPath& path, double mu) {
    if (path.n() < 1) throw ConfigError("residuals: need a path of length n >= 1");
    ResidualSeries out;
    out.mu_used = mu;
    out.values.reserve(path.n());
    for (std::size_t t = 1; t <= path.n(); ++t) {
        out.values.push_back(static_cast<double>(path.values[t]) -
                             static_cast<double>(path.values[t - 1]) - mu);
    }
    return out;
}

double estimate_sigma2(const CountPath& path, double mu_tilde) {
    if (path.n() < 2) throw ConfigError("estimate_sigma2: need n >= 2");
    CompensatedSum num;
    std::int64_t denom = 0;
    for (std::size_t t = 1; t <= path.n(); ++t) {
        const double w = static_cast<double>(path.values[t]) -
                         static_cast<double>(path.values[t - 1]) - mu_tilde;
        num.add(w * w);
        denom += path.values[t - 1];
    }
    if (denom <= 0) {
        throw DegeneratePathError(
            "estimate_sigma2: sum of X_{t-1} is zero (all-zero path)");
    }
    return std::max(0.0, num.value() / static_cast<double>(denom));
}

TauEstimate estimate_tau(const CountPath& path) {
    const Estimate wls = fit(path, WeightScheme::reciprocal_t());
    const double sigma2 = estimate_sigma2(path, wls.mu_hat);
    if (!(sigma2 > 0.0)) {
        throw TauUndefinedError("estimate_tau: sigma2_hat = 0, tau undefined");
    }
    TauEstimate tau;
    tau.sigma2_hat = sigma2;
    tau.mu_tilde = wls.mu_hat;
    tau.tau_hat = 2.0 * wls.mu_hat / sigma2;
    tau.transient = tau.tau_hat > 1.0;
    return tau;
}

AdaptiveFit adaptive_fit(const CountPath& path) {
    AdaptiveFit out;
    out.tau = estimate_tau(path);
    if (out.tau.transient) {
        out.chosen = AdaptiveChoice::WeiWinnicki;
        out.estimate = fit(path, WeightScheme::wei_winnicki());
    } else {
        out.chosen = AdaptiveChoice::ReciprocalT;
        out.estimate = fit(path, WeightScheme::reciprocal_t());
    }
    return out;
}

BiasCorrection bias_correct(const CountPath& path, const ModelSpec& family,
                            std::size_t replications, SeedRecord seed,
                            unsigned workers) {
    if (replications < 1) throw ConfigError("bias_correct: need replications >= 1");

    const Estimate raw = fit(path, WeightScheme::reciprocal_t());
    if (!(raw.mu_hat > 0.0)) {
        std::ostringstream msg;
        msg << "bias_correct: fitted mu_tilde = " << raw.mu_hat
            << " is not positive; cannot parameterize the bootstrap family";
        throw DomainError(msg.str());
    }
    const ModelSpec boot = family.with_immigration_mean(raw.mu_hat);

    std::vector<double> refits(replications,
                               std::numeric_limits<double>::quiet_NaN());
    parallel_for_index(replications, workers, [&](std::size_t r) {
        const CountPath sim = simulate_path(
            boot, path.n(), SeedRecord{seed.master, seed.stream + r});
        try {
            refits[r] = fit(sim, WeightScheme::reciprocal_t()).mu_hat;
        } catch (const DomainError&) {
            // left as NaN; counted below
        }
    });

    RunningMoments mean;
    std::size_t failures = 0;
    for (double v : refits) {
        if (std::isnan(v)) {
            ++failures;
        } else {
            mean.add(v);
        }
    }
    if (mean.count() == 0) {
        throw DomainError("bias_correct: every bootstrap replication failed");
    }

    BiasCorrection out;
    out.mu_raw = raw.mu_hat;
    out.bootstrap_bias = mean.mean() - raw.mu_hat;
    out.mu_corrected = raw.mu_hat - out.bootstrap_bias;
    out.replications = replications;
    out.failures = failures;
    out.unstable = replications < 100;
    return out;
}

std::array<double, 2> decompose_error(const CountPath& path,
                                      const WeightScheme& scheme, double m_ref,
                                      double mu_ref) {
    check_fit_preconditions(path, scheme);

    const WeightedSums s = accumulate_sums(path, scheme);
    check_conditioning(s.gram);

    // Right-hand side with residuals at the reference parameters.
    CompensatedSum dx, d;
    for (std::size_t t = 1; t <= path.n(); ++t) {
        const double x = static_cast<double>(path.values[t - 1]);
        const double w = scheme.weight(t, path.values[t - 1]);
        const double res = static_cast<double>(path.values[t]) - m_ref * x - mu_ref;
        dx.add(w * x * res);
        d.add(w * res);
    }

    const double det = s.gram.determinant();
    return {(s.gram.sw * dx.value() - s.gram.sx * d.value()) / det,
            (s.gram.sxx * d.value() - s.gram.sx * dx.value()) / det};
}

} // namespace igw
