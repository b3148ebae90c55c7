#pragma once

#include "igw/model.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace igw {

// ===========================================================================
// Least-squares estimators of (m, mu) from a count path, under three
// weighting schemes:
//
//   OLS           w_t = 1
//   Wei-Winnicki  w_t = 1/(1 + X_{t-1})
//   ReciprocalT   w_t = 1/t          (consistent for mu even when the chain
//                                     is null recurrent)
//
// Each fit minimizes  sum_t w_t (X_t - m X_{t-1} - mu)^2  exactly through
// the 2x2 normal equations.
// ===========================================================================

enum class WeightKind { Ols, WeiWinnicki, ReciprocalT, Custom };

/// Weighting scheme for the least-squares objective. Custom carries one
/// strictly positive weight per transition.
class WeightScheme {
public:
    static WeightScheme ols() { return WeightScheme(WeightKind::Ols); }
    static WeightScheme wei_winnicki() { return WeightScheme(WeightKind::WeiWinnicki); }
    static WeightScheme reciprocal_t() { return WeightScheme(WeightKind::ReciprocalT); }
    static WeightScheme custom(std::vector<double> weights);

    WeightKind kind() const noexcept { return kind_; }
    const std::vector<double>& custom_weights() const noexcept { return weights_; }

    /// Weight for transition t (1-based) given the previous value.
    double weight(std::size_t t, std::int64_t x_prev) const;

    /// Token used in serialized records: "ols", "wei", "recip-t", "custom".
    std::string name() const;

private:
    explicit WeightScheme(WeightKind kind) : kind_(kind) {}

    WeightKind kind_;
    std::vector<double> weights_;
};

/// The five weighted sums of the normal equations, in the order
/// [sum w x^2, sum w x; sum w x, sum w] with x = X_{t-1}.
struct GramMatrix {
    double sxx = 0.0; // sum w_t X_{t-1}^2
    double sx = 0.0;  // sum w_t X_{t-1}
    double sw = 0.0;  // sum w_t

    double determinant() const noexcept { return sxx * sw - sx * sx; }
    /// 2-norm condition number (symmetric PSD closed form).
    double condition() const noexcept;
};

/// A fitted (m, mu) pair with the weighted system that produced it.
struct Estimate {
    double m_hat = 0.0;
    double mu_hat = 0.0;
    WeightScheme scheme = WeightScheme::ols();
    GramMatrix gram;
    /// Normal-equation residual identities evaluated at the fitted values:
    /// {sum w_t X_{t-1} r_t, sum w_t r_t} with r_t = X_t - m_hat X_{t-1} -
    /// mu_hat. Both are zero up to rounding for any successful fit.
    std::array<double, 2> rhs{0.0, 0.0};
    std::size_t n = 0;
};

/// Martingale-difference residuals W_t = X_t - X_{t-1} - mu, t = 1..n.
struct ResidualSeries {
    std::vector<double> values;
    double mu_used = 0.0;
};

/// Plug-in nuisance estimates: sigma2_hat and tau_hat = 2*mu_tilde/sigma2_hat.
/// tau_hat > 1 flags a transient chain (Wei-Winnicki regime).
struct TauEstimate {
    double sigma2_hat = 0.0;
    double mu_tilde = 0.0;
    double tau_hat = 0.0;
    bool transient = false;
};

/// Exact weighted least-squares fit via the 2x2 normal equations.
///
/// The five weighted sums are accumulated with compensated summation
/// (they span several orders of magnitude on long unit-root paths).
/// Throws DegenerateDesignError when the gram matrix has condition number
/// above 1e12 (e.g. a constant path), ConfigError on mismatched custom
/// weights or n < 2.
Estimate fit(const CountPath& path, const WeightScheme& scheme);

/// W_t = X_t - X_{t-1} - mu for t = 1..n.
ResidualSeries residuals(const CountPath& path, double mu);

/// Ratio estimator sigma2_hat = sum (X_t - X_{t-1} - mu_tilde)^2 / sum X_{t-1},
/// clamped below at 0. Throws DegeneratePathError when sum X_{t-1} = 0.
double estimate_sigma2(const CountPath& path, double mu_tilde);

/// Fits mu_tilde with 1/t weights, estimates sigma^2, returns
/// tau_hat = 2*mu_tilde/sigma2_hat. Throws TauUndefinedError when
/// sigma2_hat = 0.
TauEstimate estimate_tau(const CountPath& path);

enum class AdaptiveChoice { WeiWinnicki, ReciprocalT };

/// Adaptive estimator selection: always computes the 1/t preliminary fit
/// and tau_hat; when tau_hat > 1 the chain is judged transient and the
/// Wei-Winnicki fit is returned as the improved estimate, otherwise the
/// 1/t fit stands.
struct AdaptiveFit {
    Estimate estimate;
    AdaptiveChoice chosen = AdaptiveChoice::ReciprocalT;
    TauEstimate tau;
};
AdaptiveFit adaptive_fit(const CountPath& path);

/// Parametric-bootstrap bias correction of mu_tilde.
///
/// Fits mu_tilde on the path, simulates `replications` paths of the same
/// length from `family` with immigration mean mu_tilde, re-estimates on
/// each, and subtracts the mean bootstrap bias:
/// corrected = mu_tilde - (mean(mu_tilde*) - mu_tilde).
struct BiasCorrection {
    double mu_raw = 0.0;
    double mu_corrected = 0.0;
    double bootstrap_bias = 0.0;
    std::size_t replications = 0;
    std::size_t failures = 0;     // bootstrap fits that errored (excluded)
    bool unstable = false;        // replications < 100
};
BiasCorrection bias_correct(const CountPath& path, const ModelSpec& family,
                            std::size_t replications, SeedRecord seed,
                            unsigned workers = 1);

/// The error-decomposition identity: solves the weighted system for
/// (m_hat - m_ref, mu_hat - mu_ref) directly from the residuals
/// W_t = X_t - m_ref X_{t-1} - mu_ref. Algebraically equal to fitting and
/// subtracting the reference values.
std::array<double, 2> decompose_error(const CountPath& path,
                                      const WeightScheme& scheme, double m_ref,
                                      double mu_ref);

} // namespace igw
