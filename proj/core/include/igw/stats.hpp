#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace igw {

/// Neumaier-compensated accumulator. Keeps a running error term so sums
/// whose terms span many orders of magnitude stay accurate to ~1 ulp.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const noexcept { return sum_ + comp_; }

    CompensatedSum& operator+=(double x) noexcept {
        add(x);
        return *this;
    }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Sample mean and (unbiased) variance over a fixed-order stream of values.
/// Welford update, so merging replications in index order is reproducible.
class RunningMoments {
public:
    void add(double x) noexcept {
        ++count_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(count_);
        m2_ += d * (x - mean_);
    }

    std::size_t count() const noexcept { return count_; }
    double mean() const noexcept { return mean_; }
    double variance() const noexcept {
        return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
    }
    double stddev() const noexcept;
    /// Standard error of the mean.
    double stderr_mean() const noexcept;

private:
    std::size_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// Standard normal CDF.
double normal_cdf(double x) noexcept;

/// One-sample Kolmogorov-Smirnov statistic against N(mean, sd^2).
double ks_statistic_normal(std::span<const double> sample, double mean, double sd);

/// Two-sample Kolmogorov-Smirnov statistic sup|F1 - F2|.
double ks_statistic_two_sample(std::span<const double> a, std::span<const double> b);

/// Empirical quantile with linear interpolation between order statistics
/// (the common "type 7" rule). p in [0, 1]; sample need not be sorted.
double quantile(std::vector<double> sample, double p);

/// Pearson correlation coefficient; 0 for degenerate inputs.
double correlation(std::span<const double> a, std::span<const double> b);

/// Equal-width histogram.
struct Histogram {
    std::vector<double> edges;       // size bins + 1
    std::vector<std::size_t> counts; // size bins

    std::size_t total() const noexcept;
};

/// Bins `sample` over [lo, hi] into `bins` equal-width cells. Values outside
/// the range are clamped into the boundary cells.
Histogram histogram_fixed(std::span<const double> sample, double lo, double hi,
                          std::size_t bins);

/// Freedman-Diaconis bin count for a sample over its own range (>= 2).
std::size_t freedman_diaconis_bins(std::vector<double> sample);

/// Interquartile range.
double iqr(std::vector<double> sample);

} // namespace igw
