#include "igw/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace igw {

double RunningMoments::stddev() const noexcept { return std::sqrt(variance()); }

double RunningMoments::stderr_mean() const noexcept {
    return count_ > 1 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
}

double normal_cdf(double x) noexcept {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double ks_statistic_normal(std::span<const double> sample, double mean, double sd) {
    if (sample.empty()) throw std::invalid_argument("ks_statistic_normal: empty sample");
    if (!(sd > 0.0)) throw std::invalid_argument("ks_statistic_normal: sd must be positive");
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = normal_cdf((sorted[i] - mean) / sd);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max(d, std::max(f - lo, hi - f));
    }
    return d;
}

double ks_statistic_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("ks_statistic_two_sample: empty sample");
    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < sa.size() && j < sb.size()) {
        const double x = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] <= x) ++i;
        while (j < sb.size() && sb[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double quantile(std::vector<double> sample, double p) {
    if (sample.empty()) throw std::invalid_argument("quantile: empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile: p outside [0,1]");
    std::sort(sample.begin(), sample.end());
    const double h = p * static_cast<double>(sample.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sample.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return sample[lo] + frac * (sample[hi] - sample[lo]);
}

double correlation(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2) return 0.0;
    RunningMoments ma, mb;
    for (double x : a) ma.add(x);
    for (double x : b) mb.add(x);
    const double sa = ma.stddev();
    const double sb = mb.stddev();
    if (!(sa > 0.0) || !(sb > 0.0)) return 0.0;
    CompensatedSum cov;
    for (std::size_t i = 0; i < a.size(); ++i) {
        cov.add((a[i] - ma.mean()) * (b[i] - mb.mean()));
    }
    return cov.value() / (static_cast<double>(a.size() - 1) * sa * sb);
}

std::size_t Histogram::total() const noexcept {
    std::size_t t = 0;
    for (auto c : counts) t += c;
    return t;
}

Histogram histogram_fixed(std::span<const double> sample, double lo, double hi,
                          std::size_t bins) {
    if (bins < 2) throw std::invalid_argument("histogram_fixed: need at least 2 bins");
    if (!(hi > lo)) throw std::invalid_argument("histogram_fixed: need hi > lo");
    Histogram h;
    h.edges.resize(bins + 1);
    h.counts.assign(bins, 0);
    const double w = (hi - lo) / static_cast<double>(bins);
    for (std::size_t k = 0; k <= bins; ++k) h.edges[k] = lo + w * static_cast<double>(k);
    h.edges.back() = hi;
    for (double x : sample) {
        auto k = static_cast<long>(std::floor((x - lo) / w));
        k = std::clamp(k, 0L, static_cast<long>(bins) - 1L);
        ++h.counts[static_cast<std::size_t>(k)];
    }
    return h;
}

double iqr(std::vector<double> sample) {
    const double q1 = quantile(sample, 0.25);
    const double q3 = quantile(std::move(sample), 0.75);
    return q3 - q1;
}

std::size_t freedman_diaconis_bins(std::vector<double> sample) {
    if (sample.size() < 2) return 2;
    const auto [min_it, max_it] = std::minmax_element(sample.begin(), sample.end());
    const double range = *max_it - *min_it;
    const double spread = iqr(sample);
    if (!(range > 0.0) || !(spread > 0.0)) return 2;
    const double width =
        2.0 * spread / std::cbrt(static_cast<double>(sample.size()));
    const auto bins = static_cast<std::size_t>(std::ceil(range / width));
    return std::max<std::size_t>(bins, 2);
}

} // namespace igw
