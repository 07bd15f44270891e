#include "mobiq/estimators.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mobiq {

namespace {

double kahan_sum(std::span<const double> xs) {
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

}  // namespace

BatchMeans batch_means(std::span<const double> series, int n_batches) {
    if (n_batches < 2) throw std::invalid_argument("need at least 2 batches");
    const std::size_t k = static_cast<std::size_t>(n_batches);
    if (series.size() < 2 * k) {
        throw std::invalid_argument("series must hold at least 2 observations per batch");
    }
    const std::size_t b = series.size() / k;

    std::vector<double> means(k);
    for (std::size_t i = 0; i < k; ++i) {
        means[i] = kahan_sum(series.subspan(i * b, b)) / static_cast<double>(b);
    }

    BatchMeans out;
    out.n_batches = n_batches;
    out.mean = kahan_sum(means) / static_cast<double>(k);  // = truncated-series mean
    double ss = 0.0;
    for (double m : means) ss += (m - out.mean) * (m - out.mean);
    const double var = ss / static_cast<double>(k - 1);
    out.std_error = std::sqrt(var / static_cast<double>(k));
    const boost::math::students_t dist(static_cast<double>(k - 1));
    const double t = boost::math::quantile(dist, 0.975);
    out.ci_lo = out.mean - t * out.std_error;
    out.ci_hi = out.mean + t * out.std_error;
    return out;
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
    if (sorted_.empty()) throw std::invalid_argument("empty sample");
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalCdf::quantile(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability must lie in [0, 1]");
    if (p <= 0.0) return sorted_.front();
    const double n = static_cast<double>(sorted_.size());
    auto idx = static_cast<std::size_t>(std::ceil(p * n));
    if (idx > 0) --idx;
    if (idx >= sorted_.size()) idx = sorted_.size() - 1;
    return sorted_[idx];
}

std::vector<double> autocorrelation(std::span<const double> series, int max_lag) {
    if (max_lag < 0) throw std::invalid_argument("lag must be nonnegative");
    const std::size_t n = series.size();
    if (n < 2 || static_cast<std::size_t>(max_lag) >= n) {
        throw std::invalid_argument("series too short for requested lag");
    }
    const double mean = kahan_sum(series) / static_cast<double>(n);
    double c0 = 0.0;
    for (double x : series) c0 += (x - mean) * (x - mean);
    if (c0 == 0.0) throw std::invalid_argument("autocorrelation undefined for constant series");

    std::vector<double> rho(static_cast<std::size_t>(max_lag) + 1);
    rho[0] = 1.0;
    for (int k = 1; k <= max_lag; ++k) {
        double ck = 0.0;
        for (std::size_t t = 0; t + k < n; ++t) {
            ck += (series[t] - mean) * (series[t + k] - mean);
        }
        rho[static_cast<std::size_t>(k)] = ck / c0;  // biased normalization
    }
    return rho;
}

double stop_loss(std::span<const double> series, double a) {
    if (series.empty()) throw std::invalid_argument("empty sample");
    double sum = 0.0, comp = 0.0;
    for (double x : series) {
        const double e = x > a ? x - a : 0.0;
        const double y = e - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum / static_cast<double>(series.size());
}

StopLossDominance stop_loss_dominance(std::span<const double> first,
                                      std::span<const double> second, int grid_points,
                                      double z) {
    if (grid_points < 2) throw std::invalid_argument("need at least 2 grid points");
    EmpiricalCdf slower(std::vector<double>(second.begin(), second.end()));
    const double top = slower.quantile(0.995);

    StopLossDominance out;
    out.grid.resize(grid_points);
    out.first.resize(grid_points);
    out.second.resize(grid_points);
    out.verdicts.resize(grid_points);

    // Correlated series: per-point std errors via batch means of (x-a)+.
    constexpr int kErrorBatches = 20;
    bool any_below = false;
    bool blocked = false;
    for (int i = 0; i < grid_points; ++i) {
        const double a = top * static_cast<double>(i) / static_cast<double>(grid_points - 1);
        out.grid[i] = a;

        std::vector<double> ea(first.size());
        for (std::size_t t = 0; t < first.size(); ++t) {
            ea[t] = first[t] > a ? first[t] - a : 0.0;
        }
        const BatchMeans fa = batch_means(ea, kErrorBatches);
        ea.resize(second.size());
        for (std::size_t t = 0; t < second.size(); ++t) {
            ea[t] = second[t] > a ? second[t] - a : 0.0;
        }
        const BatchMeans sa = batch_means(ea, kErrorBatches);

        out.first[i] = fa.mean;
        out.second[i] = sa.mean;
        const double diff = fa.mean - sa.mean;
        const double se = std::sqrt(fa.std_error * fa.std_error + sa.std_error * sa.std_error);
        StopLossVerdict v;
        if (diff == 0.0) {
            v = StopLossVerdict::Tie;
        } else if (diff < -z * se) {
            v = StopLossVerdict::Below;
            any_below = true;
        } else if (diff > z * se) {
            v = StopLossVerdict::Above;
            blocked = true;
        } else {
            v = StopLossVerdict::Overlap;
            blocked = true;
        }
        out.verdicts[static_cast<std::size_t>(i)] = v;
    }
    out.dominated = any_below && !blocked;
    return out;
}

}  // namespace mobiq
