#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mobiq {

struct BatchMeans {
    double mean = 0.0;
    double std_error = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    int n_batches = 0;
};

// Equal contiguous batches over the first n_batches*floor(len/n_batches)
// elements; 95% CI from the Student-t quantile with n_batches-1 dof. The
// reported mean is the mean of the truncated series.
BatchMeans batch_means(std::span<const double> series, int n_batches = 30);

// Right-continuous empirical distribution; samples are sorted once.
class EmpiricalCdf {
  public:
    explicit EmpiricalCdf(std::vector<double> samples);

    double operator()(double x) const;  // P[X <= x]
    // Smallest sample value q with F(q) >= p.
    double quantile(double p) const;
    std::size_t size() const { return sorted_.size(); }
    const std::vector<double>& sorted() const { return sorted_; }

  private:
    std::vector<double> sorted_;
};

// Biased (1/n-normalized) autocorrelation estimates for lags 0..max_lag;
// result[0] == 1. Throws std::invalid_argument on a constant series.
std::vector<double> autocorrelation(std::span<const double> series, int max_lag);

// E[(X - a)+] over the sample.
double stop_loss(std::span<const double> series, double a);

enum class StopLossVerdict { Below, Above, Tie, Overlap };

struct StopLossDominance {
    std::vector<double> grid;
    std::vector<double> first;    // stop-loss of the first series on the grid
    std::vector<double> second;   // stop-loss of the second series
    std::vector<StopLossVerdict> verdicts;
    bool dominated = false;  // first is below second: no Above, no Overlap, >= 1 Below
};

// Compares stop-loss transforms on a 50-point grid from 0 to the 99.5th
// percentile of the second (slower) series. Pointwise uncertainty comes from
// batch means over the transformed series; points where both transforms are
// exactly equal (typically both zero) count as ties.
StopLossDominance stop_loss_dominance(std::span<const double> first,
                                      std::span<const double> second, int grid_points = 50,
                                      double z = 1.96);

}  // namespace mobiq
