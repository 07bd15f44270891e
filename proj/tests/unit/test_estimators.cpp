#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "mobiq/estimators.hpp"
#include "mobiq/rng.hpp"

using namespace mobiq;

TEST_CASE("batch means recovers an iid mean with a calibrated CI") {
    Rng rng(8);
    std::vector<double> series(3000);
    for (auto& x : series) x = 5.0 + rng.normal() * 2.0;
    const auto bm = batch_means(series, 30);
    CHECK(bm.n_batches == 30);
    CHECK(bm.mean == doctest::Approx(testutil::mean(series)));
    CHECK(bm.ci_lo < bm.mean);
    CHECK(bm.ci_hi > bm.mean);
    // Halfwidth ~ t * sd/sqrt(n) ~ 2.05 * 2/sqrt(3000) ~ 0.075.
    CHECK(bm.ci_hi - bm.ci_lo > 0.04);
    CHECK(bm.ci_hi - bm.ci_lo < 0.40);
    CHECK(bm.std_error == doctest::Approx((bm.ci_hi - bm.mean) / 2.0452).epsilon(0.01));
}

TEST_CASE("batch means CI covers the mean of a correlated series") {
    // AR(1) with phi = 0.9: the CI must widen enough to keep near-nominal
    // coverage; a plain iid standard error would cover far less often.
    Rng rng(99);
    const double phi = 0.9;
    int covered = 0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
        std::vector<double> series(4000);
        double x = 0.0;
        // Burn in so the start is stationary.
        for (int i = 0; i < 200; ++i) x = phi * x + rng.normal();
        for (auto& s : series) {
            x = phi * x + rng.normal();
            s = x;
        }
        const auto bm = batch_means(series, 30);
        if (bm.ci_lo <= 0.0 && 0.0 <= bm.ci_hi) ++covered;
    }
    // Nominal 95%; batch correlation costs some coverage. The expected rate
    // for this construction sits near 90%, so 80% is a defect alarm, not a
    // tight statistical bound.
    CHECK(covered >= static_cast<int>(0.80 * reps));
}

TEST_CASE("batch means input validation") {
    std::vector<double> tiny{1.0, 2.0};
    CHECK_THROWS_AS(batch_means(tiny, 30), std::invalid_argument);
    CHECK_THROWS_AS(batch_means(tiny, 0), std::invalid_argument);
}

TEST_CASE("autocorrelation of an AR(1) series matches phi^k") {
    Rng rng(1234);
    const double phi = 0.9;
    std::vector<double> series(200000);
    double x = 0.0;
    for (int i = 0; i < 500; ++i) x = phi * x + rng.normal();
    for (auto& s : series) {
        x = phi * x + rng.normal();
        s = x;
    }
    const auto rho = autocorrelation(series, 5);
    REQUIRE(rho.size() == 6);
    CHECK(rho[0] == 1.0);
    for (int k = 1; k <= 5; ++k) {
        CHECK(rho[k] == doctest::Approx(std::pow(phi, k)).epsilon(0.03));
    }
}

TEST_CASE("autocorrelation rejects constant series") {
    std::vector<double> flat(100, 3.0);
    CHECK_THROWS_AS(autocorrelation(flat, 3), std::invalid_argument);
}

TEST_CASE("empirical cdf is right-continuous with DKW-level accuracy") {
    Rng rng(5150);
    const int n = 10000;
    std::vector<double> draws(n);
    for (auto& d : draws) d = rng.uniform();
    const EmpiricalCdf cdf(draws);
    CHECK(cdf.size() == static_cast<std::size_t>(n));

    double sup = 0.0;
    for (double x = 0.0; x <= 1.0; x += 1e-3) {
        sup = std::max(sup, std::abs(cdf(x) - x));
    }
    CHECK(sup < 0.02);

    CHECK(cdf(-1.0) == 0.0);
    CHECK(cdf(2.0) == 1.0);
}

TEST_CASE("empirical cdf quantiles on a small explicit sample") {
    const EmpiricalCdf cdf(std::vector<double>{3.0, 1.0, 4.0, 2.0});
    CHECK(cdf(0.5) == 0.0);
    CHECK(cdf(1.0) == doctest::Approx(0.25));
    CHECK(cdf(2.5) == doctest::Approx(0.5));
    CHECK(cdf(4.0) == 1.0);
    CHECK(cdf.quantile(0.25) == 1.0);
    CHECK(cdf.quantile(0.26) == 2.0);
    CHECK(cdf.quantile(0.5) == 2.0);
    CHECK(cdf.quantile(0.75) == 3.0);
    CHECK(cdf.quantile(1.0) == 4.0);
    CHECK(cdf.quantile(0.0) == 1.0);
}

TEST_CASE("stop loss transform: values, monotonicity, convexity") {
    const std::vector<double> xs{0.0, 1.0, 2.0, 5.0};
    CHECK(stop_loss(xs, 0.0) == doctest::Approx(2.0));     // the mean
    CHECK(stop_loss(xs, 1.0) == doctest::Approx(1.25));    // (0+0+1+4)/4
    CHECK(stop_loss(xs, 2.0) == doctest::Approx(0.75));
    CHECK(stop_loss(xs, 5.0) == 0.0);
    CHECK(stop_loss(xs, 10.0) == 0.0);

    Rng rng(21);
    std::vector<double> sample(5000);
    for (auto& s : sample) s = rng.exponential(2.0);
    double prev = stop_loss(sample, 0.0);
    double prev_slope = 0.0;
    bool first = true;
    for (double a = 0.25; a < 12.0; a += 0.25) {
        const double cur = stop_loss(sample, a);
        CHECK(cur <= prev + 1e-12);              // nonincreasing
        const double slope = cur - prev;
        if (!first) CHECK(slope >= prev_slope - 1e-12);  // convex
        prev_slope = slope;
        prev = cur;
        first = false;
    }
}

TEST_CASE("stop loss dominance flags a shifted copy and not a tie") {
    Rng rng(31);
    std::vector<double> base(20000);
    for (auto& b : base) b = rng.exponential(1.0);
    std::vector<double> shifted(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) shifted[i] = base[i] + 1.0;

    const auto dom = stop_loss_dominance(base, shifted);
    REQUIRE(dom.grid.size() == 50);
    REQUIRE(dom.first.size() == dom.grid.size());
    REQUIRE(dom.verdicts.size() == dom.grid.size());
    CHECK(dom.dominated);
    CHECK(std::is_sorted(dom.grid.begin(), dom.grid.end()));
    // Reversed order cannot dominate.
    CHECK_FALSE(stop_loss_dominance(shifted, base).dominated);
    // A series never dominates itself: every grid point ties.
    const auto self = stop_loss_dominance(base, base);
    CHECK_FALSE(self.dominated);
    for (auto v : self.verdicts) CHECK(v == StopLossVerdict::Tie);
}
