#pragma once
// Small estimation toolbox shared by the probes and the test suite: moment
// summaries, least squares, binomial intervals, order statistics, and the
// two-sample Kolmogorov-Smirnov distance.

#include <cstddef>
#include <vector>

namespace glsim {

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
    std::size_t n = 0;
};
MeanSe mean_se(const std::vector<double>& xs);

// Standard error of a time average from correlated samples: split into
// n_batches contiguous batches and use the spread of batch means.
MeanSe batch_means_se(const std::vector<double>& xs, int n_batches);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

struct WilsonInterval {
    double p_hat = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};
// 95% score interval; well defined for k = 0 and k = n.
WilsonInterval wilson_interval(std::size_t k, std::size_t n);

// Quantile with linear interpolation between order statistics, q in [0,1].
double percentile(std::vector<double> xs, double q);

// Hill tail-index estimator from the top tail_fraction of |x|.
double hill_estimate(const std::vector<double>& xs, double tail_fraction);

// sup |F1 - F2| between empirical distributions.
double ks_statistic(std::vector<double> a, std::vector<double> b);
// Asymptotic two-sample threshold at the given significance level.
double ks_threshold(std::size_t n, std::size_t m, double level);

// Chi-square statistic of counts against the uniform distribution over bins.
double chi2_uniform(const std::vector<std::size_t>& counts);

}  // namespace glsim
