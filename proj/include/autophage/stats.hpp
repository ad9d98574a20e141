#pragma once

// Goodness-of-fit helpers used by the sampler diagnostics.

#include <functional>
#include <span>

namespace autophage::stats {

double normal_cdf(double x, double mean = 0.0, double sd = 1.0);

/// sup_x |F_n(x) - F(x)| for the empirical CDF of the samples.
double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Asymptotic Kolmogorov tail P(K > lambda) = 2 sum (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_tail(double lambda);

/// p-value of the two-sample statistic with Stephens' effective-size correction.
double ks_two_sample_pvalue(double statistic, std::size_t n, std::size_t m);

}  // namespace autophage::stats
