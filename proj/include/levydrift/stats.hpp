#pragma once

#include <utility>
#include <vector>

namespace levydrift {

double norm_pdf(double x);
double norm_cdf(double x);
/// Inverse standard normal CDF, Wichura's AS241 rational approximation
/// (absolute error well below 1e-8 over (0,1)).
double norm_quantile(double p);

double sample_mean(const std::vector<double>& x);
/// Unbiased (n-1 denominator) standard deviation.
double sample_sd(const std::vector<double>& x);
double sample_min(const std::vector<double>& x);
double sample_max(const std::vector<double>& x);
double sample_median(std::vector<double> x);

/// Moment-ratio skewness m3 / m2^{3/2}.
double skewness(const std::vector<double>& x);
/// Moment-ratio excess kurtosis m4 / m2^2 - 3.
double excess_kurtosis(const std::vector<double>& x);

/// Kolmogorov-Smirnov distance of the sample against N(mu, sd^2).
double ks_distance_normal(std::vector<double> x, double mu, double sd);

/// Sorted pairs (Phi^{-1}((i-0.5)/M), order statistic i), i = 1..M.
std::vector<std::pair<double, double>> qq_pairs(std::vector<double> errors);

/// Two-sample Kolmogorov-Smirnov distance.
double ks_distance_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace levydrift
