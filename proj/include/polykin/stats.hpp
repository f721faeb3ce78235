#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace polykin::stats {

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t dof = 0;
};

/// Upper-tail chi-square probability P(X >= x) with `dof` degrees of freedom.
double chi_square_sf(double x, double dof);

/// Pearson goodness-of-fit against a continuous law given by its quantile
/// function, using `bins` equiprobable cells.
TestResult chi_square_gof(std::span<const double> samples, const std::function<double(double)>& quantile,
                          std::size_t bins);

/// Chi-square test of observed counts against expected counts; `fitted`
/// parameters are removed from the degrees of freedom.
TestResult chi_square_counts(std::span<const double> observed, std::span<const double> expected,
                             std::size_t fitted = 0);

/// Asymptotic Kolmogorov distribution tail, with the Stephens small-sample
/// correction applied to the effective sample size.
double kolmogorov_sf(double d, double n_eff);

/// One-sample Kolmogorov-Smirnov test against a CDF.
TestResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

TestResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct MannKendall {
    double s = 0.0;
    double z = 0.0;
    /// One-sided p-value for an increasing trend.
    double p_increasing = 1.0;
    /// One-sided p-value for a decreasing trend.
    double p_decreasing = 1.0;
};

/// Mann-Kendall monotone trend test with tie correction.
MannKendall mann_kendall(std::span<const double> series);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double slope_stderr = 0.0;
};

LinearFit least_squares(std::span<const double> x, std::span<const double> y);

double normal_cdf(double x);
double normal_quantile(double p);

struct MeanStd {
    double mean = 0.0;
    double stddev = 0.0;
};
MeanStd mean_std(std::span<const double> xs);

}  // namespace polykin::stats
