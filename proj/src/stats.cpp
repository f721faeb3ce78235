#include "polykin/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace polykin::stats {

double chi_square_sf(double x, double dof)
{
    if (x <= 0.0) return 1.0;
    return boost::math::gamma_q(0.5 * dof, 0.5 * x);
}

TestResult chi_square_counts(std::span<const double> observed, std::span<const double> expected, std::size_t fitted)
{
    if (observed.size() != expected.size() || observed.size() < 2)
        throw std::invalid_argument("chi_square_counts: need matching count vectors of size >= 2");
    double chi2 = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (!(expected[i] > 0.0)) throw std::invalid_argument("chi_square_counts: expected counts must be positive");
        const double d = observed[i] - expected[i];
        chi2 += d * d / expected[i];
    }
    if (observed.size() <= fitted + 1) throw std::invalid_argument("chi_square_counts: no degrees of freedom left");
    const std::size_t dof = observed.size() - 1 - fitted;
    return {chi2, chi_square_sf(chi2, static_cast<double>(dof)), dof};
}

TestResult chi_square_gof(std::span<const double> samples, const std::function<double(double)>& quantile,
                          std::size_t bins)
{
    if (bins < 2) throw std::invalid_argument("chi_square_gof: need at least two bins");
    std::vector<double> edges(bins - 1);
    for (std::size_t i = 1; i < bins; ++i) edges[i - 1] = quantile(static_cast<double>(i) / bins);
    std::vector<double> observed(bins, 0.0);
    for (double x : samples) {
        const auto it = std::upper_bound(edges.begin(), edges.end(), x);
        observed[static_cast<std::size_t>(it - edges.begin())] += 1.0;
    }
    std::vector<double> expected(bins, static_cast<double>(samples.size()) / bins);
    return chi_square_counts(observed, expected);
}

double kolmogorov_sf(double d, double n_eff)
{
    const double sn = std::sqrt(n_eff);
    const double lambda = (sn + 0.12 + 0.11 / sn) * d;
    if (lambda < 1e-3) return 1.0;
    double sum = 0.0;
    for (int j = 1; j <= 200; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += (j % 2 == 1 ? 2.0 : -2.0) * term;
        if (term < 1e-16) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

TestResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf)
{
    if (samples.empty()) throw std::invalid_argument("ks_test: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max({d, f - i / n, (i + 1) / n - f});
    }
    return {d, kolmogorov_sf(d, n), 0};
}

TestResult ks_two_sample(std::vector<double> a, std::vector<double> b)
{
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    return {d, kolmogorov_sf(d, na * nb / (na + nb)), 0};
}

MannKendall mann_kendall(std::span<const double> series)
{
    const std::size_t n = series.size();
    if (n < 3) throw std::invalid_argument("mann_kendall: need at least three points");
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = series[j] - series[i];
            s += (d > 0.0) - (d < 0.0);
        }
    std::map<double, std::size_t> ties;
    for (double x : series) ++ties[x];
    const double nn = static_cast<double>(n);
    double var = nn * (nn - 1.0) * (2.0 * nn + 5.0);
    for (const auto& [value, t] : ties) {
        const double tt = static_cast<double>(t);
        if (t > 1) var -= tt * (tt - 1.0) * (2.0 * tt + 5.0);
    }
    var /= 18.0;
    double z = 0.0;
    if (var > 0.0) {
        if (s > 0.0) z = (s - 1.0) / std::sqrt(var);
        else if (s < 0.0) z = (s + 1.0) / std::sqrt(var);
    }
    return {s, z, 1.0 - normal_cdf(z), normal_cdf(z)};
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y)
{
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw std::invalid_argument("least_squares: need >= 2 paired points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("least_squares: abscissae are all equal");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - (fit.intercept + fit.slope * x[i]);
        sse += e * e;
    }
    fit.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    fit.slope_stderr = n > 2 ? std::sqrt(sse / (n - 2) / sxx) : 0.0;
    return fit;
}

double normal_cdf(double x)
{
    return 0.5 * boost::math::erfc(-x / std::numbers::sqrt2);
}

double normal_quantile(double p)
{
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

MeanStd mean_std(std::span<const double> xs)
{
    if (xs.empty()) return {};
    double m = 0.0;
    for (double x : xs) m += x;
    m /= xs.size();
    double v = 0.0;
    for (double x : xs) v += (x - m) * (x - m);
    return {m, xs.size() > 1 ? std::sqrt(v / (xs.size() - 1)) : 0.0};
}

}  // namespace polykin::stats
