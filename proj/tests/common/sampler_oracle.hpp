#pragma once
// Reference distributions for the (r, R) energy-split sampler, computed
// directly from the kernel and d_alpha rather than from the sampler's
// Beta-mixture decomposition.

#include <cmath>
#include <vector>

#include "polykin/kernel.hpp"
#include "polykin/numerics.hpp"
#include "polykin/stats.hpp"

namespace polykin::testing {

/// Probability of each cell of an n x n grid on [0,1]^2 (row-major in r)
/// under the density proportional to B(r, R) d_alpha(r, R) for state p.
inline std::vector<double> energy_split_cell_probabilities(const PairState& p, const KernelParams& kp, double m,
                                                           int n)
{
    const double a = kp.alpha();
    const double h = 1.0 / n;
    std::vector<double> prob(static_cast<std::size_t>(n) * n);
    double total = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double r0 = i * h, R0 = j * h;
            const double r1c = 1.0 - (i + 1) * h, R1c = 1.0 - (j + 1) * h;  // complements at the far edges
            auto f = [&](double x, double xc, double y, double yc) {
                const double r = r0 + h * x, rc = r1c + h * xc;
                const double R = R0 + h * y, Rc = R1c + h * yc;
                if (R == 0.0) return 0.0;
                const double d = std::pow(r * rc, a) * std::pow(Rc, 2.0 * a + 1.0) * std::sqrt(R);
                return evaluate_physical_kernel(p, r, R, kp, m) * d;
            };
            const double v = numerics::integrate_unit_square(f, 1e-9).value * h * h;
            prob[static_cast<std::size_t>(i) * n + j] = v;
            total += v;
        }
    for (double& v : prob) v /= total;
    return prob;
}

/// Chi-square test of sampled (r, R) pairs against the cell probabilities.
inline stats::TestResult energy_split_chi_square(const std::vector<double>& rs, const std::vector<double>& Rs,
                                                 const std::vector<double>& prob, int n)
{
    std::vector<double> obs(prob.size(), 0.0), expct(prob.size());
    for (std::size_t k = 0; k < rs.size(); ++k) {
        const int i = std::min(n - 1, static_cast<int>(rs[k] * n));
        const int j = std::min(n - 1, static_cast<int>(Rs[k] * n));
        obs[static_cast<std::size_t>(i) * n + j] += 1.0;
    }
    // pool cells with tiny expectation into one bin so the chi-square
    // approximation stays valid
    std::vector<double> o2, e2;
    double o_small = 0.0, e_small = 0.0;
    for (std::size_t c = 0; c < prob.size(); ++c) {
        const double e = prob[c] * static_cast<double>(rs.size());
        if (e < 5.0) {
            o_small += obs[c];
            e_small += e;
        } else {
            o2.push_back(obs[c]);
            e2.push_back(e);
        }
    }
    if (e_small > 0.0) {
        o2.push_back(o_small);
        e2.push_back(e_small);
    }
    return stats::chi_square_counts(o2, e2, 0);
}

}  // namespace polykin::testing
