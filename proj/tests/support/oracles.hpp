// Brute-force reference computations, kept independent of the library's
// transform path: densities are refined by linear interpolation, CDFs are
// accumulated on the refined grid, and inverses are found by bisection.
#ifndef RCDT_TESTS_ORACLES_HPP
#define RCDT_TESTS_ORACLES_HPP

#include <Eigen/Core>
#include <vector>

#include "rcdt/density.hpp"

namespace oracle {

/// Piecewise-linear density refined `factor`x, with its cumulative trapezoid
/// CDF rescaled to [0, 1].
struct DenseCdf {
    std::vector<double> x;
    std::vector<double> f;

    DenseCdf(const rcdt::Density1D& d, int factor = 16) {
        const int n = d.grid.n_points;
        const double h = d.grid.spacing();
        x.reserve(static_cast<std::size_t>(n - 1) * factor + 1);
        std::vector<double> v;
        for (int i = 0; i < n - 1; ++i) {
            for (int s = 0; s < factor; ++s) {
                const double w = static_cast<double>(s) / factor;
                x.push_back(d.grid.point(i) + w * h);
                v.push_back((1.0 - w) * d.values(i) + w * d.values(i + 1));
            }
        }
        x.push_back(d.grid.point(n - 1));
        v.push_back(d.values(n - 1));

        f.assign(x.size(), 0.0);
        for (std::size_t i = 1; i < x.size(); ++i)
            f[i] = f[i - 1] + 0.5 * (x[i] - x[i - 1]) * (v[i] + v[i - 1]);
        const double total = f.back();
        for (double& fi : f) fi /= total;
    }

    /// Quantile by bisection over the refined knots, then local linear solve.
    double inverse(double q) const {
        if (q <= 0.0) return x.front();
        if (q >= 1.0) return x.back();
        std::size_t lo = 0, hi = f.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (f[mid] < q)
                lo = mid;
            else
                hi = mid;
        }
        const double df = f[hi] - f[lo];
        if (df <= 0.0) return x[lo];
        return x[lo] + (q - f[lo]) / df * (x[hi] - x[lo]);
    }
};

/// W2 by the quantile-function integral on a dense midpoint grid.
inline double w2_bruteforce(const rcdt::Density1D& s1, const rcdt::Density1D& s2,
                            int n_quantiles = 200000) {
    const DenseCdf f1(s1), f2(s2);
    double acc = 0.0;
    for (int i = 0; i < n_quantiles; ++i) {
        const double q = (i + 0.5) / n_quantiles;
        const double d = f1.inverse(q) - f2.inverse(q);
        acc += d * d;
    }
    return std::sqrt(acc / n_quantiles);
}

} // namespace oracle

#endif // RCDT_TESTS_ORACLES_HPP
