#ifndef RCDT_CDT_HPP
#define RCDT_CDT_HPP

#include <Eigen/Core>

#include "rcdt/density.hpp"
#include "rcdt/grid.hpp"

namespace rcdt {

/// Monotone transport map on the reference grid: values are strictly
/// increasing and lie inside the source signal's support interval.
struct CdtFunction {
    Grid1D grid; // reference domain
    Eigen::VectorXd values;
};

/// Cumulative trapezoid sums of a unit-mass density; F[0] = 0, F[n-1] = 1,
/// strictly increasing. Throws non_monotone_cdf on a non-increasing step.
Eigen::VectorXd cumulative_trapezoid(const Grid1D& grid,
                                     const Eigen::VectorXd& values);

/// Forward transform: the increasing map shat on r's grid with
/// F_s(shat(x)) = F_r(x), computed by cumulative sums and monotone linear
/// interpolation of the inverse CDF.
CdtFunction cdt_forward(const Density1D& s, const Density1D& r);

/// Inverse transform: s(x) = d shat^{-1}(x)/dx * r(shat^{-1}(x)), sampled on
/// out_grid, clipped at zero and renormalized to unit mass.
Density1D cdt_inverse(const CdtFunction& shat, const Density1D& r,
                      const Grid1D& out_grid);

/// Inverse on the reference grid itself.
Density1D cdt_inverse(const CdtFunction& shat, const Density1D& r);

/// Wasserstein-2 distance computed in transform space:
/// || (shat1 - shat2) sqrt(r) ||_{L2}.
double w2_distance(const Density1D& s1, const Density1D& s2,
                   const Density1D& r);

} // namespace rcdt

#endif // RCDT_CDT_HPP
