#include "rcdt/cdt.hpp"

#include <cmath>

#include "rcdt/errors.hpp"

namespace rcdt {

Eigen::VectorXd cumulative_trapezoid(const Grid1D& grid,
                                     const Eigen::VectorXd& values) {
    if (values.size() != grid.n_points)
        throw_error(errc::dimension_mismatch, "sample count != grid points");
    const double h = grid.spacing();
    Eigen::VectorXd cdf(values.size());
    cdf(0) = 0.0;
    for (int i = 1; i < values.size(); ++i) {
        const double step = 0.5 * h * (values(i - 1) + values(i));
        if (!(step > 0.0))
            throw_error(errc::non_monotone_cdf,
                        "cumulative sum is not strictly increasing");
        cdf(i) = cdf(i - 1) + step;
    }
    cdf /= cdf(cdf.size() - 1);
    return cdf;
}

namespace {

// Linear interpolation of y over a regular grid at position x (clamped).
double interp_regular(const Grid1D& grid, const Eigen::VectorXd& y, double x) {
    const double h = grid.spacing();
    double pos = (x - grid.x_min) / h;
    if (pos <= 0.0) return y(0);
    const int last = grid.n_points - 1;
    if (pos >= last) return y(last);
    const int k = static_cast<int>(pos);
    const double w = pos - k;
    return (1.0 - w) * y(k) + w * y(k + 1);
}

void enforce_increasing(Eigen::VectorXd& v, double spacing) {
    const double jitter = 1e-12 * spacing;
    for (int i = 1; i < v.size(); ++i)
        if (!(v(i) > v(i - 1))) v(i) = v(i - 1) + jitter;
}

} // namespace

CdtFunction cdt_forward(const Density1D& s, const Density1D& r) {
    const Eigen::VectorXd fs = cumulative_trapezoid(s.grid, s.values);
    const Eigen::VectorXd fr = cumulative_trapezoid(r.grid, r.values);

    const int m = s.grid.n_points;
    const int n = r.grid.n_points;
    const double hs = s.grid.spacing();

    // Invert F_s at the quantiles F_r(x_i). Both sequences are increasing,
    // so a single merge pass suffices.
    Eigen::VectorXd shat(n);
    int k = 0;
    for (int i = 0; i < n; ++i) {
        const double q = fr(i);
        while (k + 2 < m && fs(k + 1) < q) ++k;
        const double lo = fs(k), hi = fs(k + 1);
        double w = (q - lo) / (hi - lo);
        if (w < 0.0) w = 0.0;
        if (w > 1.0) w = 1.0;
        shat(i) = s.grid.point(k) + w * hs;
    }
    enforce_increasing(shat, hs);
    return CdtFunction{r.grid, std::move(shat)};
}

Density1D cdt_inverse(const CdtFunction& shat, const Density1D& r,
                      const Grid1D& out_grid) {
    const Eigen::VectorXd& y = shat.values;
    const int n = static_cast<int>(y.size());
    if (n != shat.grid.n_points)
        throw_error(errc::dimension_mismatch, "CDT sample count != grid points");
    for (int i = 1; i < n; ++i)
        if (!(y(i) > y(i - 1)))
            throw_error(errc::non_monotone_input,
                        "transport map must be strictly increasing");

    const double hr = shat.grid.spacing();
    Eigen::VectorXd out(out_grid.n_points);
    int k = 0;
    for (int i = 0; i < out_grid.n_points; ++i) {
        const double z = out_grid.point(i);
        if (z < y(0) || z > y(n - 1)) {
            out(i) = 0.0;
            continue;
        }
        while (k + 2 < n && y(k + 1) < z) ++k;
        while (k > 0 && y(k) > z) --k;
        const double dy = y(k + 1) - y(k);
        const double xinv = shat.grid.point(k) + (z - y(k)) / dy * hr;
        const double deriv = hr / dy;
        out(i) = deriv * interp_regular(r.grid, r.values, xinv);
    }
    return Density1D::floored(out_grid, std::move(out), 1e-12);
}

Density1D cdt_inverse(const CdtFunction& shat, const Density1D& r) {
    return cdt_inverse(shat, r, shat.grid);
}

double w2_distance(const Density1D& s1, const Density1D& s2,
                   const Density1D& r) {
    const CdtFunction a = cdt_forward(s1, r);
    const CdtFunction b = cdt_forward(s2, r);
    const Eigen::VectorXd integrand =
        (a.values - b.values).array().square() * r.values.array();
    const double sq = trapezoid_mass(r.grid, integrand);
    return std::sqrt(std::max(0.0, sq));
}

} // namespace rcdt
