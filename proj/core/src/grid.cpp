#include "rcdt/grid.hpp"

#include <cmath>

#include "rcdt/errors.hpp"

namespace rcdt {

Grid1D::Grid1D(int n_points_, double x_min_, double x_max_)
    : n_points(n_points_), x_min(x_min_), x_max(x_max_) {
    if (n_points < 2)
        throw_error(errc::invalid_argument, "Grid1D needs at least 2 points");
    if (!(x_max > x_min))
        throw_error(errc::invalid_argument, "Grid1D needs x_max > x_min");
}

Eigen::VectorXd Grid1D::points() const {
    return Eigen::VectorXd::LinSpaced(n_points, x_min, x_max);
}

bool approx_same_grid(const Grid1D& a, const Grid1D& b, double tol) {
    return a.n_points == b.n_points && std::abs(a.x_min - b.x_min) <= tol &&
           std::abs(a.x_max - b.x_max) <= tol;
}

ProjectionGrid::ProjectionGrid(Grid1D t_grid_, std::vector<double> thetas_)
    : t_grid(t_grid_), thetas(std::move(thetas_)) {
    if (thetas.empty())
        throw_error(errc::invalid_argument, "ProjectionGrid needs >= 1 angle");
    if (thetas.front() != 0.0)
        throw_error(errc::invalid_argument, "first angle must be 0");
    const double pi = 3.14159265358979323846;
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        if (thetas[i] < 0.0 || thetas[i] >= pi)
            throw_error(errc::invalid_argument, "angles must lie in [0, pi)");
        if (i > 0 && !(thetas[i] > thetas[i - 1]))
            throw_error(errc::invalid_argument, "angles must be strictly increasing");
    }
}

ProjectionGrid default_projection_grid(int height, int width, int n_angles,
                                       double pixel_spacing) {
    if (height < 1 || width < 1)
        throw_error(errc::invalid_argument, "image dimensions must be positive");
    if (n_angles < 1)
        throw_error(errc::invalid_argument, "need at least one angle");
    if (!(pixel_spacing > 0.0))
        throw_error(errc::invalid_argument, "pixel spacing must be positive");

    const double diag = std::hypot(static_cast<double>(height),
                                   static_cast<double>(width));
    const int m = std::max(2, static_cast<int>(std::ceil(diag)));
    const double half = 0.5 * diag * pixel_spacing;
    Grid1D t_grid(m, -half, half);

    const double pi = 3.14159265358979323846;
    std::vector<double> thetas(n_angles);
    for (int j = 0; j < n_angles; ++j)
        thetas[j] = pi * static_cast<double>(j) / static_cast<double>(n_angles);
    return ProjectionGrid(t_grid, std::move(thetas));
}

} // namespace rcdt
