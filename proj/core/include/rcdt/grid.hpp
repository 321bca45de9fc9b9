#ifndef RCDT_GRID_HPP
#define RCDT_GRID_HPP

#include <Eigen/Core>
#include <vector>

namespace rcdt {

/// Regular 1D grid with n_points equally spaced samples on [x_min, x_max].
struct Grid1D {
    int n_points = 0;
    double x_min = 0.0;
    double x_max = 0.0;

    Grid1D() = default;
    Grid1D(int n_points, double x_min, double x_max);

    double spacing() const { return (x_max - x_min) / (n_points - 1); }
    double point(int i) const { return x_min + i * spacing(); }
    double length() const { return x_max - x_min; }
    Eigen::VectorXd points() const;

    bool operator==(const Grid1D&) const = default;
};

bool approx_same_grid(const Grid1D& a, const Grid1D& b, double tol = 1e-9);

/// Offset/angle grid of a sinogram: t axis (m points) times n angles in
/// [0, pi), equally spaced with the endpoint excluded and theta_0 = 0.
struct ProjectionGrid {
    Grid1D t_grid;
    std::vector<double> thetas;

    ProjectionGrid() = default;
    ProjectionGrid(Grid1D t_grid, std::vector<double> thetas);

    int n_offsets() const { return t_grid.n_points; }
    int n_angles() const { return static_cast<int>(thetas.size()); }
    long flat_size() const { return static_cast<long>(n_offsets()) * n_angles(); }
};

/// Builds the default grid for a height x width image: symmetric t range of
/// ceil(sqrt(h^2 + w^2)) points covering the image diagonal (minimum 2), and
/// n_angles equally spaced angles in [0, pi).
ProjectionGrid default_projection_grid(int height, int width, int n_angles,
                                       double pixel_spacing = 1.0);

} // namespace rcdt

#endif // RCDT_GRID_HPP
