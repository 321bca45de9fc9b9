#ifndef RCDT_DENSITY_HPP
#define RCDT_DENSITY_HPP

#include <Eigen/Core>

#include "rcdt/grid.hpp"

namespace rcdt {

/// Trapezoid-rule integral of samples over a regular grid.
double trapezoid_mass(const Grid1D& grid, const Eigen::VectorXd& values);

/// Strictly positive sampled density with unit trapezoid mass.
struct Density1D {
    Grid1D grid;
    Eigen::VectorXd values;

    /// Rescales strictly positive samples to unit mass. Throws
    /// invalid_argument if any sample is <= 0.
    static Density1D normalized(const Grid1D& grid, Eigen::VectorXd values);

    /// Clips negatives, adds a uniform floor of epsilon * max(values), then
    /// normalizes. Throws all_zero_image if nothing is positive.
    static Density1D floored(const Grid1D& grid, Eigen::VectorXd values,
                             double epsilon);

    double mass() const { return trapezoid_mass(grid, values); }
};

/// Uniform density 1/(x_max - x_min); exact unit mass under the trapezoid rule.
Density1D make_uniform_reference1d(const Grid1D& grid);

/// Strictly positive image density; sum(values) * pixel_spacing^2 == 1.
struct Density2D {
    int height = 0;
    int width = 0;
    Eigen::MatrixXd values; // height x width, row index = y, col index = x
    double pixel_spacing = 1.0;

    double mass() const {
        return values.sum() * pixel_spacing * pixel_spacing;
    }
};

/// Normalizes a raw nonnegative image to a strictly positive unit-mass
/// density: clip(raw, 0, inf) + epsilon * max(raw), rescaled. Throws
/// all_zero_image when raw has no strictly positive entry.
Density2D normalize_to_density2d(const Eigen::MatrixXd& raw,
                                 double epsilon = 1e-8,
                                 double pixel_spacing = 1.0);

} // namespace rcdt

#endif // RCDT_DENSITY_HPP
