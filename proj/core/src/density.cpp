#include "rcdt/density.hpp"

#include "rcdt/errors.hpp"

namespace rcdt {

double trapezoid_mass(const Grid1D& grid, const Eigen::VectorXd& values) {
    if (values.size() != grid.n_points)
        throw_error(errc::dimension_mismatch, "sample count != grid points");
    const double h = grid.spacing();
    return h * (values.sum() - 0.5 * (values(0) + values(values.size() - 1)));
}

Density1D Density1D::normalized(const Grid1D& grid, Eigen::VectorXd values) {
    if (values.size() != grid.n_points)
        throw_error(errc::dimension_mismatch, "sample count != grid points");
    if ((values.array() <= 0.0).any())
        throw_error(errc::invalid_argument, "density samples must be > 0");
    const double mass = trapezoid_mass(grid, values);
    values /= mass;
    return Density1D{grid, std::move(values)};
}

Density1D Density1D::floored(const Grid1D& grid, Eigen::VectorXd values,
                             double epsilon) {
    if (!(epsilon > 0.0))
        throw_error(errc::invalid_argument, "epsilon must be > 0");
    values = values.cwiseMax(0.0);
    const double peak = values.maxCoeff();
    if (!(peak > 0.0))
        throw_error(errc::all_zero_image, "no strictly positive sample");
    values.array() += epsilon * peak;
    return normalized(grid, std::move(values));
}

Density1D make_uniform_reference1d(const Grid1D& grid) {
    Eigen::VectorXd values =
        Eigen::VectorXd::Constant(grid.n_points, 1.0 / grid.length());
    return Density1D{grid, std::move(values)};
}

Density2D normalize_to_density2d(const Eigen::MatrixXd& raw, double epsilon,
                                 double pixel_spacing) {
    if (raw.rows() < 1 || raw.cols() < 1)
        throw_error(errc::invalid_argument, "empty image");
    if (!(epsilon > 0.0))
        throw_error(errc::invalid_argument, "epsilon must be > 0");
    if (!(pixel_spacing > 0.0))
        throw_error(errc::invalid_argument, "pixel spacing must be > 0");

    Eigen::MatrixXd values = raw.cwiseMax(0.0);
    const double peak = values.maxCoeff();
    if (!(peak > 0.0))
        throw_error(errc::all_zero_image, "image has no strictly positive pixel");

    values.array() += epsilon * peak;
    const double mass = values.sum() * pixel_spacing * pixel_spacing;
    values /= mass;
    return Density2D{static_cast<int>(raw.rows()), static_cast<int>(raw.cols()),
                     std::move(values), pixel_spacing};
}

} // namespace rcdt
