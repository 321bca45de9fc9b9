#ifndef RCDT_RCDT_HPP
#define RCDT_RCDT_HPP

#include <Eigen/Core>
#include <optional>
#include <utility>

#include "rcdt/cdt.hpp"
#include "rcdt/density.hpp"
#include "rcdt/radon.hpp"

namespace rcdt {

/// R-CDT field shat(t, theta): per-angle CDT of the sinogram columns.
/// Flattening is column-major (angle-major), matching Eigen's storage.
struct RcdtField {
    ProjectionGrid proj;
    Eigen::MatrixXd values; // n_offsets x n_angles, each column increasing

    Eigen::VectorXd flattened() const {
        return Eigen::Map<const Eigen::VectorXd>(values.data(), values.size());
    }
};

/// Radon transform followed by the per-angle CDT against ref1d. Each sinogram
/// column gets the positivity floor (epsilon) before the CDT.
RcdtField rcdt_forward(const Density2D& s, const Density1D& ref1d,
                       const ProjectionGrid& proj, double epsilon = 1e-8);

/// Per-angle CDT inversion to rebuild the sinogram, then filtered
/// back-projection. Throws non_monotone_input if a column is not increasing.
Density2D rcdt_inverse(const RcdtField& field, const Density1D& ref1d,
                       std::optional<std::pair<int, int>> shape = {},
                       double pixel_spacing = 1.0);

/// Sliced-Wasserstein distance in transform space: per-angle W2^2 against the
/// shared reference, averaged over the uniform angle grid.
double sw2_distance(const Density2D& s1, const Density2D& s2,
                    const Density1D& ref1d, const ProjectionGrid& proj,
                    double epsilon = 1e-8);

/// Spanning pair absorbing image translations: u1(t, theta) = cos(theta),
/// u2(t, theta) = sin(theta), constant in t, flattened like RcdtField.
std::pair<Eigen::VectorXd, Eigen::VectorXd>
translation_spanning_vectors(const ProjectionGrid& proj);

} // namespace rcdt

#endif // RCDT_RCDT_HPP
