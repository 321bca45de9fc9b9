#ifndef RCDT_RADON_HPP
#define RCDT_RADON_HPP

#include <Eigen/Core>
#include <optional>

#include "rcdt/density.hpp"
#include "rcdt/grid.hpp"

namespace rcdt {

/// Discrete Radon transform s~(t, theta); column j holds the projection at
/// angle theta_j. Per-angle masses are equal (unit after normalization).
struct Sinogram {
    ProjectionGrid proj;
    Eigen::MatrixXd values; // n_offsets x n_angles
};

/// Line-integral projections by image rotation with bilinear interpolation
/// followed by summation along the perpendicular axis. Columns keep their raw
/// quadrature mass (ideally 1 up to interpolation loss).
/// Throws grid_too_small when the t range does not cover the image diagonal.
Sinogram radon_forward_raw(const Density2D& s, const ProjectionGrid& proj);

/// radon_forward_raw with each column rescaled to exact unit trapezoid mass,
/// enforcing the per-angle intensity equality in discrete form.
Sinogram radon_forward(const Density2D& s, const ProjectionGrid& proj);

/// Filtered back-projection with a frequency-domain ramp filter on the t axis
/// (zero-padded to the next power of two). Output clipped at zero and
/// renormalized. Warns on stderr below 16 angles.
/// Default output shape is the largest square covered by the t range.
Density2D radon_inverse(const Sinogram& sg,
                        std::optional<std::pair<int, int>> shape = {},
                        double pixel_spacing = 1.0);

} // namespace rcdt

#endif // RCDT_RADON_HPP
