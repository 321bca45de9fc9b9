// Seeded random inputs shared across the test suites.
#ifndef RCDT_TESTS_GENERATORS_HPP
#define RCDT_TESTS_GENERATORS_HPP

#include <Eigen/Core>
#include <cmath>

#include "rcdt/density.hpp"
#include "rcdt/rng.hpp"

namespace gen {

/// Smooth random density: mixture of 2..4 Gaussians well inside the grid.
inline rcdt::Density1D mixture_density(rcdt::Rng& rng, const rcdt::Grid1D& grid,
                                       double center_span = 0.5,
                                       double epsilon = 1e-8) {
    const int k = 2 + static_cast<int>(rng.uniform_index(3));
    const double mid = 0.5 * (grid.x_min + grid.x_max);
    const double half = 0.5 * grid.length();
    Eigen::VectorXd v = Eigen::VectorXd::Zero(grid.n_points);
    for (int c = 0; c < k; ++c) {
        const double mu = mid + center_span * half * rng.uniform(-1.0, 1.0);
        const double sigma = half * rng.uniform(0.05, 0.15);
        const double amp = rng.uniform(0.3, 1.0);
        for (int i = 0; i < grid.n_points; ++i) {
            const double z = (grid.point(i) - mu) / sigma;
            v(i) += amp * std::exp(-0.5 * z * z);
        }
    }
    return rcdt::Density1D::floored(grid, std::move(v), epsilon);
}

/// Smooth random image: mixture of 2..4 anisotropic Gaussian blobs with the
/// support kept `margin` pixels away from the border.
inline Eigen::MatrixXd blob_image(rcdt::Rng& rng, int height, int width,
                                  double margin = 0.3) {
    const int k = 2 + static_cast<int>(rng.uniform_index(3));
    const double cy = 0.5 * (height - 1), cx = 0.5 * (width - 1);
    Eigen::MatrixXd img = Eigen::MatrixXd::Zero(height, width);
    for (int c = 0; c < k; ++c) {
        const double by = cy + (1.0 - margin) * cy * rng.uniform(-0.55, 0.55);
        const double bx = cx + (1.0 - margin) * cx * rng.uniform(-0.55, 0.55);
        const double sy = rng.uniform(0.05, 0.12) * height;
        const double sx = rng.uniform(0.05, 0.12) * width;
        const double amp = rng.uniform(0.3, 1.0);
        for (int r = 0; r < height; ++r)
            for (int col = 0; col < width; ++col) {
                const double zy = (r - by) / sy;
                const double zx = (col - bx) / sx;
                img(r, col) += amp * std::exp(-0.5 * (zy * zy + zx * zx));
            }
    }
    return img;
}

/// Centered isotropic Gaussian blob.
inline Eigen::MatrixXd centered_blob(int height, int width, double sigma_frac = 0.12) {
    const double cy = 0.5 * (height - 1), cx = 0.5 * (width - 1);
    const double s = sigma_frac * std::min(height, width);
    Eigen::MatrixXd img(height, width);
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) {
            const double zy = (r - cy) / s, zx = (c - cx) / s;
            img(r, c) = std::exp(-0.5 * (zy * zy + zx * zx));
        }
    return img;
}

inline double rel_l2(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return (a - b).norm() / b.norm();
}

inline double rel_l2(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a - b).norm() / b.norm();
}

} // namespace gen

#endif // RCDT_TESTS_GENERATORS_HPP
