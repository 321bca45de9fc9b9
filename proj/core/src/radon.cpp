#include "rcdt/radon.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <cstdio>

#include "rcdt/errors.hpp"

namespace rcdt {

namespace {

inline double bilinear_at(const double* data, int height, int width,
                          double row, double col) {
    if (row <= -1.0 || col <= -1.0 || row >= height || col >= width)
        return 0.0;
    const int r0 = static_cast<int>(std::floor(row));
    const int c0 = static_cast<int>(std::floor(col));
    const double wr = row - r0;
    const double wc = col - c0;
    auto at = [&](int r, int c) -> double {
        if (r < 0 || c < 0 || r >= height || c >= width) return 0.0;
        return data[static_cast<long>(c) * height + r];
    };
    return (1.0 - wr) * ((1.0 - wc) * at(r0, c0) + wc * at(r0, c0 + 1)) +
           wr * ((1.0 - wc) * at(r0 + 1, c0) + wc * at(r0 + 1, c0 + 1));
}

int next_pow2(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace

Sinogram radon_forward_raw(const Density2D& s, const ProjectionGrid& proj) {
    const double half_diag =
        0.5 * std::hypot(static_cast<double>(s.height),
                         static_cast<double>(s.width)) * s.pixel_spacing;
    const double tol = 1e-9 * (1.0 + std::abs(proj.t_grid.x_max));
    if (proj.t_grid.x_max + tol < half_diag ||
        -proj.t_grid.x_min + tol < half_diag)
        throw_error(errc::grid_too_small,
                    "t range does not cover the image diagonal");

    const int m = proj.n_offsets();
    const int n = proj.n_angles();
    const double ht = proj.t_grid.spacing();
    const double ps = s.pixel_spacing;
    const double cy = 0.5 * (s.height - 1);
    const double cx = 0.5 * (s.width - 1);
    const double* data = s.values.data();

    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, n);
    for (int j = 0; j < n; ++j) {
        const double c = std::cos(proj.thetas[j]);
        const double sn = std::sin(proj.thetas[j]);
        double* col = out.col(j).data();
        // Sample the image on the rotated (t, v) lattice; v reuses the t
        // axis, which covers the support for every angle.
        for (int k = 0; k < m; ++k) {
            const double v = proj.t_grid.point(k);
            double x = proj.t_grid.x_min * c - v * sn;
            double y = proj.t_grid.x_min * sn + v * c;
            const double dx = ht * c;
            const double dy = ht * sn;
            for (int i = 0; i < m; ++i) {
                col[i] += bilinear_at(data, s.height, s.width, y / ps + cy,
                                      x / ps + cx);
                x += dx;
                y += dy;
            }
        }
        out.col(j) *= ht * ps; // line-integral quadrature weight
    }
    return Sinogram{proj, std::move(out)};
}

Sinogram radon_forward(const Density2D& s, const ProjectionGrid& proj) {
    Sinogram sg = radon_forward_raw(s, proj);
    for (int j = 0; j < sg.proj.n_angles(); ++j) {
        const double mass = trapezoid_mass(sg.proj.t_grid, sg.values.col(j));
        if (!(mass > 0.0))
            throw_error(errc::all_zero_image, "projection column has no mass");
        sg.values.col(j) /= mass;
    }
    return sg;
}

Density2D radon_inverse(const Sinogram& sg,
                        std::optional<std::pair<int, int>> shape,
                        double pixel_spacing) {
    const int m = sg.proj.n_offsets();
    const int n = sg.proj.n_angles();
    if (sg.values.rows() != m || sg.values.cols() != n)
        throw_error(errc::dimension_mismatch, "sinogram does not match its grid");
    if (n < 16)
        std::fprintf(stderr,
                     "rcdt: warning: TooFewAngles: filtered back-projection "
                     "with %d angles (>= 16 recommended)\n", n);

    const double ht = sg.proj.t_grid.spacing();
    const int padded = next_pow2(2 * m);

    // Ramp filter |xi| applied in the frequency domain of the t axis.
    Eigen::VectorXd ramp(padded);
    for (int k = 0; k < padded; ++k)
        ramp(k) = static_cast<double>(std::min(k, padded - k)) / (padded * ht);

    Eigen::FFT<double> fft;
    Eigen::MatrixXd filtered(m, n);
    Eigen::VectorXcd buf(padded), freq(padded);
    for (int j = 0; j < n; ++j) {
        buf.setZero();
        for (int i = 0; i < m; ++i) buf(i) = std::complex<double>(sg.values(i, j), 0.0);
        fft.fwd(freq, buf);
        freq.array() *= ramp.array();
        fft.inv(buf, freq);
        for (int i = 0; i < m; ++i) filtered(i, j) = buf(i).real();
    }

    int height, width;
    if (shape) {
        height = shape->first;
        width = shape->second;
        if (height < 1 || width < 1)
            throw_error(errc::invalid_argument, "output shape must be positive");
    } else {
        const double side = std::sqrt(2.0) * sg.proj.t_grid.x_max / pixel_spacing;
        height = width = std::max(2, static_cast<int>(std::lround(side)));
    }

    const double pi = 3.14159265358979323846;
    const double dtheta = pi / n;
    const double cy = 0.5 * (height - 1);
    const double cx = 0.5 * (width - 1);

    Eigen::MatrixXd recon = Eigen::MatrixXd::Zero(height, width);
    for (int j = 0; j < n; ++j) {
        const double c = std::cos(sg.proj.thetas[j]);
        const double sn = std::sin(sg.proj.thetas[j]);
        const double* q = filtered.col(j).data();
        for (int col = 0; col < width; ++col) {
            const double x = (col - cx) * pixel_spacing;
            for (int row = 0; row < height; ++row) {
                const double y = (row - cy) * pixel_spacing;
                const double t = x * c + y * sn;
                const double pos = (t - sg.proj.t_grid.x_min) / ht;
                if (pos < 0.0 || pos > m - 1) continue;
                const int k = std::min(static_cast<int>(pos), m - 2);
                const double w = pos - k;
                recon(row, col) += (1.0 - w) * q[k] + w * q[k + 1];
            }
        }
    }
    recon *= dtheta;
    return normalize_to_density2d(recon.cwiseMax(0.0), 1e-12, pixel_spacing);
}

} // namespace rcdt
