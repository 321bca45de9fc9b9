#include <doctest.h>

#include <cmath>

#include "rcdt/errors.hpp"
#include "rcdt/radon.hpp"
#include "support/generators.hpp"

using namespace rcdt;

TEST_CASE("centered isotropic blob projects identically at every angle") {
    const Density2D d = normalize_to_density2d(gen::centered_blob(48, 48), 1e-8);
    const ProjectionGrid proj = default_projection_grid(48, 48, 36);
    const Sinogram sg = radon_forward(d, proj);
    const Eigen::VectorXd first = sg.values.col(0);
    for (int j = 1; j < proj.n_angles(); ++j)
        CHECK((sg.values.col(j) - first).norm() / first.norm() < 1e-3);
}

TEST_CASE("per-angle intensity equality") {
    Rng rng(101);
    for (int trial = 0; trial < 5; ++trial) {
        const Density2D d =
            normalize_to_density2d(gen::blob_image(rng, 40, 40), 1e-8);
        const ProjectionGrid proj = default_projection_grid(40, 40, 24);

        const Sinogram raw = radon_forward_raw(d, proj);
        double lo = 1e300, hi = -1e300;
        for (int j = 0; j < proj.n_angles(); ++j) {
            const double mass = trapezoid_mass(proj.t_grid, raw.values.col(j));
            lo = std::min(lo, mass);
            hi = std::max(hi, mass);
        }
        CHECK((hi - lo) / hi < 1e-3); // before renormalization

        const Sinogram sg = radon_forward(d, proj);
        for (int j = 0; j < proj.n_angles(); ++j)
            CHECK(trapezoid_mass(proj.t_grid, sg.values.col(j)) ==
                  doctest::Approx(1.0).epsilon(1e-12));
        CHECK(sg.values.minCoeff() >= 0.0);
    }
}

TEST_CASE("projection centroid is the projected centroid") {
    const int n = 64;
    const double x0 = 6.0, y0 = -4.0;
    Eigen::MatrixXd img(n, n);
    const double cy = 0.5 * (n - 1), cx = 0.5 * (n - 1);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            const double zy = (r - cy - y0) / 3.0, zx = (c - cx - x0) / 3.0;
            img(r, c) = std::exp(-0.5 * (zy * zy + zx * zx));
        }
    const Density2D d = normalize_to_density2d(img, 1e-8);
    const ProjectionGrid proj = default_projection_grid(n, n, 16);
    const Sinogram sg = radon_forward(d, proj);

    for (int j = 0; j < proj.n_angles(); ++j) {
        const Eigen::VectorXd weighted =
            sg.values.col(j).cwiseProduct(proj.t_grid.points());
        const double centroid = trapezoid_mass(proj.t_grid, weighted);
        const double expected =
            x0 * std::cos(proj.thetas[j]) + y0 * std::sin(proj.thetas[j]);
        CHECK(std::abs(centroid - expected) < proj.t_grid.spacing());
    }
}

TEST_CASE("t range must cover the support") {
    const Density2D d = normalize_to_density2d(gen::centered_blob(32, 32), 1e-8);
    ProjectionGrid tight(Grid1D(20, -10.0, 10.0), {0.0, 1.0});
    try {
        radon_forward(d, tight);
        FAIL("expected GridTooSmall");
    } catch (const Error& e) {
        CHECK(e.code() == errc::grid_too_small);
    }
}

TEST_CASE("filtered back-projection round trip") {
    Rng rng(202);
    const Density2D d =
        normalize_to_density2d(gen::blob_image(rng, 64, 64), 1e-8);
    const ProjectionGrid proj = default_projection_grid(64, 64, 180);
    const Density2D back =
        radon_inverse(radon_forward(d, proj), std::make_pair(64, 64));
    CHECK(gen::rel_l2(back.values, d.values) < 0.05);
}

TEST_CASE("uniform disk reconstructs with a flat interior") {
    const int n = 64;
    Eigen::MatrixXd img = Eigen::MatrixXd::Zero(n, n);
    const double c = 0.5 * (n - 1), radius = 20.0;
    for (int r = 0; r < n; ++r)
        for (int col = 0; col < n; ++col)
            if (std::hypot(r - c, col - c) <= radius) img(r, col) = 1.0;
    const Density2D d = normalize_to_density2d(img, 1e-8);
    const ProjectionGrid proj = default_projection_grid(n, n, 180);
    const Density2D back =
        radon_inverse(radon_forward(d, proj), std::make_pair(n, n));

    std::vector<double> interior;
    for (int r = 0; r < n; ++r)
        for (int col = 0; col < n; ++col)
            if (std::hypot(r - c, col - c) <= 0.7 * radius)
                interior.push_back(back.values(r, col));
    double mean = 0.0;
    for (double v : interior) mean += v;
    mean /= static_cast<double>(interior.size());
    for (double v : interior) CHECK(std::abs(v - mean) / mean < 0.10);
}

TEST_CASE("degenerate sinogram inputs") {
    const ProjectionGrid proj = default_projection_grid(16, 16, 18);
    SUBCASE("all-zero sinogram cannot be renormalized") {
        Sinogram zero{proj, Eigen::MatrixXd::Zero(proj.n_offsets(),
                                                  proj.n_angles())};
        try {
            radon_inverse(zero);
            FAIL("expected AllZeroImage");
        } catch (const Error& e) {
            CHECK(e.code() == errc::all_zero_image);
        }
    }
    SUBCASE("below 16 angles only warns") {
        const Density2D d =
            normalize_to_density2d(gen::centered_blob(16, 16), 1e-8);
        const ProjectionGrid few = default_projection_grid(16, 16, 8);
        const Density2D back = radon_inverse(radon_forward(d, few));
        CHECK(back.mass() == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("default reconstruction shape is the inscribed square") {
    const ProjectionGrid proj = default_projection_grid(28, 28, 32);
    const Density2D d = normalize_to_density2d(gen::centered_blob(28, 28), 1e-8);
    const Density2D back = radon_inverse(radon_forward(d, proj));
    CHECK(back.height == 28);
    CHECK(back.width == 28);
}
