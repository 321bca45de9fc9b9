#include "rcdt/rcdt.hpp"

#include <cmath>

#include "rcdt/errors.hpp"

namespace rcdt {

namespace {

void check_reference(const Density1D& ref1d, const ProjectionGrid& proj) {
    if (!approx_same_grid(ref1d.grid, proj.t_grid))
        throw_error(errc::dimension_mismatch,
                    "reference density must live on the projection t grid");
}

} // namespace

RcdtField rcdt_forward(const Density2D& s, const Density1D& ref1d,
                       const ProjectionGrid& proj, double epsilon) {
    check_reference(ref1d, proj);
    const Sinogram sg = radon_forward(s, proj);

    Eigen::MatrixXd field(proj.n_offsets(), proj.n_angles());
    for (int j = 0; j < proj.n_angles(); ++j) {
        Density1D col = Density1D::floored(proj.t_grid, sg.values.col(j), epsilon);
        field.col(j) = cdt_forward(col, ref1d).values;
    }
    return RcdtField{proj, std::move(field)};
}

Density2D rcdt_inverse(const RcdtField& field, const Density1D& ref1d,
                       std::optional<std::pair<int, int>> shape,
                       double pixel_spacing) {
    check_reference(ref1d, field.proj);
    const int m = field.proj.n_offsets();
    const int n = field.proj.n_angles();
    if (field.values.rows() != m || field.values.cols() != n)
        throw_error(errc::dimension_mismatch, "field does not match its grid");

    Eigen::MatrixXd sino(m, n);
    for (int j = 0; j < n; ++j) {
        CdtFunction shat{field.proj.t_grid, field.values.col(j)};
        sino.col(j) = cdt_inverse(shat, ref1d, field.proj.t_grid).values;
    }
    return radon_inverse(Sinogram{field.proj, std::move(sino)}, shape,
                         pixel_spacing);
}

double sw2_distance(const Density2D& s1, const Density2D& s2,
                    const Density1D& ref1d, const ProjectionGrid& proj,
                    double epsilon) {
    const RcdtField f1 = rcdt_forward(s1, ref1d, proj, epsilon);
    const RcdtField f2 = rcdt_forward(s2, ref1d, proj, epsilon);

    // Mean over the uniform angle grid of the per-angle embedded W2^2.
    double acc = 0.0;
    for (int j = 0; j < proj.n_angles(); ++j) {
        const Eigen::VectorXd integrand =
            (f1.values.col(j) - f2.values.col(j)).array().square() *
            ref1d.values.array();
        acc += trapezoid_mass(proj.t_grid, integrand);
    }
    return std::sqrt(std::max(0.0, acc / proj.n_angles()));
}

std::pair<Eigen::VectorXd, Eigen::VectorXd>
translation_spanning_vectors(const ProjectionGrid& proj) {
    const int m = proj.n_offsets();
    const int n = proj.n_angles();
    Eigen::VectorXd u1(static_cast<long>(m) * n), u2(static_cast<long>(m) * n);
    for (int j = 0; j < n; ++j) {
        u1.segment(static_cast<long>(j) * m, m)
            .setConstant(std::cos(proj.thetas[j]));
        u2.segment(static_cast<long>(j) * m, m)
            .setConstant(std::sin(proj.thetas[j]));
    }
    return {std::move(u1), std::move(u2)};
}

} // namespace rcdt
