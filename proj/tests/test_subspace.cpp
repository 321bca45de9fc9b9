#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rcdt/errors.hpp"
#include "rcdt/model_io.hpp"
#include "rcdt/subspace.hpp"
#include "support/generators.hpp"

using namespace rcdt;

namespace {

const ProjectionGrid& small_grid() {
    static const ProjectionGrid proj = default_projection_grid(16, 16, 8);
    return proj;
}

Eigen::MatrixXd random_orthonormal(Rng& rng, long rows, long cols) {
    Eigen::MatrixXd a(rows, cols);
    for (long j = 0; j < cols; ++j)
        for (long i = 0; i < rows; ++i) a(i, j) = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    return qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
}

LabeledImageSet two_class_translated(int n_per_class, std::uint64_t seed) {
    const auto templates = synthetic_templates(2, 24);
    ConfoundSpec spec{0.0, 4.0, 1.0, 1.0, seed};
    return generate_synthetic_dataset(templates, spec, n_per_class, 40, 40);
}

} // namespace

TEST_CASE("single sample without enrichment spans itself") {
    const ProjectionGrid& proj = small_grid();
    Rng rng(501);
    Eigen::MatrixXd cols(proj.flat_size(), 1);
    for (long i = 0; i < cols.rows(); ++i) cols(i, 0) = rng.normal();

    const ClassBasis basis = fit_class_subspace_cols(cols, false, 0.99, proj, 0);
    CHECK(basis.rank() == 1);
    const Eigen::VectorXd expected = cols.col(0) / cols.col(0).norm();
    CHECK((basis.basis.col(0) - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("enrichment adds the two spanning directions") {
    const ProjectionGrid& proj = small_grid();
    const auto [u1, u2] = translation_spanning_vectors(proj);
    Rng rng(502);
    Eigen::VectorXd sample(proj.flat_size());
    for (long i = 0; i < sample.size(); ++i) sample(i) = rng.normal();
    // make the sample orthogonal to the spanning pair
    sample -= u1.dot(sample) / u1.squaredNorm() * u1;
    sample -= u2.dot(sample) / u2.squaredNorm() * u2;

    const ClassBasis basis =
        fit_class_subspace_cols(sample, true, 1.0, proj, 0);
    CHECK(basis.rank() == 3);
    CHECK((basis.basis.transpose() * basis.basis -
           Eigen::MatrixXd::Identity(3, 3))
              .cwiseAbs()
              .maxCoeff() < 1e-8);
}

TEST_CASE("duplicated samples do not change the subspace") {
    const ProjectionGrid& proj = small_grid();
    Rng rng(503);
    Eigen::MatrixXd one(proj.flat_size(), 1);
    for (long i = 0; i < one.rows(); ++i) one(i, 0) = rng.normal();
    Eigen::MatrixXd two(proj.flat_size(), 2);
    two.col(0) = one.col(0);
    two.col(1) = one.col(0);

    const ClassBasis a = fit_class_subspace_cols(one, false, 0.99, proj, 0);
    const ClassBasis b = fit_class_subspace_cols(two, false, 0.99, proj, 0);
    CHECK(a.rank() == b.rank());
    const Eigen::MatrixXd pa = a.basis * a.basis.transpose();
    const Eigen::MatrixXd pb = b.basis * b.basis.transpose();
    CHECK((pa - pb).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("subspace distance") {
    const ProjectionGrid& proj = small_grid();
    Rng rng(504);
    const long dim = proj.flat_size();
    const Eigen::MatrixXd b = random_orthonormal(rng, dim, 5);
    ClassBasis basis{0, b, Eigen::VectorXd::Ones(5)};

    SUBCASE("points inside the span") {
        Eigen::VectorXd coeff(5);
        for (int i = 0; i < 5; ++i) coeff(i) = rng.normal();
        const Eigen::VectorXd inside = b * coeff;
        CHECK(subspace_distance(inside, basis) < 1e-9 * inside.squaredNorm());
    }
    SUBCASE("points orthogonal to the span") {
        Eigen::VectorXd v(dim);
        for (long i = 0; i < dim; ++i) v(i) = rng.normal();
        const Eigen::VectorXd ortho = v - b * (b.transpose() * v);
        CHECK(subspace_distance(ortho, basis) ==
              doctest::Approx(ortho.squaredNorm()).epsilon(1e-9));
    }
    SUBCASE("matches the explicit residual formula") {
        for (int trial = 0; trial < 20; ++trial) {
            Eigen::VectorXd v(dim);
            for (long i = 0; i < dim; ++i) v(i) = rng.normal();
            const double fast = subspace_distance(v, basis);
            const double full = (v - b * (b.transpose() * v)).squaredNorm();
            CHECK(std::abs(fast - full) < 1e-9 * std::max(1.0, full));
        }
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(subspace_distance(Eigen::VectorXd::Ones(dim + 1), basis),
                        Error);
    }
}

TEST_CASE("fit on a two-class single-sample problem") {
    LabeledImageSet data = two_class_translated(1, 77);
    TrainConfig cfg;
    cfg.n_angles = 24;
    const Model model = fit(data, cfg);
    REQUIRE(model.num_classes() == 2);
    for (const auto& cls : model.classes) CHECK(cls.rank() <= 3);
}

TEST_CASE("sample order does not change the projector") {
    LabeledImageSet data = two_class_translated(4, 78);
    TrainConfig cfg;
    cfg.n_angles = 12;
    const Model a = fit(data, cfg);

    // reverse the sample order
    LabeledImageSet shuffled;
    for (int i = static_cast<int>(data.images.size()) - 1; i >= 0; --i) {
        shuffled.images.push_back(data.images[i]);
        shuffled.labels.push_back(data.labels[i]);
    }
    const Model b = fit(shuffled, cfg);

    for (int k = 0; k < 2; ++k) {
        const Eigen::MatrixXd pa =
            a.classes[k].basis * a.classes[k].basis.transpose();
        const Eigen::MatrixXd pb =
            b.classes[k].basis * b.classes[k].basis.transpose();
        CHECK((pa - pb).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("variance fraction 1.0 keeps the numerical rank") {
    const ProjectionGrid& proj = small_grid();
    Rng rng(505);
    Eigen::MatrixXd cols(proj.flat_size(), 4);
    for (long j = 0; j < 3; ++j)
        for (long i = 0; i < cols.rows(); ++i) cols(i, j) = rng.normal();
    cols.col(3) = cols.col(1); // duplicate
    const ClassBasis basis = fit_class_subspace_cols(cols, false, 1.0, proj, 0);
    CHECK(basis.rank() == 3);
}

TEST_CASE("training images classify back to their own class") {
    LabeledImageSet data = two_class_translated(3, 79);
    TrainConfig cfg;
    cfg.n_angles = 24;
    cfg.variance_fraction = 1.0;
    const Model model = fit(data, cfg);
    for (std::size_t i = 0; i < data.images.size(); ++i) {
        const Prediction pred = predict(data.images[i], model);
        CHECK(pred.label == data.labels[i]);
        CHECK(pred.distances(data.labels[i]) <
              1e-6 * pred.distances(1 - data.labels[i]));
    }
}

TEST_CASE("translated training image keeps its class under enrichment") {
    const auto templates = synthetic_templates(2, 24);
    ConfoundSpec spec{0.0, 0.0, 1.0, 1.0, 80};
    LabeledImageSet data = generate_synthetic_dataset(templates, spec, 1, 40, 40);
    TrainConfig cfg;
    cfg.n_angles = 32;
    const Model model = fit(data, cfg);

    for (int k = 0; k < 2; ++k) {
        const Eigen::MatrixXd moved =
            apply_confound(data.images[static_cast<std::size_t>(k)], 3.0, 0.0,
                           1.0, 40, 40);
        CHECK(predict(moved, model).label == k);
    }
}

TEST_CASE("shifts along the spanning pair leave the residual unchanged") {
    LabeledImageSet data = two_class_translated(2, 81);
    TrainConfig cfg;
    cfg.n_angles = 16;
    const Model model = fit(data, cfg);

    const auto [u1, u2] = translation_spanning_vectors(model.proj);
    const Density1D ref = model.reference();
    const Density2D d = normalize_to_density2d(data.images[0], model.epsilon);
    const Eigen::VectorXd shat =
        rcdt_forward(d, ref, model.proj, model.epsilon).flattened();

    const double base = subspace_distance(shat, model.classes[0]);
    const Eigen::VectorXd shifted = shat + 2.5 * u1 - 1.5 * u2;
    const double after = subspace_distance(shifted, model.classes[0]);
    CHECK(std::abs(after - base) <= 1e-6 * std::max(1.0, base));
}

TEST_CASE("rescaled fields stay in every subspace containing the original") {
    const auto templates = synthetic_templates(2, 24);
    ConfoundSpec spec{0.0, 0.0, 1.0, 1.0, 82};
    LabeledImageSet data = generate_synthetic_dataset(templates, spec, 1, 48, 48);
    TrainConfig cfg;
    cfg.n_angles = 32;
    const Model model = fit(data, cfg);

    for (double alpha : {0.8, 1.25}) {
        for (int k = 0; k < 2; ++k) {
            const Eigen::MatrixXd scaled =
                apply_confound(data.images[static_cast<std::size_t>(k)], 0.0,
                               0.0, alpha, 48, 48);
            CHECK(predict(scaled, model).label == k);
        }
    }
}

TEST_CASE("convexity: midpoints of same-class fields stay in class") {
    const auto templates = synthetic_templates(1, 24);
    ConfoundSpec spec{0.0, 4.0, 1.0, 1.0, 83};
    const LabeledImageSet data =
        generate_synthetic_dataset(templates, spec, 2, 40, 40);

    TrainConfig cfg;
    cfg.n_angles = 24;
    cfg.variance_fraction = 1.0;
    const Model model = fit(data, cfg);

    const Density1D ref = model.reference();
    Eigen::VectorXd f0 = rcdt_forward(normalize_to_density2d(data.images[0], 1e-8),
                                      ref, model.proj)
                             .flattened();
    Eigen::VectorXd f1 = rcdt_forward(normalize_to_density2d(data.images[1], 1e-8),
                                      ref, model.proj)
                             .flattened();
    const Eigen::VectorXd mid = 0.5 * (f0 + f1);
    CHECK(std::sqrt(subspace_distance(mid, model.classes[0])) <
          1e-3 * mid.norm());
}

TEST_CASE("separability on disjoint generative classes") {
    const auto templates = synthetic_templates(3, 24);
    ConfoundSpec train_spec{0.0, 4.0, 1.0, 1.0, 84};
    const LabeledImageSet train =
        generate_synthetic_dataset(templates, train_spec, 1, 48, 48);
    ConfoundSpec test_spec{0.0, 4.0, 1.0, 1.0, 85};
    const LabeledImageSet test =
        generate_synthetic_dataset(templates, test_spec, 10, 48, 48);

    TrainConfig cfg;
    cfg.n_angles = 32;
    const Model model = fit(train, cfg);
    for (std::size_t i = 0; i < test.images.size(); ++i) {
        const Prediction pred = predict(test.images[i], model);
        CHECK(pred.label == test.labels[i]);
        for (int k = 0; k < 3; ++k)
            if (k != test.labels[i])
                CHECK(pred.distances(test.labels[i]) < pred.distances(k));
    }
}

TEST_CASE("projector idempotence") {
    LabeledImageSet data = two_class_translated(3, 86);
    TrainConfig cfg;
    cfg.n_angles = 12;
    const Model model = fit(data, cfg);
    for (const auto& cls : model.classes) {
        const Eigen::MatrixXd a = cls.basis * cls.basis.transpose();
        CHECK((a * a - a).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("fit is deterministic") {
    LabeledImageSet data = two_class_translated(3, 87);
    TrainConfig cfg;
    cfg.n_angles = 16;
    const auto bytes_a = serialize_model(fit(data, cfg));
    const auto bytes_b = serialize_model(fit(data, cfg));
    CHECK(bytes_a == bytes_b);

    cfg.jobs = 4; // worker count must not change the result
    const auto bytes_c = serialize_model(fit(data, cfg));
    CHECK(bytes_a == bytes_c);
}

TEST_CASE("error paths") {
    SUBCASE("missing class index") {
        LabeledImageSet data = two_class_translated(2, 88);
        for (int& label : data.labels)
            if (label == 1) label = 2; // class 1 now empty
        TrainConfig cfg;
        cfg.n_angles = 8;
        try {
            fit(data, cfg);
            FAIL("expected MissingClass");
        } catch (const Error& e) {
            CHECK(e.code() == errc::missing_class);
        }
    }
    SUBCASE("degenerate class") {
        const ProjectionGrid& proj = small_grid();
        Eigen::MatrixXd zeros = Eigen::MatrixXd::Zero(proj.flat_size(), 2);
        try {
            fit_class_subspace_cols(zeros, false, 0.99, proj, 0);
            FAIL("expected DegenerateClass");
        } catch (const Error& e) {
            CHECK(e.code() == errc::degenerate_class);
        }
    }
    SUBCASE("prediction shape check") {
        LabeledImageSet data = two_class_translated(1, 89);
        TrainConfig cfg;
        cfg.n_angles = 8;
        const Model model = fit(data, cfg);
        CHECK_THROWS_AS(predict(Eigen::MatrixXd::Ones(10, 10), model), Error);
    }
}
