#include "rcdt/subspace.hpp"

#include <Eigen/Dense>
#include <lapacke.h>

#include <algorithm>
#include <cmath>

#include "rcdt/errors.hpp"
#include "rcdt/parallel.hpp"

namespace rcdt {

void TrainConfig::validate() const {
    if (n_angles < 1)
        throw_error(errc::invalid_argument, "n_angles must be >= 1");
    if (!(epsilon > 0.0))
        throw_error(errc::invalid_argument, "epsilon must be > 0");
    if (!(variance_fraction > 0.0) || variance_fraction > 1.0)
        throw_error(errc::invalid_argument, "variance_fraction must be in (0, 1]");
    if (jobs < 0)
        throw_error(errc::invalid_argument, "jobs must be >= 0");
}

namespace {

// Eigendecomposition of a symmetric PSD matrix, eigenvalues descending.
// LAPACK's divide-and-conquer driver for anything sizable, Eigen below that.
void eigh_descending(Eigen::MatrixXd& g, Eigen::VectorXd& evals) {
    const int n = static_cast<int>(g.rows());
    if (n >= 128) {
        evals.resize(n);
        const int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, g.data(),
                                        n, evals.data());
        if (info != 0)
            throw_error(errc::invalid_argument, "eigendecomposition failed");
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
        evals = es.eigenvalues();
        g = es.eigenvectors();
    }
    // ascending -> descending
    evals.reverseInPlace();
    g = g.rowwise().reverse().eval();
}

// Smallest d whose cumulative eigenvalue energy reaches the requested
// fraction, never counting directions below the numerical-rank floor.
int energy_rank(const Eigen::VectorXd& evals, double fraction, long max_dim) {
    const double total = evals.array().max(0.0).sum();
    if (!(total > 0.0)) return 0;
    // Rank floor on the squared spectrum: (eps * dim)^2 as usual for an SVD,
    // widened to the Gram route's trustworthy resolution of ~sqrt(eps).
    const double eps = 2.220446049250313e-16;
    const double sv_floor = eps * static_cast<double>(max_dim);
    const double floor_ratio = std::max(sv_floor * sv_floor, 4e-14);
    const double lambda_floor = evals(0) * floor_ratio;
    double acc = 0.0;
    int d = 0;
    for (int i = 0; i < evals.size(); ++i) {
        if (!(evals(i) > lambda_floor)) break;
        acc += evals(i);
        ++d;
        if (acc >= fraction * total - 1e-15 * total) break;
    }
    return d;
}

// Re-orthonormalize columns by Householder QR; signs fixed so a single
// already-normalized column passes through unchanged.
void requalify(Eigen::MatrixXd& u) {
    if (u.cols() == 0) return;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(u);
    Eigen::MatrixXd r = qr.matrixQR()
                            .topRows(u.cols())
                            .triangularView<Eigen::Upper>();
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(
                            u.rows(), u.cols());
    for (int j = 0; j < q.cols(); ++j)
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    u = std::move(q);
}

// Principal column-space basis of S with cumulative-energy truncation.
// Computed from the Gram matrix on the smaller side; singular values are
// returned pre-truncation for diagnostics.
void spectral_basis(const Eigen::MatrixXd& s, double fraction,
                    Eigen::MatrixXd& basis, Eigen::VectorXd& singular_values) {
    const long r = s.rows(), c = s.cols();
    if (c == 0) {
        basis.resize(r, 0);
        singular_values.resize(0);
        return;
    }

    Eigen::VectorXd evals;
    if (c <= r) {
        Eigen::MatrixXd g = s.transpose() * s; // c x c
        eigh_descending(g, evals);
        const int d = energy_rank(evals, fraction, std::max(r, c));
        singular_values = evals.array().max(0.0).sqrt();
        basis = s * g.leftCols(d);
        for (int j = 0; j < d; ++j) basis.col(j) /= singular_values(j);
        requalify(basis);
    } else {
        Eigen::MatrixXd g = s * s.transpose(); // r x r
        eigh_descending(g, evals);
        const int d = energy_rank(evals, fraction, std::max(r, c));
        singular_values = evals.array().max(0.0).sqrt();
        basis = g.leftCols(d);
    }
}

// Orthonormalized translation spanning directions for the grid (u2 vanishes
// when the only angle is 0).
Eigen::MatrixXd spanning_basis(const ProjectionGrid& proj) {
    auto [u1, u2] = translation_spanning_vectors(proj);
    Eigen::MatrixXd u(u1.size(), 2);
    u.col(0) = u1;
    u.col(1) = u2;
    int kept = 0;
    for (int j = 0; j < 2; ++j) {
        Eigen::VectorXd v = u.col(j);
        for (int i = 0; i < kept; ++i) v -= u.col(i).dot(v) * u.col(i);
        const double norm = v.norm();
        if (norm > 1e-12 * std::sqrt(static_cast<double>(v.size()))) {
            u.col(kept) = v / norm;
            ++kept;
        }
    }
    return u.leftCols(kept);
}

} // namespace

ClassBasis fit_class_subspace_cols(const Eigen::MatrixXd& sample_cols,
                                   bool enrich_translation,
                                   double variance_fraction,
                                   const ProjectionGrid& proj, int class_id) {
    if (sample_cols.cols() < 1)
        throw_error(errc::invalid_argument, "need at least one sample");
    if (sample_cols.rows() != proj.flat_size())
        throw_error(errc::dimension_mismatch, "sample length != grid size");
    if (!(variance_fraction > 0.0) || variance_fraction > 1.0)
        throw_error(errc::invalid_argument, "variance_fraction must be in (0, 1]");

    ClassBasis out;
    out.class_id = class_id;

    if (!enrich_translation) {
        spectral_basis(sample_cols, variance_fraction, out.basis,
                       out.singular_values);
        if (out.basis.cols() == 0)
            throw_error(errc::degenerate_class, "all sample columns are zero");
        return out;
    }

    // The spanning directions are kept unconditionally; the energy cutoff is
    // applied to the samples' residuals against them, so translation
    // invariance survives any sample scale.
    const Eigen::MatrixXd u = spanning_basis(proj);
    Eigen::MatrixXd residual = sample_cols - u * (u.transpose() * sample_cols);

    Eigen::MatrixXd res_basis;
    spectral_basis(residual, variance_fraction, res_basis, out.singular_values);

    out.basis.resize(sample_cols.rows(), u.cols() + res_basis.cols());
    out.basis.leftCols(u.cols()) = u;
    out.basis.rightCols(res_basis.cols()) = res_basis;
    if (out.basis.cols() == 0)
        throw_error(errc::degenerate_class, "all columns are zero");
    return out;
}

ClassBasis fit_class_subspace(const std::vector<RcdtField>& samples,
                              bool enrich_translation,
                              double variance_fraction, int class_id) {
    if (samples.empty())
        throw_error(errc::invalid_argument, "need at least one sample");
    const ProjectionGrid& proj = samples.front().proj;
    Eigen::MatrixXd cols(proj.flat_size(), samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].values.size() != proj.flat_size())
            throw_error(errc::dimension_mismatch, "samples on different grids");
        cols.col(static_cast<long>(i)) = samples[i].flattened();
    }
    return fit_class_subspace_cols(cols, enrich_translation, variance_fraction,
                                   proj, class_id);
}

double subspace_distance(const Eigen::Ref<const Eigen::VectorXd>& shat,
                         const ClassBasis& basis) {
    if (shat.size() != basis.basis.rows())
        throw_error(errc::dimension_mismatch,
                    "sample length != basis row count");
    const Eigen::VectorXd proj = basis.basis.transpose() * shat;
    return std::max(0.0, shat.squaredNorm() - proj.squaredNorm());
}

namespace {

Model fit_from_columns(const Eigen::MatrixXd& cols, const std::vector<int>& labels,
                       int num_classes, const ProjectionGrid& proj,
                       const TrainConfig& config, int height, int width) {
    std::vector<std::vector<long>> by_class(num_classes);
    for (std::size_t i = 0; i < labels.size(); ++i)
        by_class[labels[i]].push_back(static_cast<long>(i));

    Model model;
    model.proj = proj;
    model.epsilon = config.epsilon;
    model.variance_fraction = config.variance_fraction;
    model.enrich_translation = config.enrich_translation;
    model.height = height;
    model.width = width;
    model.classes.reserve(num_classes);
    for (int k = 0; k < num_classes; ++k) {
        Eigen::MatrixXd class_cols(cols.rows(),
                                   static_cast<long>(by_class[k].size()));
        for (std::size_t i = 0; i < by_class[k].size(); ++i)
            class_cols.col(static_cast<long>(i)) = cols.col(by_class[k][i]);
        model.classes.push_back(fit_class_subspace_cols(
            class_cols, config.enrich_translation, config.variance_fraction,
            proj, k));
    }
    return model;
}

} // namespace

Model fit(const LabeledImageSet& train, const TrainConfig& config) {
    config.validate();
    train.validate();
    if (train.images.empty())
        throw_error(errc::invalid_argument, "empty training set");

    const int num_classes = train.num_classes();
    std::vector<long> counts(num_classes, 0);
    for (int label : train.labels) ++counts[label];
    for (int k = 0; k < num_classes; ++k)
        if (counts[k] == 0)
            throw_error(errc::missing_class,
                        "class " + std::to_string(k) + " has no samples");

    const int height = static_cast<int>(train.images.front().rows());
    const int width = static_cast<int>(train.images.front().cols());
    for (const auto& img : train.images)
        if (img.rows() != height || img.cols() != width)
            throw_error(errc::dimension_mismatch,
                        "training images must share one shape");

    const ProjectionGrid proj =
        default_projection_grid(height, width, config.n_angles);
    const Density1D ref = make_uniform_reference1d(proj.t_grid);

    Eigen::MatrixXd cols(proj.flat_size(),
                         static_cast<long>(train.images.size()));
    const int jobs = resolve_jobs(config.jobs);
    parallel_for(static_cast<int>(train.images.size()), jobs, [&](int i) {
        const Density2D d = normalize_to_density2d(train.images[i], config.epsilon);
        cols.col(i) = rcdt_forward(d, ref, proj, config.epsilon).flattened();
    });

    return fit_from_columns(cols, train.labels, num_classes, proj, config,
                            height, width);
}

Prediction predict(const Eigen::MatrixXd& raw_image, const Model& model) {
    if (model.classes.empty())
        throw_error(errc::invalid_argument, "model has no classes");
    if (raw_image.rows() != model.height || raw_image.cols() != model.width)
        throw_error(errc::dimension_mismatch,
                    "image shape does not match the model");

    const Density1D ref = model.reference();
    const Density2D d = normalize_to_density2d(raw_image, model.epsilon);
    const Eigen::VectorXd shat =
        rcdt_forward(d, ref, model.proj, model.epsilon).flattened();

    Prediction pred;
    pred.distances.resize(model.num_classes());
    for (int k = 0; k < model.num_classes(); ++k)
        pred.distances(k) = subspace_distance(shat, model.classes[k]);
    pred.distances.minCoeff(&pred.label); // first minimum = lowest class id
    return pred;
}

std::vector<int> predict_labels_cols(const Eigen::MatrixXd& field_cols,
                                     const Model& model) {
    const long n = field_cols.cols();
    const int num_classes = model.num_classes();
    Eigen::MatrixXd dist(num_classes, n);
    const Eigen::VectorXd norms = field_cols.colwise().squaredNorm();
    for (int k = 0; k < num_classes; ++k) {
        const Eigen::MatrixXd proj =
            model.classes[k].basis.transpose() * field_cols;
        dist.row(k) = (norms.transpose() - proj.colwise().squaredNorm())
                          .cwiseMax(0.0);
    }
    std::vector<int> labels(n);
    for (long i = 0; i < n; ++i) {
        int best = 0;
        dist.col(i).minCoeff(&best);
        labels[i] = best;
    }
    return labels;
}

std::vector<int> predict_labels(const std::vector<Eigen::MatrixXd>& images,
                                const Model& model, int jobs) {
    const Density1D ref = model.reference();
    Eigen::MatrixXd cols(model.proj.flat_size(),
                         static_cast<long>(images.size()));
    parallel_for(static_cast<int>(images.size()), resolve_jobs(jobs), [&](int i) {
        if (images[i].rows() != model.height || images[i].cols() != model.width)
            throw_error(errc::dimension_mismatch,
                        "image shape does not match the model");
        const Density2D d = normalize_to_density2d(images[i], model.epsilon);
        cols.col(i) = rcdt_forward(d, ref, model.proj, model.epsilon).flattened();
    });
    return predict_labels_cols(cols, model);
}

} // namespace rcdt
