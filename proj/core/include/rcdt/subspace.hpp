#ifndef RCDT_SUBSPACE_HPP
#define RCDT_SUBSPACE_HPP

#include <Eigen/Core>
#include <vector>

#include "rcdt/dataset.hpp"
#include "rcdt/density.hpp"
#include "rcdt/grid.hpp"
#include "rcdt/rcdt.hpp"

namespace rcdt {

/// Orthonormal basis of one class's enriched subspace in R-CDT space.
struct ClassBasis {
    int class_id = 0;
    Eigen::MatrixXd basis;            // (m*n) x d, orthonormal columns
    Eigen::VectorXd singular_values;  // pre-truncation spectrum, diagnostics

    int rank() const { return static_cast<int>(basis.cols()); }
};

struct TrainConfig {
    int n_angles = 180;
    double epsilon = 1e-8;
    double variance_fraction = 0.99;
    bool enrich_translation = true;
    int jobs = 1;

    void validate() const;
};

/// Trained classifier: one basis per class plus the shared transform
/// parameters (projection grid, uniform reference, normalization epsilon).
struct Model {
    std::vector<ClassBasis> classes;
    ProjectionGrid proj;
    double epsilon = 1e-8;
    double variance_fraction = 0.99;
    bool enrich_translation = true;
    int height = 0;
    int width = 0;

    int num_classes() const { return static_cast<int>(classes.size()); }
    Density1D reference() const { return make_uniform_reference1d(proj.t_grid); }
};

struct Prediction {
    int label = -1;
    Eigen::VectorXd distances; // squared distance to each class subspace
};

/// Orthonormalizes sample columns (optionally together with the translation
/// spanning pair) by SVD and truncates at the cumulative-energy fraction.
/// The spanning directions are orthonormalized first and always retained;
/// the energy cutoff applies to the samples' residuals against them.
ClassBasis fit_class_subspace_cols(const Eigen::MatrixXd& sample_cols,
                                   bool enrich_translation,
                                   double variance_fraction,
                                   const ProjectionGrid& proj, int class_id);

ClassBasis fit_class_subspace(const std::vector<RcdtField>& samples,
                              bool enrich_translation,
                              double variance_fraction, int class_id = 0);

/// Squared residual || shat - B B^T shat ||^2, computed as
/// ||shat||^2 - ||B^T shat||^2 and floored at zero.
double subspace_distance(const Eigen::Ref<const Eigen::VectorXd>& shat,
                         const ClassBasis& basis);

/// Full training pipeline: normalize, R-CDT transform, group by class, fit
/// one enriched subspace per class. Deterministic given inputs and config.
Model fit(const LabeledImageSet& train, const TrainConfig& config);

/// Normalize -> R-CDT -> nearest subspace by squared residual; ties broken
/// toward the lowest class id.
Prediction predict(const Eigen::MatrixXd& raw_image, const Model& model);

/// Batch prediction used by eval/sweep; identical results to predict().
std::vector<int> predict_labels(const std::vector<Eigen::MatrixXd>& images,
                                const Model& model, int jobs = 1);

/// Nearest-subspace labels for pre-transformed flattened fields, one column
/// per sample.
std::vector<int> predict_labels_cols(const Eigen::MatrixXd& field_cols,
                                     const Model& model);

} // namespace rcdt

#endif // RCDT_SUBSPACE_HPP
