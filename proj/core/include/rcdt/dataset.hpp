#ifndef RCDT_DATASET_HPP
#define RCDT_DATASET_HPP

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

namespace rcdt {

/// Raw labeled images; labels are dense class indices in 0..K-1.
struct LabeledImageSet {
    std::vector<Eigen::MatrixXd> images;
    std::vector<int> labels;

    int num_classes() const;
    void validate() const;
};

/// Reads an IDX image/label file pair (big-endian, u8 payload).
LabeledImageSet read_idx(const std::string& images_path,
                         const std::string& labels_path);

/// Writes a dataset as an IDX pair; each image is quantized to u8 after
/// scaling by its own maximum.
void write_idx(const LabeledImageSet& data, const std::string& images_path,
               const std::string& labels_path);

/// Confound parameter ranges for the generative model: radial translation
/// magnitude in pixels and isotropic scale factor.
struct ConfoundSpec {
    double min_px = 0.0;
    double max_px = 0.0;
    double alpha_min = 1.0;
    double alpha_max = 1.0;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

/// True when the two parameter boxes intersect with positive measure
/// (touching endpoints do not count).
bool confound_specs_overlap(const ConfoundSpec& a, const ConfoundSpec& b);

/// Mass-preserving affine resample: the image is magnified by alpha about its
/// center, shifted by (dx, dy) pixels (x = column axis, y = row axis), and
/// placed on an H x W canvas with bilinear interpolation. Total intensity is
/// preserved exactly; throws support_clipped if more than 0.1% of the mass
/// would land outside the canvas.
Eigen::MatrixXd apply_confound(const Eigen::MatrixXd& image, double dx,
                               double dy, double alpha, int canvas_h,
                               int canvas_w);

/// Generative-model dataset: template k deformed by n_per_class confounds
/// drawn from spec (uniform direction, uniform radial magnitude, uniform
/// scale). Deterministic for a fixed seed.
LabeledImageSet generate_synthetic_dataset(
    const std::vector<Eigen::MatrixXd>& templates, const ConfoundSpec& spec,
    int n_per_class, int canvas_h, int canvas_w);

/// Same confound model but drawing the template uniformly from a per-class
/// pool of images (e.g. MNIST originals for Affine-MNIST style data).
LabeledImageSet generate_confounded_dataset(const LabeledImageSet& pool,
                                            const ConfoundSpec& spec,
                                            int n_per_class, int canvas_h,
                                            int canvas_w);

/// Library of k distinct centered template shapes on a size x size canvas.
/// Shapes differ structurally, not just by position, so they remain
/// separable under translation confounds.
std::vector<Eigen::MatrixXd> synthetic_templates(int k, int size);

/// Digit-like synthetic dataset with per-sample shape jitter on top of the
/// confounds, so classes carry variability outside the deformation model.
LabeledImageSet synthetic_labeled_set(int k, int n_per_class, int template_size,
                                      int canvas, const ConfoundSpec& spec,
                                      double shape_jitter, std::uint64_t seed);

/// Train-split protocol: per (size, repeat), draw `size` samples per class
/// without replacement, seeded by (rng_seed, size, repeat).
struct SplitPlan {
    std::vector<int> sizes_per_class;
    int repeats = 10;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

struct Split {
    int size = 0;
    int repeat = 0;
    std::vector<int> indices; // into the source dataset
};

std::vector<Split> sample_splits(const LabeledImageSet& data,
                                 const SplitPlan& plan);

} // namespace rcdt

#endif // RCDT_DATASET_HPP
