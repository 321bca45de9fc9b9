#include "rcdt/sweep.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "rcdt/errors.hpp"
#include "rcdt/flops.hpp"
#include "rcdt/parallel.hpp"

namespace rcdt {

namespace {

// R-CDT fields cached as float32 columns; the subspace algebra casts back to
// double per split. Halves the cache footprint at ~1e-7 relative rounding.
Eigen::MatrixXf transform_cache(const std::vector<Eigen::MatrixXd>& images,
                                const std::vector<int>& which,
                                const ProjectionGrid& proj,
                                const Density1D& ref, const TrainConfig& config,
                                int height, int width) {
    Eigen::MatrixXf cols(proj.flat_size(), static_cast<long>(which.size()));
    parallel_for(static_cast<int>(which.size()), resolve_jobs(config.jobs),
                 [&](int i) {
                     const Eigen::MatrixXd& img = images[which[i]];
                     if (img.rows() != height || img.cols() != width)
                         throw_error(errc::dimension_mismatch,
                                     "images must share one shape");
                     const Density2D d = normalize_to_density2d(img, config.epsilon);
                     cols.col(i) = rcdt_forward(d, ref, proj, config.epsilon)
                                       .flattened()
                                       .cast<float>();
                 });
    return cols;
}

std::vector<int> predict_cached(const Eigen::MatrixXf& fields,
                                const Model& model) {
    std::vector<int> labels(fields.cols());
    const long block = 2048;
    for (long b = 0; b < fields.cols(); b += block) {
        const long len = std::min(block, fields.cols() - b);
        const Eigen::MatrixXd x = fields.middleCols(b, len).cast<double>();
        const std::vector<int> part = predict_labels_cols(x, model);
        for (long i = 0; i < len; ++i) labels[b + i] = part[i];
    }
    return labels;
}

double accuracy_of(const std::vector<int>& predicted,
                   const std::vector<int>& truth,
                   const std::vector<long>& subset) {
    long correct = 0;
    for (long i : subset)
        if (predicted[i] == truth[i]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(subset.size());
}

SweepResult sweep_impl(const LabeledImageSet& train,
                       const LabeledImageSet& test_in,
                       const LabeledImageSet* test_out, const SplitPlan& plan,
                       const TrainConfig& config) {
    config.validate();
    train.validate();
    test_in.validate();
    if (test_in.images.empty())
        throw_error(errc::empty_test_set, "no test images");
    if (train.images.empty())
        throw_error(errc::invalid_argument, "no training images");

    const int height = static_cast<int>(train.images.front().rows());
    const int width = static_cast<int>(train.images.front().cols());
    const int num_classes = train.num_classes();
    const ProjectionGrid proj =
        default_projection_grid(height, width, config.n_angles);
    const Density1D ref = make_uniform_reference1d(proj.t_grid);

    const std::vector<Split> splits = sample_splits(train, plan);

    // Transform each distinct image once, up front.
    std::unordered_map<int, int> cache_slot;
    std::vector<int> used;
    for (const Split& split : splits)
        for (int idx : split.indices)
            if (cache_slot.emplace(idx, static_cast<int>(used.size())).second)
                used.push_back(idx);
    const Eigen::MatrixXf train_fields =
        transform_cache(train.images, used, proj, ref, config, height, width);

    std::vector<int> all_test(test_in.images.size());
    for (std::size_t i = 0; i < all_test.size(); ++i) all_test[i] = static_cast<int>(i);
    const Eigen::MatrixXf in_fields = transform_cache(
        test_in.images, all_test, proj, ref, config, height, width);

    Eigen::MatrixXf out_fields;
    if (test_out) {
        test_out->validate();
        std::vector<int> all_out(test_out->images.size());
        for (std::size_t i = 0; i < all_out.size(); ++i) all_out[i] = static_cast<int>(i);
        out_fields = transform_cache(test_out->images, all_out, proj, ref,
                                     config, height, width);
    }

    std::vector<long> in_subset(test_in.images.size());
    for (std::size_t i = 0; i < in_subset.size(); ++i) in_subset[i] = static_cast<long>(i);
    std::vector<long> out_subset;
    if (test_out) {
        out_subset.resize(test_out->images.size());
        for (std::size_t i = 0; i < out_subset.size(); ++i) out_subset[i] = static_cast<long>(i);
    }

    SweepResult result;
    result.has_out = test_out != nullptr;
    for (const Split& split : splits) {
        const auto start = std::chrono::steady_clock::now();

        Eigen::MatrixXd cols(proj.flat_size(),
                             static_cast<long>(split.indices.size()));
        std::vector<int> labels(split.indices.size());
        for (std::size_t i = 0; i < split.indices.size(); ++i) {
            cols.col(static_cast<long>(i)) =
                train_fields.col(cache_slot.at(split.indices[i])).cast<double>();
            labels[i] = train.labels[split.indices[i]];
        }

        Model model;
        model.proj = proj;
        model.epsilon = config.epsilon;
        model.variance_fraction = config.variance_fraction;
        model.enrich_translation = config.enrich_translation;
        model.height = height;
        model.width = width;
        for (int k = 0; k < num_classes; ++k) {
            std::vector<long> members;
            for (std::size_t i = 0; i < labels.size(); ++i)
                if (labels[i] == k) members.push_back(static_cast<long>(i));
            if (members.empty())
                throw_error(errc::missing_class,
                            "split lost class " + std::to_string(k));
            Eigen::MatrixXd class_cols(cols.rows(),
                                       static_cast<long>(members.size()));
            for (std::size_t i = 0; i < members.size(); ++i)
                class_cols.col(static_cast<long>(i)) = cols.col(members[i]);
            model.classes.push_back(fit_class_subspace_cols(
                class_cols, config.enrich_translation, config.variance_fraction,
                proj, k));
        }

        SweepRow row;
        row.train_size = split.size;
        row.repeat = split.repeat;
        row.accuracy =
            accuracy_of(predict_cached(in_fields, model), test_in.labels, in_subset);
        if (test_out)
            row.accuracy_out = accuracy_of(predict_cached(out_fields, model),
                                           test_out->labels, out_subset);

        FlopConfig fc;
        fc.m = proj.n_offsets();
        fc.n_angles = proj.n_angles();
        fc.height = height;
        fc.width = width;
        fc.n_test = static_cast<long>(test_in.images.size());
        for (const ClassBasis& cls : model.classes) {
            fc.ranks.push_back(cls.rank());
        }
        fc.train_per_class.assign(num_classes, split.size);
        const FlopCounts flops = count_flops(fc);
        row.train_flops = flops.train_total;
        row.test_flops_per_image = flops.test_per_image;

        row.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        result.rows.push_back(row);
    }
    return result;
}

void append_num(std::string& s, const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    s += buf;
}

} // namespace

SweepResult run_sweep(const LabeledImageSet& train, const LabeledImageSet& test,
                      const SplitPlan& plan, const TrainConfig& config) {
    return sweep_impl(train, test, nullptr, plan, config);
}

SweepResult run_ood(const LabeledImageSet& template_pool,
                    const ConfoundSpec& in_spec, const ConfoundSpec& out_spec,
                    int n_test_per_class, int canvas, const SplitPlan& plan,
                    const TrainConfig& config) {
    in_spec.validate();
    out_spec.validate();
    if (confound_specs_overlap(in_spec, out_spec))
        throw_error(errc::overlapping_specs,
                    "in/out confound parameter boxes intersect");
    plan.validate();
    if (n_test_per_class < 1)
        throw_error(errc::invalid_argument, "n_test_per_class must be >= 1");

    // Training pool twice the largest split so repeats see distinct draws;
    // the in-distribution test set comes from an independent seed stream.
    const int pool_size = 2 * plan.sizes_per_class.back();
    const LabeledImageSet train = generate_confounded_dataset(
        template_pool, in_spec, pool_size, canvas, canvas);

    ConfoundSpec in_test_spec = in_spec;
    in_test_spec.rng_seed = in_spec.rng_seed ^ 0x9e3779b97f4a7c15ULL;
    const LabeledImageSet test_in = generate_confounded_dataset(
        template_pool, in_test_spec, n_test_per_class, canvas, canvas);
    const LabeledImageSet test_out = generate_confounded_dataset(
        template_pool, out_spec, n_test_per_class, canvas, canvas);

    return sweep_impl(train, test_in, &test_out, plan, config);
}

std::string sweep_csv(const SweepResult& result, bool with_timings) {
    std::string csv = result.has_out
                          ? "train_size,repeat,accuracy_in,accuracy_out,"
                            "train_flops,test_flops_per_image"
                          : "train_size,repeat,accuracy,train_flops,"
                            "test_flops_per_image";
    if (with_timings) csv += ",wall_time_s";
    csv += "\n";
    for (const SweepRow& row : result.rows) {
        csv += std::to_string(row.train_size);
        csv += ",";
        csv += std::to_string(row.repeat);
        append_num(csv, ",%.6f", row.accuracy);
        if (result.has_out) append_num(csv, ",%.6f", row.accuracy_out);
        append_num(csv, ",%.6e", row.train_flops);
        append_num(csv, ",%.6e", row.test_flops_per_image);
        if (with_timings) append_num(csv, ",%.3f", row.wall_time_s);
        csv += "\n";
    }
    return csv;
}

namespace {

void mean_std(const std::vector<double>& xs, double& mean, double& std_dev) {
    mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    std_dev = xs.size() > 1 ? std::sqrt(var / static_cast<double>(xs.size() - 1))
                            : 0.0;
}

} // namespace

std::string sweep_summary_csv(const SweepResult& result) {
    std::vector<int> sizes;
    for (const SweepRow& row : result.rows)
        if (sizes.empty() || sizes.back() != row.train_size)
            sizes.push_back(row.train_size);

    std::string csv =
        result.has_out
            ? "train_size,mean_accuracy_in,std_accuracy_in,mean_accuracy_out,"
              "std_accuracy_out,drop_pp\n"
            : "train_size,mean_accuracy,std_accuracy\n";
    for (int size : sizes) {
        std::vector<double> acc, acc_out;
        for (const SweepRow& row : result.rows)
            if (row.train_size == size) {
                acc.push_back(row.accuracy);
                if (result.has_out) acc_out.push_back(row.accuracy_out);
            }
        double mean, sd;
        mean_std(acc, mean, sd);
        csv += std::to_string(size);
        append_num(csv, ",%.6f", mean);
        append_num(csv, ",%.6f", sd);
        if (result.has_out) {
            double mean_out, sd_out;
            mean_std(acc_out, mean_out, sd_out);
            append_num(csv, ",%.6f", mean_out);
            append_num(csv, ",%.6f", sd_out);
            append_num(csv, ",%.4f", (mean - mean_out) * 100.0);
        }
        csv += "\n";
    }
    return csv;
}

EvalResult evaluate(const Model& model, const LabeledImageSet& test, int jobs) {
    test.validate();
    if (test.images.empty())
        throw_error(errc::empty_test_set, "no test images");
    const int num_classes = model.num_classes();
    for (int label : test.labels)
        if (label >= num_classes)
            throw_error(errc::invalid_argument,
                        "test label outside the model's classes");

    const std::vector<int> predicted = predict_labels(test.images, model, jobs);
    EvalResult out;
    out.n_test = static_cast<long>(test.images.size());
    out.confusion.assign(num_classes, std::vector<long>(num_classes, 0));
    long correct = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        out.confusion[test.labels[i]][predicted[i]] += 1;
        if (predicted[i] == test.labels[i]) ++correct;
    }
    out.accuracy = static_cast<double>(correct) / static_cast<double>(out.n_test);
    return out;
}

} // namespace rcdt
