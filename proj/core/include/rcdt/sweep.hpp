#ifndef RCDT_SWEEP_HPP
#define RCDT_SWEEP_HPP

#include <string>
#include <vector>

#include "rcdt/dataset.hpp"
#include "rcdt/subspace.hpp"

namespace rcdt {

struct SweepRow {
    int train_size = 0;
    int repeat = 0;
    double accuracy = 0.0;
    double accuracy_out = -1.0; // out-of-distribution test set, when present
    double train_flops = 0.0;
    double test_flops_per_image = 0.0;
    double wall_time_s = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    bool has_out = false;
};

/// Accuracy-vs-training-size protocol: for every (size, repeat) split, fit on
/// the split and evaluate on the full test set. R-CDT fields are computed
/// once per image and cached across splits; rows are emitted in plan order.
SweepResult run_sweep(const LabeledImageSet& train, const LabeledImageSet& test,
                      const SplitPlan& plan, const TrainConfig& config);

/// Out-of-distribution protocol: training pool and in-distribution test set
/// generated from in_spec, out-distribution test set from out_spec (disjoint
/// parameter boxes enforced). Each row carries both test accuracies.
SweepResult run_ood(const LabeledImageSet& template_pool,
                    const ConfoundSpec& in_spec, const ConfoundSpec& out_spec,
                    int n_test_per_class, int canvas, const SplitPlan& plan,
                    const TrainConfig& config);

/// Row CSV. Wall-clock times are only written when with_timings is set, so
/// the default output is byte-stable across runs.
std::string sweep_csv(const SweepResult& result, bool with_timings = false);

/// Per-size mean / sample standard deviation of test accuracy.
std::string sweep_summary_csv(const SweepResult& result);

/// Confusion-matrix evaluation of a trained model on a test set.
struct EvalResult {
    double accuracy = 0.0;
    long n_test = 0;
    std::vector<std::vector<long>> confusion; // [true][predicted]
};

EvalResult evaluate(const Model& model, const LabeledImageSet& test, int jobs = 1);

} // namespace rcdt

#endif // RCDT_SWEEP_HPP
