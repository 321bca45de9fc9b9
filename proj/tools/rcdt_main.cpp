// Command-line driver: transform, train, predict, eval, sweep, ood, synth.
// Progress goes to stderr; results (JSON/CSV) go to stdout or --out files.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "rcdt/dataset.hpp"
#include "rcdt/errors.hpp"
#include "rcdt/field_io.hpp"
#include "rcdt/model_io.hpp"
#include "rcdt/parallel.hpp"
#include "rcdt/pgm.hpp"
#include "rcdt/rcdt.hpp"
#include "rcdt/subspace.hpp"
#include "rcdt/sweep.hpp"

namespace {

using json = nlohmann::ordered_json;

struct CommonOptions {
    int n_angles = 180;
    double epsilon = 1e-8;
    double variance = 0.99;
    bool no_enrich = false;
    std::uint64_t seed = 0;
    int jobs = 0; // 0 = RCDT_JOBS env or 1

    rcdt::TrainConfig train_config() const {
        rcdt::TrainConfig cfg;
        cfg.n_angles = n_angles;
        cfg.epsilon = epsilon;
        cfg.variance_fraction = variance;
        cfg.enrich_translation = !no_enrich;
        cfg.jobs = rcdt::resolve_jobs(jobs);
        cfg.validate();
        return cfg;
    }
};

void add_common_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--angles", opt.n_angles, "Number of projection angles")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--epsilon", opt.epsilon, "Positivity floor");
    cmd->add_option("--variance", opt.variance, "Retained variance fraction");
    cmd->add_flag("--no-enrich", opt.no_enrich,
                  "Disable the translation spanning set");
    cmd->add_option("--seed", opt.seed, "RNG seed");
    cmd->add_option("--jobs", opt.jobs,
                    "Worker threads (default: RCDT_JOBS or 1)");
}

std::pair<double, double> parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        rcdt::throw_error(rcdt::errc::invalid_argument,
                          "range must look like LO:HI, got '" + text + "'");
    return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
}

Eigen::MatrixXd load_input_image(const std::string& pgm_path,
                                 const std::string& images_path,
                                 const std::string& labels_path, int index) {
    if (!pgm_path.empty()) return rcdt::read_pgm(pgm_path);
    const rcdt::LabeledImageSet set = rcdt::read_idx(images_path, labels_path);
    if (index < 0 || index >= static_cast<int>(set.images.size()))
        rcdt::throw_error(rcdt::errc::invalid_argument,
                          "--index out of range");
    return set.images[static_cast<std::size_t>(index)];
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        rcdt::throw_error(rcdt::errc::io_failure, "cannot write " + out_path);
    out << text;
}

int run(int argc, char** argv) {
    CLI::App app{"Radon cumulative distribution transform toolkit"};
    app.require_subcommand(1);

    // ---- transform ----
    auto* transform = app.add_subcommand(
        "transform", "R-CDT of one image, written as a binary field file");
    CommonOptions topt;
    std::string t_pgm, t_images, t_labels, t_out, t_recon;
    int t_index = 0;
    bool t_roundtrip = false;
    transform->add_option("--input", t_pgm, "Input PGM image");
    transform->add_option("--images", t_images, "IDX image file");
    transform->add_option("--labels", t_labels, "IDX label file");
    transform->add_option("--index", t_index, "Image index within the IDX file");
    transform->add_option("--out", t_out, "Output field file")->required();
    transform->add_flag("--roundtrip", t_roundtrip,
                        "Also invert the field and report the relative L2 error");
    transform->add_option("--recon-out", t_recon,
                          "Write the round-trip reconstruction as PGM");
    add_common_flags(transform, topt);
    transform->callback([&] {
        if (t_pgm.empty() && t_images.empty())
            rcdt::throw_error(rcdt::errc::invalid_argument,
                              "need --input or --images/--labels");
        const Eigen::MatrixXd raw =
            load_input_image(t_pgm, t_images, t_labels, t_index);
        const rcdt::Density2D density =
            rcdt::normalize_to_density2d(raw, topt.epsilon);
        const rcdt::ProjectionGrid proj = rcdt::default_projection_grid(
            density.height, density.width, topt.n_angles);
        const rcdt::Density1D ref = rcdt::make_uniform_reference1d(proj.t_grid);
        const rcdt::RcdtField field =
            rcdt::rcdt_forward(density, ref, proj, topt.epsilon);
        rcdt::save_field(field, t_out);

        json result;
        result["field"] = t_out;
        result["m"] = proj.n_offsets();
        result["n_angles"] = proj.n_angles();
        if (t_roundtrip) {
            const rcdt::Density2D recon = rcdt::rcdt_inverse(
                field, ref, std::make_pair(density.height, density.width));
            const double err = (recon.values - density.values).norm() /
                               density.values.norm();
            result["roundtrip_rel_l2"] = err;
            if (!t_recon.empty()) rcdt::write_pgm(recon.values, t_recon);
        }
        std::cout << result.dump(2) << "\n";
    });

    // ---- train ----
    auto* train = app.add_subcommand("train", "Fit the nearest-subspace model");
    CommonOptions nopt;
    std::string n_images, n_labels, n_out;
    train->add_option("--images", n_images, "Training IDX images")->required();
    train->add_option("--labels", n_labels, "Training IDX labels")->required();
    train->add_option("--out", n_out, "Output model file")->required();
    add_common_flags(train, nopt);
    train->callback([&] {
        const rcdt::LabeledImageSet data = rcdt::read_idx(n_images, n_labels);
        std::fprintf(stderr, "rcdt: training on %zu images, %d classes\n",
                     data.images.size(), data.num_classes());
        const rcdt::Model model = rcdt::fit(data, nopt.train_config());
        rcdt::save_model(model, n_out);
        json result;
        result["model"] = n_out;
        json classes = json::array();
        for (const auto& cls : model.classes)
            classes.push_back({{"class_id", cls.class_id}, {"rank", cls.rank()}});
        result["classes"] = classes;
        std::cout << result.dump(2) << "\n";
    });

    // ---- predict ----
    auto* predict = app.add_subcommand("predict", "Classify one image");
    std::string p_model, p_pgm, p_images, p_labels;
    int p_index = 0;
    predict->add_option("--model", p_model, "Model file")->required();
    predict->add_option("--input", p_pgm, "Input PGM image");
    predict->add_option("--images", p_images, "IDX image file");
    predict->add_option("--labels", p_labels, "IDX label file");
    predict->add_option("--index", p_index, "Image index within the IDX file");
    predict->callback([&] {
        if (p_pgm.empty() && p_images.empty())
            rcdt::throw_error(rcdt::errc::invalid_argument,
                              "need --input or --images/--labels");
        const rcdt::Model model = rcdt::load_model(p_model);
        const Eigen::MatrixXd raw =
            load_input_image(p_pgm, p_images, p_labels, p_index);
        const rcdt::Prediction pred = rcdt::predict(raw, model);
        json result;
        result["label"] = pred.label;
        result["distances"] = std::vector<double>(
            pred.distances.data(), pred.distances.data() + pred.distances.size());
        std::cout << result.dump(2) << "\n";
    });

    // ---- eval ----
    auto* eval = app.add_subcommand("eval", "Accuracy and confusion matrix");
    std::string e_model, e_images, e_labels, e_out;
    int e_jobs = 0;
    eval->add_option("--model", e_model, "Model file")->required();
    eval->add_option("--images", e_images, "Test IDX images")->required();
    eval->add_option("--labels", e_labels, "Test IDX labels")->required();
    eval->add_option("--out", e_out, "Write JSON here instead of stdout");
    eval->add_option("--jobs", e_jobs, "Worker threads");
    eval->callback([&] {
        const rcdt::Model model = rcdt::load_model(e_model);
        const rcdt::LabeledImageSet data = rcdt::read_idx(e_images, e_labels);
        const rcdt::EvalResult res =
            rcdt::evaluate(model, data, rcdt::resolve_jobs(e_jobs));
        json result;
        result["accuracy"] = res.accuracy;
        result["n_test"] = res.n_test;
        result["confusion"] = res.confusion;
        emit(result.dump(2) + "\n", e_out);
    });

    // ---- sweep ----
    auto* sweep = app.add_subcommand(
        "sweep", "Accuracy vs. training-set size with repeats");
    CommonOptions sopt;
    std::string s_train_images, s_train_labels, s_test_images, s_test_labels,
        s_out;
    std::vector<int> s_sizes;
    int s_repeats = 10;
    bool s_timings = false;
    sweep->add_option("--train-images", s_train_images)->required();
    sweep->add_option("--train-labels", s_train_labels)->required();
    sweep->add_option("--test-images", s_test_images)->required();
    sweep->add_option("--test-labels", s_test_labels)->required();
    sweep->add_option("--sizes", s_sizes, "Per-class split sizes")
        ->required()
        ->delimiter(',');
    sweep->add_option("--repeats", s_repeats, "Repeats per size");
    sweep->add_option("--out", s_out, "Row CSV output path");
    sweep->add_flag("--timings", s_timings,
                    "Include wall-clock times in the row CSV");
    add_common_flags(sweep, sopt);
    sweep->callback([&] {
        const rcdt::LabeledImageSet train_set =
            rcdt::read_idx(s_train_images, s_train_labels);
        const rcdt::LabeledImageSet test_set =
            rcdt::read_idx(s_test_images, s_test_labels);
        rcdt::SplitPlan plan{s_sizes, s_repeats, sopt.seed};
        const rcdt::SweepResult result =
            rcdt::run_sweep(train_set, test_set, plan, sopt.train_config());
        emit(rcdt::sweep_csv(result, s_timings), s_out);
        std::cout << rcdt::sweep_summary_csv(result);
    });

    // ---- ood ----
    auto* ood = app.add_subcommand(
        "ood", "Out-of-distribution protocol on generated confounds");
    CommonOptions oopt;
    std::string o_images, o_labels, o_out;
    std::string o_in_translate = "0:7", o_in_scale = "0.9:1.2";
    std::string o_out_translate = "8:14", o_out_scale = "1.5:2.0";
    std::vector<int> o_sizes;
    int o_repeats = 10, o_canvas = 84, o_n_test = 100;
    bool o_timings = false;
    ood->add_option("--templates-images", o_images, "Template pool IDX images")
        ->required();
    ood->add_option("--templates-labels", o_labels, "Template pool IDX labels")
        ->required();
    ood->add_option("--canvas", o_canvas, "Canvas side in pixels");
    ood->add_option("--in-translate", o_in_translate, "In-dist |shift| range LO:HI");
    ood->add_option("--in-scale", o_in_scale, "In-dist scale range LO:HI");
    ood->add_option("--out-translate", o_out_translate, "Out-dist |shift| range");
    ood->add_option("--out-scale", o_out_scale, "Out-dist scale range");
    ood->add_option("--n-test", o_n_test, "Test samples per class per set");
    ood->add_option("--sizes", o_sizes, "Per-class split sizes")
        ->required()
        ->delimiter(',');
    ood->add_option("--repeats", o_repeats, "Repeats per size");
    ood->add_option("--out", o_out, "Row CSV output path");
    ood->add_flag("--timings", o_timings, "Include wall-clock times");
    add_common_flags(ood, oopt);
    ood->callback([&] {
        const rcdt::LabeledImageSet pool = rcdt::read_idx(o_images, o_labels);
        const auto [in_lo, in_hi] = parse_range(o_in_translate);
        const auto [in_slo, in_shi] = parse_range(o_in_scale);
        const auto [out_lo, out_hi] = parse_range(o_out_translate);
        const auto [out_slo, out_shi] = parse_range(o_out_scale);
        rcdt::ConfoundSpec in_spec{in_lo, in_hi, in_slo, in_shi, oopt.seed};
        rcdt::ConfoundSpec out_spec{out_lo, out_hi, out_slo, out_shi,
                                    oopt.seed + 1};
        rcdt::SplitPlan plan{o_sizes, o_repeats, oopt.seed};
        const rcdt::SweepResult result =
            rcdt::run_ood(pool, in_spec, out_spec, o_n_test, o_canvas, plan,
                          oopt.train_config());
        emit(rcdt::sweep_csv(result, o_timings), o_out);
        std::cout << rcdt::sweep_summary_csv(result);
    });

    // ---- synth ----
    auto* synth = app.add_subcommand(
        "synth", "Write a synthetic IDX dataset from the template library");
    std::string y_prefix;
    std::string y_translate = "0:4", y_scale = "0.95:1.1";
    int y_classes = 10, y_train = 64, y_test = 16, y_canvas = 28,
        y_template = 28;
    double y_jitter = 0.0;
    std::uint64_t y_seed = 0;
    synth->add_option("--out-prefix", y_prefix, "Output path prefix")->required();
    synth->add_option("--classes", y_classes, "Number of classes (<= 10)");
    synth->add_option("--train", y_train, "Training samples per class");
    synth->add_option("--test", y_test, "Test samples per class");
    synth->add_option("--canvas", y_canvas, "Canvas side");
    synth->add_option("--template-size", y_template, "Template raster side");
    synth->add_option("--translate", y_translate, "|shift| range LO:HI");
    synth->add_option("--scale", y_scale, "Scale range LO:HI");
    synth->add_option("--jitter", y_jitter, "Per-sample shape jitter");
    synth->add_option("--seed", y_seed, "RNG seed");
    synth->callback([&] {
        const auto [lo, hi] = parse_range(y_translate);
        const auto [slo, shi] = parse_range(y_scale);
        rcdt::ConfoundSpec spec{lo, hi, slo, shi, y_seed};
        const rcdt::LabeledImageSet train_set = rcdt::synthetic_labeled_set(
            y_classes, y_train, y_template, y_canvas, spec, y_jitter, y_seed);
        rcdt::ConfoundSpec test_spec = spec;
        test_spec.rng_seed = y_seed ^ 0x9e3779b97f4a7c15ULL;
        const rcdt::LabeledImageSet test_set = rcdt::synthetic_labeled_set(
            y_classes, y_test, y_template, y_canvas, test_spec, y_jitter,
            y_seed + 1);
        rcdt::write_idx(train_set, y_prefix + "-train-images.idx",
                        y_prefix + "-train-labels.idx");
        rcdt::write_idx(test_set, y_prefix + "-test-images.idx",
                        y_prefix + "-test-labels.idx");
        json result;
        result["train_images"] = y_prefix + "-train-images.idx";
        result["train_labels"] = y_prefix + "-train-labels.idx";
        result["test_images"] = y_prefix + "-test-images.idx";
        result["test_labels"] = y_prefix + "-test-labels.idx";
        std::cout << result.dump(2) << "\n";
    });

    CLI11_PARSE(app, argc, argv);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const rcdt::Error& e) {
        std::fprintf(stderr, "rcdt: error: %s\n", e.what());
        return rcdt::errc_exit_code(e.code());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "rcdt: error: %s\n", e.what());
        return 1;
    }
}
