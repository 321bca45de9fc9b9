#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>

#include "rcdt/dataset.hpp"
#include "rcdt/errors.hpp"
#include "rcdt/field_io.hpp"
#include "rcdt/model_io.hpp"
#include "rcdt/rcdt.hpp"
#include "rcdt/subspace.hpp"
#include "support/generators.hpp"

using namespace rcdt;

namespace {

Model tiny_model(std::uint64_t seed) {
    const auto templates = synthetic_templates(2, 20);
    ConfoundSpec spec{0.0, 2.0, 1.0, 1.0, seed};
    const LabeledImageSet data =
        generate_synthetic_dataset(templates, spec, 2, 28, 28);
    TrainConfig cfg;
    cfg.n_angles = 10;
    return fit(data, cfg);
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("rcdt_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const {
        return (path / name).string();
    }
};

} // namespace

TEST_CASE("model round trip is bit identical") {
    const Model model = tiny_model(901);
    const auto bytes = serialize_model(model);
    const Model loaded = deserialize_model(bytes);

    REQUIRE(loaded.num_classes() == model.num_classes());
    CHECK(loaded.epsilon == model.epsilon);
    CHECK(loaded.variance_fraction == model.variance_fraction);
    CHECK(loaded.enrich_translation == model.enrich_translation);
    CHECK(loaded.height == model.height);
    CHECK(loaded.width == model.width);
    for (int k = 0; k < model.num_classes(); ++k) {
        CHECK(loaded.classes[k].basis == model.classes[k].basis);
        CHECK(loaded.classes[k].singular_values ==
              model.classes[k].singular_values);
    }
    CHECK(serialize_model(loaded) == bytes);
}

TEST_CASE("saved and reloaded models predict identically") {
    TempDir tmp;
    const Model model = tiny_model(902);
    save_model(model, tmp.file("m.rcdt"));
    const Model loaded = load_model(tmp.file("m.rcdt"));

    const auto templates = synthetic_templates(2, 20);
    const Eigen::MatrixXd probe =
        apply_confound(templates[1], 1.0, -1.0, 1.0, 28, 28);
    const Prediction a = predict(probe, model);
    const Prediction b = predict(probe, loaded);
    CHECK(a.label == b.label);
    CHECK((a.distances - b.distances).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("corruption and version checks") {
    const Model model = tiny_model(903);
    auto bytes = serialize_model(model);

    SUBCASE("truncated file") {
        auto cut = bytes;
        cut.resize(cut.size() / 2);
        try {
            deserialize_model(cut);
            FAIL("expected CorruptFile");
        } catch (const Error& e) {
            CHECK(e.code() == errc::corrupt_file);
        }
    }
    SUBCASE("flipped payload byte fails the checksum") {
        auto bad = bytes;
        bad[40] ^= 0x01;
        try {
            deserialize_model(bad);
            FAIL("expected CorruptFile");
        } catch (const Error& e) {
            CHECK(e.code() == errc::corrupt_file);
        }
    }
    SUBCASE("future version byte") {
        auto future = bytes;
        future[7] = '2'; // RCDTNS02
        try {
            deserialize_model(future);
            FAIL("expected FormatVersionMismatch");
        } catch (const Error& e) {
            CHECK(e.code() == errc::format_version_mismatch);
        }
    }
    SUBCASE("foreign magic") {
        auto alien = bytes;
        alien[0] = 'X';
        CHECK_THROWS_AS(deserialize_model(alien), Error);
    }
}

TEST_CASE("field file round trip") {
    TempDir tmp;
    const ProjectionGrid proj = default_projection_grid(20, 20, 12);
    const Density1D ref = make_uniform_reference1d(proj.t_grid);
    const Density2D d = normalize_to_density2d(gen::centered_blob(20, 20), 1e-8);
    const RcdtField field = rcdt_forward(d, ref, proj);

    save_field(field, tmp.file("f.rcdt"));
    const RcdtField loaded = load_field(tmp.file("f.rcdt"));
    CHECK(loaded.values == field.values);
    CHECK(loaded.proj.n_offsets() == field.proj.n_offsets());
    CHECK(loaded.proj.thetas == field.proj.thetas);
    CHECK(loaded.proj.t_grid.x_min == field.proj.t_grid.x_min);

    // corrupt one byte
    {
        std::FILE* f = std::fopen(tmp.file("f.rcdt").c_str(), "r+b");
        REQUIRE(f);
        std::fseek(f, 32, SEEK_SET);
        const unsigned char b = 0xFF;
        std::fwrite(&b, 1, 1, f);
        std::fclose(f);
    }
    CHECK_THROWS_AS(load_field(tmp.file("f.rcdt")), Error);
}
