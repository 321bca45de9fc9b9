#include "rcdt/model_io.hpp"

#include <cstring>

#include "rcdt/errors.hpp"
#include "wire.hpp"

namespace rcdt {

namespace {

constexpr char kMagicStem[] = "RCDTNS";
constexpr char kVersion[] = "01";

} // namespace

std::vector<unsigned char> serialize_model(const Model& model) {
    using namespace detail;
    std::vector<unsigned char> b;
    b.insert(b.end(), kMagicStem, kMagicStem + 6);
    b.insert(b.end(), kVersion, kVersion + 2);

    const int m = model.proj.n_offsets();
    const int n = model.proj.n_angles();
    put_u32(b, static_cast<std::uint32_t>(model.num_classes()));
    put_u32(b, static_cast<std::uint32_t>(m));
    put_u32(b, static_cast<std::uint32_t>(n));
    put_u32(b, model.enrich_translation ? 1u : 0u);
    put_f64(b, model.variance_fraction);
    put_f64(b, model.epsilon);
    put_u32(b, static_cast<std::uint32_t>(model.height));
    put_u32(b, static_cast<std::uint32_t>(model.width));
    for (double theta : model.proj.thetas) put_f64(b, theta);
    put_f64(b, model.proj.t_grid.x_min);
    put_f64(b, model.proj.t_grid.x_max);

    for (const ClassBasis& cls : model.classes) {
        put_u32(b, static_cast<std::uint32_t>(cls.class_id));
        put_u32(b, static_cast<std::uint32_t>(cls.rank()));
        for (long j = 0; j < cls.basis.cols(); ++j)
            for (long i = 0; i < cls.basis.rows(); ++i)
                put_f64(b, cls.basis(i, j));
        put_u32(b, static_cast<std::uint32_t>(cls.singular_values.size()));
        for (long i = 0; i < cls.singular_values.size(); ++i)
            put_f64(b, cls.singular_values(i));
    }
    put_u32(b, payload_crc(b, b.size()));
    return b;
}

Model deserialize_model(const std::vector<unsigned char>& bytes) {
    using namespace detail;
    if (bytes.size() < 12)
        throw_error(errc::corrupt_file, "model file too short");
    if (std::memcmp(bytes.data(), kMagicStem, 6) != 0)
        throw_error(errc::corrupt_file, "not a model file (bad magic)");
    if (std::memcmp(bytes.data() + 6, kVersion, 2) != 0)
        throw_error(errc::format_version_mismatch,
                    "model format version is not " + std::string(kVersion));

    Reader r{bytes, 0};
    const std::size_t payload_len = bytes.size() - 4;
    {
        Reader tail{bytes, payload_len};
        if (tail.u32() != payload_crc(bytes, payload_len))
            throw_error(errc::corrupt_file, "model checksum mismatch");
    }
    r.pos = 8;

    const std::uint32_t num_classes = r.u32();
    const std::uint32_t m = r.u32();
    const std::uint32_t n = r.u32();
    const std::uint32_t flags = r.u32();

    Model model;
    model.variance_fraction = r.f64();
    model.epsilon = r.f64();
    model.height = static_cast<int>(r.u32());
    model.width = static_cast<int>(r.u32());
    model.enrich_translation = (flags & 1u) != 0;

    std::vector<double> thetas(n);
    for (std::uint32_t j = 0; j < n; ++j) thetas[j] = r.f64();
    const double t_min = r.f64();
    const double t_max = r.f64();
    model.proj = ProjectionGrid(Grid1D(static_cast<int>(m), t_min, t_max),
                                std::move(thetas));

    model.classes.reserve(num_classes);
    for (std::uint32_t k = 0; k < num_classes; ++k) {
        ClassBasis cls;
        cls.class_id = static_cast<int>(r.u32());
        const std::uint32_t d = r.u32();
        r.need(std::size_t(8) * m * n * d);
        cls.basis.resize(static_cast<long>(m) * n, d);
        for (std::uint32_t j = 0; j < d; ++j)
            for (long i = 0; i < cls.basis.rows(); ++i)
                cls.basis(i, j) = r.f64();
        const std::uint32_t n_sv = r.u32();
        cls.singular_values.resize(n_sv);
        for (std::uint32_t i = 0; i < n_sv; ++i) cls.singular_values(i) = r.f64();
        model.classes.push_back(std::move(cls));
    }
    if (r.pos != payload_len)
        throw_error(errc::corrupt_file, "trailing bytes after last class");
    return model;
}

void save_model(const Model& model, const std::string& path) {
    detail::spill(serialize_model(model), path);
}

Model load_model(const std::string& path) {
    return deserialize_model(detail::slurp(path));
}

} // namespace rcdt
