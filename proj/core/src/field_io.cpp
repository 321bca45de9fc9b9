#include "rcdt/field_io.hpp"

#include <cstring>

#include "rcdt/errors.hpp"
#include "wire.hpp"

namespace rcdt {

namespace {
constexpr char kMagic[] = "RCDTFLD1";
}

void save_field(const RcdtField& field, const std::string& path) {
    using namespace detail;
    std::vector<unsigned char> b;
    b.insert(b.end(), kMagic, kMagic + 8);
    const int m = field.proj.n_offsets();
    const int n = field.proj.n_angles();
    put_u32(b, static_cast<std::uint32_t>(m));
    put_u32(b, static_cast<std::uint32_t>(n));
    put_f64(b, field.proj.t_grid.x_min);
    put_f64(b, field.proj.t_grid.x_max);
    for (double theta : field.proj.thetas) put_f64(b, theta);
    for (long j = 0; j < field.values.cols(); ++j)
        for (long i = 0; i < field.values.rows(); ++i)
            put_f64(b, field.values(i, j));
    put_u32(b, payload_crc(b, b.size()));
    spill(b, path);
}

RcdtField load_field(const std::string& path) {
    using namespace detail;
    const std::vector<unsigned char> bytes = slurp(path);
    if (bytes.size() < 12 || std::memcmp(bytes.data(), kMagic, 8) != 0)
        throw_error(errc::corrupt_file, "not an R-CDT field file");
    const std::size_t payload_len = bytes.size() - 4;
    {
        Reader tail{bytes, payload_len};
        if (tail.u32() != payload_crc(bytes, payload_len))
            throw_error(errc::corrupt_file, "field checksum mismatch");
    }

    Reader r{bytes, 8};
    const std::uint32_t m = r.u32();
    const std::uint32_t n = r.u32();
    const double t_min = r.f64();
    const double t_max = r.f64();
    std::vector<double> thetas(n);
    for (std::uint32_t j = 0; j < n; ++j) thetas[j] = r.f64();

    RcdtField field;
    field.proj = ProjectionGrid(Grid1D(static_cast<int>(m), t_min, t_max),
                                std::move(thetas));
    field.values.resize(m, n);
    for (std::uint32_t j = 0; j < n; ++j)
        for (std::uint32_t i = 0; i < m; ++i) field.values(i, j) = r.f64();
    if (r.pos != payload_len)
        throw_error(errc::corrupt_file, "trailing bytes after field values");
    return field;
}

} // namespace rcdt
