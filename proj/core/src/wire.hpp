// Internal little-endian byte packing shared by the binary containers.
#ifndef RCDT_SRC_WIRE_HPP
#define RCDT_SRC_WIRE_HPP

#include <zlib.h>

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "rcdt/errors.hpp"

namespace rcdt::detail {

inline void put_u32(std::vector<unsigned char>& b, std::uint32_t v) {
    b.push_back(static_cast<unsigned char>(v));
    b.push_back(static_cast<unsigned char>(v >> 8));
    b.push_back(static_cast<unsigned char>(v >> 16));
    b.push_back(static_cast<unsigned char>(v >> 24));
}

inline void put_f64(std::vector<unsigned char>& b, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    for (int i = 0; i < 8; ++i)
        b.push_back(static_cast<unsigned char>(bits >> (8 * i)));
}

struct Reader {
    const std::vector<unsigned char>& bytes;
    std::size_t pos = 0;

    void need(std::size_t n) const {
        if (pos + n > bytes.size())
            throw_error(errc::corrupt_file, "file ends mid-record");
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = std::uint32_t(bytes[pos]) |
                          (std::uint32_t(bytes[pos + 1]) << 8) |
                          (std::uint32_t(bytes[pos + 2]) << 16) |
                          (std::uint32_t(bytes[pos + 3]) << 24);
        pos += 4;
        return v;
    }
    double f64() {
        need(8);
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i)
            bits |= std::uint64_t(bytes[pos + i]) << (8 * i);
        pos += 8;
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
};

inline std::uint32_t payload_crc(const std::vector<unsigned char>& bytes,
                                 std::size_t len) {
    return static_cast<std::uint32_t>(
        ::crc32(0L, bytes.data(), static_cast<uInt>(len)));
}

inline std::vector<unsigned char> slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_error(errc::io_failure, "cannot open " + path);
    in.seekg(0, std::ios::end);
    const auto size = in.tellg();
    in.seekg(0, std::ios::beg);
    std::vector<unsigned char> bytes(static_cast<std::size_t>(size));
    in.read(reinterpret_cast<char*>(bytes.data()), size);
    if (!in) throw_error(errc::io_failure, "cannot read " + path);
    return bytes;
}

inline void spill(const std::vector<unsigned char>& bytes,
                  const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw_error(errc::io_failure, "cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw_error(errc::io_failure, "cannot write " + path);
}

} // namespace rcdt::detail

#endif // RCDT_SRC_WIRE_HPP
