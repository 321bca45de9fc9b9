#include "rcdt/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "rcdt/errors.hpp"

namespace rcdt {

namespace {

// Next whitespace-delimited token, skipping '#' comment lines.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
            continue;
        }
        if (!std::isspace(c)) {
            tok.push_back(static_cast<char>(c));
            while ((c = in.peek()) != EOF && !std::isspace(c) && c != '#')
                tok.push_back(static_cast<char>(in.get()));
            return tok;
        }
    }
    throw_error(errc::truncated_file, "PGM header ends early");
}

long parse_long(const std::string& tok) {
    try {
        return std::stol(tok);
    } catch (const std::exception&) {
        throw_error(errc::corrupt_file, "bad PGM header token '" + tok + "'");
    }
}

} // namespace

Eigen::MatrixXd read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_error(errc::io_failure, "cannot open " + path);

    const std::string magic = next_token(in);
    if (magic != "P2" && magic != "P5")
        throw_error(errc::bad_magic, path + " is not a P2/P5 PGM file");
    const long width = parse_long(next_token(in));
    const long height = parse_long(next_token(in));
    const long maxval = parse_long(next_token(in));
    if (width < 1 || height < 1 || maxval < 1 || maxval > 65535)
        throw_error(errc::corrupt_file, "bad PGM dimensions");

    Eigen::MatrixXd img(height, width);
    if (magic == "P2") {
        for (long r = 0; r < height; ++r)
            for (long c = 0; c < width; ++c)
                img(r, c) = static_cast<double>(parse_long(next_token(in)));
    } else {
        // binary payload starts after a single whitespace byte
        const int bytes_per = maxval > 255 ? 2 : 1;
        std::vector<unsigned char> buf(static_cast<std::size_t>(width) * height *
                                       bytes_per);
        in.read(reinterpret_cast<char*>(buf.data()),
                static_cast<std::streamsize>(buf.size()));
        if (!in) throw_error(errc::truncated_file, path + " pixel data ends early");
        std::size_t off = 0;
        for (long r = 0; r < height; ++r)
            for (long c = 0; c < width; ++c) {
                if (bytes_per == 1) {
                    img(r, c) = buf[off++];
                } else {
                    img(r, c) = 256.0 * buf[off] + buf[off + 1]; // big-endian
                    off += 2;
                }
            }
    }
    return img;
}

void write_pgm(const Eigen::MatrixXd& image, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw_error(errc::io_failure, "cannot write " + path);
    const long h = image.rows(), w = image.cols();
    out << "P5\n" << w << " " << h << "\n255\n";
    const double peak = image.maxCoeff();
    const double scale = peak > 0.0 ? 255.0 / peak : 0.0;
    std::vector<unsigned char> buf(static_cast<std::size_t>(w) * h);
    std::size_t off = 0;
    for (long r = 0; r < h; ++r)
        for (long c = 0; c < w; ++c) {
            const double v = std::clamp(image(r, c) * scale, 0.0, 255.0);
            buf[off++] = static_cast<unsigned char>(std::lround(v));
        }
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
    if (!out) throw_error(errc::io_failure, "cannot write " + path);
}

} // namespace rcdt
