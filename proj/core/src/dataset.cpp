#include "rcdt/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "rcdt/errors.hpp"
#include "rcdt/rng.hpp"

namespace rcdt {

int LabeledImageSet::num_classes() const {
    int k = 0;
    for (int label : labels) k = std::max(k, label + 1);
    return k;
}

void LabeledImageSet::validate() const {
    if (images.size() != labels.size())
        throw_error(errc::count_mismatch, "images and labels differ in length");
    for (int label : labels)
        if (label < 0)
            throw_error(errc::invalid_argument, "negative class index");
}

namespace {

constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;

std::vector<unsigned char> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw_error(errc::io_failure, "cannot open " + path);
    in.seekg(0, std::ios::end);
    const auto size = in.tellg();
    in.seekg(0, std::ios::beg);
    std::vector<unsigned char> bytes(static_cast<std::size_t>(size));
    in.read(reinterpret_cast<char*>(bytes.data()), size);
    if (!in)
        throw_error(errc::io_failure, "cannot read " + path);
    return bytes;
}

std::uint32_t read_be32(const std::vector<unsigned char>& b, std::size_t off,
                        const std::string& path) {
    if (off + 4 > b.size())
        throw_error(errc::truncated_file, path + " ends inside the header");
    return (std::uint32_t(b[off]) << 24) | (std::uint32_t(b[off + 1]) << 16) |
           (std::uint32_t(b[off + 2]) << 8) | std::uint32_t(b[off + 3]);
}

void write_be32(std::ofstream& out, std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v >> 24),
                                static_cast<unsigned char>(v >> 16),
                                static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

} // namespace

LabeledImageSet read_idx(const std::string& images_path,
                         const std::string& labels_path) {
    const auto ib = read_file(images_path);
    if (read_be32(ib, 0, images_path) != kImagesMagic)
        throw_error(errc::bad_magic, images_path + " is not an IDX image file");
    const std::uint32_t count = read_be32(ib, 4, images_path);
    const std::uint32_t rows = read_be32(ib, 8, images_path);
    const std::uint32_t cols = read_be32(ib, 12, images_path);
    const std::size_t payload = std::size_t(count) * rows * cols;
    if (ib.size() < 16 + payload)
        throw_error(errc::truncated_file, images_path + " is shorter than its header claims");

    const auto lb = read_file(labels_path);
    if (read_be32(lb, 0, labels_path) != kLabelsMagic)
        throw_error(errc::bad_magic, labels_path + " is not an IDX label file");
    const std::uint32_t label_count = read_be32(lb, 4, labels_path);
    if (label_count != count)
        throw_error(errc::count_mismatch, "image count != label count");
    if (lb.size() < 8 + label_count)
        throw_error(errc::truncated_file, labels_path + " is shorter than its header claims");

    LabeledImageSet out;
    out.images.reserve(count);
    out.labels.reserve(count);
    std::size_t off = 16;
    for (std::uint32_t i = 0; i < count; ++i) {
        Eigen::MatrixXd img(rows, cols);
        for (std::uint32_t r = 0; r < rows; ++r)
            for (std::uint32_t c = 0; c < cols; ++c)
                img(r, c) = static_cast<double>(ib[off + std::size_t(r) * cols + c]);
        off += std::size_t(rows) * cols;
        out.images.push_back(std::move(img));
        out.labels.push_back(static_cast<int>(lb[8 + i]));
    }
    return out;
}

void write_idx(const LabeledImageSet& data, const std::string& images_path,
               const std::string& labels_path) {
    data.validate();
    const std::uint32_t count = static_cast<std::uint32_t>(data.images.size());
    const std::uint32_t rows =
        count ? static_cast<std::uint32_t>(data.images.front().rows()) : 0;
    const std::uint32_t cols =
        count ? static_cast<std::uint32_t>(data.images.front().cols()) : 0;

    std::ofstream io(images_path, std::ios::binary);
    if (!io) throw_error(errc::io_failure, "cannot write " + images_path);
    write_be32(io, kImagesMagic);
    write_be32(io, count);
    write_be32(io, rows);
    write_be32(io, cols);
    std::vector<unsigned char> buf;
    for (const auto& img : data.images) {
        if (img.rows() != rows || img.cols() != cols)
            throw_error(errc::dimension_mismatch, "images must share one shape");
        buf.resize(std::size_t(rows) * cols);
        const double peak = img.maxCoeff();
        const double scale = peak > 0.0 ? 255.0 / peak : 0.0;
        for (std::uint32_t r = 0; r < rows; ++r)
            for (std::uint32_t c = 0; c < cols; ++c) {
                const double v = std::clamp(img(r, c) * scale, 0.0, 255.0);
                buf[std::size_t(r) * cols + c] =
                    static_cast<unsigned char>(std::lround(v));
            }
        io.write(reinterpret_cast<const char*>(buf.data()),
                 static_cast<std::streamsize>(buf.size()));
    }
    if (!io) throw_error(errc::io_failure, "cannot write " + images_path);

    std::ofstream lo(labels_path, std::ios::binary);
    if (!lo) throw_error(errc::io_failure, "cannot write " + labels_path);
    write_be32(lo, kLabelsMagic);
    write_be32(lo, count);
    for (int label : data.labels) {
        const unsigned char b = static_cast<unsigned char>(label);
        lo.write(reinterpret_cast<const char*>(&b), 1);
    }
    if (!lo) throw_error(errc::io_failure, "cannot write " + labels_path);
}

void ConfoundSpec::validate() const {
    if (min_px < 0.0 || max_px < min_px)
        throw_error(errc::invalid_argument, "need 0 <= min_px <= max_px");
    if (!(alpha_min > 0.0) || alpha_max < alpha_min)
        throw_error(errc::invalid_argument, "need 0 < alpha_min <= alpha_max");
}

bool confound_specs_overlap(const ConfoundSpec& a, const ConfoundSpec& b) {
    const bool translation =
        a.max_px > b.min_px && b.max_px > a.min_px;
    const bool scale =
        a.alpha_max > b.alpha_min && b.alpha_max > a.alpha_min;
    return translation && scale;
}

namespace {

inline double bilinear_sample(const Eigen::MatrixXd& img, double row, double col) {
    const int h = static_cast<int>(img.rows());
    const int w = static_cast<int>(img.cols());
    if (row <= -1.0 || col <= -1.0 || row >= h || col >= w) return 0.0;
    const int r0 = static_cast<int>(std::floor(row));
    const int c0 = static_cast<int>(std::floor(col));
    const double wr = row - r0;
    const double wc = col - c0;
    auto at = [&](int r, int c) -> double {
        if (r < 0 || c < 0 || r >= h || c >= w) return 0.0;
        return img(r, c);
    };
    return (1.0 - wr) * ((1.0 - wc) * at(r0, c0) + wc * at(r0, c0 + 1)) +
           wr * ((1.0 - wc) * at(r0 + 1, c0) + wc * at(r0 + 1, c0 + 1));
}

} // namespace

Eigen::MatrixXd apply_confound(const Eigen::MatrixXd& image, double dx,
                               double dy, double alpha, int canvas_h,
                               int canvas_w) {
    if (!(alpha > 0.0))
        throw_error(errc::invalid_argument, "scale factor must be > 0");
    if (canvas_h < 1 || canvas_w < 1)
        throw_error(errc::invalid_argument, "canvas must be positive");
    const double mass_in = image.sum();
    if (!(mass_in > 0.0))
        throw_error(errc::all_zero_image, "confound input has no mass");

    const double cy_in = 0.5 * (image.rows() - 1);
    const double cx_in = 0.5 * (image.cols() - 1);
    const double cy_out = 0.5 * (canvas_h - 1);
    const double cx_out = 0.5 * (canvas_w - 1);

    auto source_value = [&](double out_row, double out_col) {
        const double r = (out_row - cy_out - dy) / alpha + cy_in;
        const double c = (out_col - cx_out - dx) / alpha + cx_in;
        return bilinear_sample(image, r, c) / (alpha * alpha);
    };

    // Mass is accounted over an extended lattice that contains the mapped
    // support, so clipping is measured exactly rather than inferred.
    const double ry0 = alpha * (0.0 - cy_in) + cy_out + dy;
    const double ry1 = alpha * (image.rows() - 1 - cy_in) + cy_out + dy;
    const double rx0 = alpha * (0.0 - cx_in) + cx_out + dx;
    const double rx1 = alpha * (image.cols() - 1 - cx_in) + cx_out + dx;
    const int ext_r0 = std::min(0, static_cast<int>(std::floor(ry0)) - 2);
    const int ext_r1 = std::max(canvas_h - 1, static_cast<int>(std::ceil(ry1)) + 2);
    const int ext_c0 = std::min(0, static_cast<int>(std::floor(rx0)) - 2);
    const int ext_c1 = std::max(canvas_w - 1, static_cast<int>(std::ceil(rx1)) + 2);

    Eigen::MatrixXd out(canvas_h, canvas_w);
    double total_ext = 0.0;
    double total_in = 0.0;
    for (int r = ext_r0; r <= ext_r1; ++r) {
        for (int c = ext_c0; c <= ext_c1; ++c) {
            const double v = source_value(r, c);
            total_ext += v;
            if (r >= 0 && r < canvas_h && c >= 0 && c < canvas_w) {
                out(r, c) = v;
                total_in += v;
            }
        }
    }
    if (!(total_ext > 0.0))
        throw_error(errc::all_zero_image, "confound output has no mass");
    const double lost = 1.0 - total_in / total_ext;
    if (lost > 1e-3)
        throw_error(errc::support_clipped,
                    "confound would push " + std::to_string(lost * 100.0) +
                        "% of the mass off the canvas");

    out *= mass_in / total_in;
    return out;
}

LabeledImageSet generate_synthetic_dataset(
    const std::vector<Eigen::MatrixXd>& templates, const ConfoundSpec& spec,
    int n_per_class, int canvas_h, int canvas_w) {
    spec.validate();
    if (templates.empty())
        throw_error(errc::invalid_argument, "need at least one template");
    if (n_per_class < 1)
        throw_error(errc::invalid_argument, "n_per_class must be >= 1");

    const double two_pi = 6.283185307179586;
    LabeledImageSet out;
    out.images.reserve(templates.size() * n_per_class);
    out.labels.reserve(templates.size() * n_per_class);
    for (std::size_t k = 0; k < templates.size(); ++k) {
        Rng rng(spec.rng_seed, static_cast<std::uint64_t>(k), 0x7263647453594eULL);
        for (int i = 0; i < n_per_class; ++i) {
            const double phi = rng.uniform(0.0, two_pi);
            const double rho = rng.uniform(spec.min_px, spec.max_px);
            const double alpha = rng.uniform(spec.alpha_min, spec.alpha_max);
            out.images.push_back(apply_confound(templates[k], rho * std::cos(phi),
                                                rho * std::sin(phi), alpha,
                                                canvas_h, canvas_w));
            out.labels.push_back(static_cast<int>(k));
        }
    }
    return out;
}

LabeledImageSet generate_confounded_dataset(const LabeledImageSet& pool,
                                            const ConfoundSpec& spec,
                                            int n_per_class, int canvas_h,
                                            int canvas_w) {
    spec.validate();
    pool.validate();
    if (n_per_class < 1)
        throw_error(errc::invalid_argument, "n_per_class must be >= 1");
    const int num_classes = pool.num_classes();
    std::vector<std::vector<std::size_t>> by_class(num_classes);
    for (std::size_t i = 0; i < pool.labels.size(); ++i)
        by_class[pool.labels[i]].push_back(i);

    const double two_pi = 6.283185307179586;
    LabeledImageSet out;
    for (int k = 0; k < num_classes; ++k) {
        if (by_class[k].empty())
            throw_error(errc::missing_class,
                        "class " + std::to_string(k) + " has no template");
        Rng rng(spec.rng_seed, static_cast<std::uint64_t>(k), 0x7263647453594eULL);
        for (int i = 0; i < n_per_class; ++i) {
            const std::size_t t = by_class[k][static_cast<std::size_t>(
                rng.uniform_index(by_class[k].size()))];
            const double phi = rng.uniform(0.0, two_pi);
            const double rho = rng.uniform(spec.min_px, spec.max_px);
            const double alpha = rng.uniform(spec.alpha_min, spec.alpha_max);
            out.images.push_back(apply_confound(pool.images[t], rho * std::cos(phi),
                                                rho * std::sin(phi), alpha,
                                                canvas_h, canvas_w));
            out.labels.push_back(k);
        }
    }
    return out;
}

namespace {

struct Blob {
    double x, y, sx, sy, amp;
};

// Ten structurally distinct centered shapes, parameterized in units of
// size/28 so templates scale with the requested raster.
std::vector<std::vector<Blob>> shape_table() {
    std::vector<std::vector<Blob>> shapes;
    shapes.push_back({{0, 0, 3.0, 3.0, 1.0}});                       // disk
    shapes.push_back({{0, 0, 6.5, 1.7, 1.0}});                       // h-bar
    shapes.push_back({{0, 0, 1.7, 6.5, 1.0}});                       // v-bar
    shapes.push_back({{-4.2, 0, 2.0, 2.0, 1.0}, {4.2, 0, 2.0, 2.0, 1.0}});
    shapes.push_back({{0, -4.2, 2.0, 2.0, 1.0}, {0, 4.2, 2.0, 2.0, 1.0}});
    shapes.push_back({{-3.6, -3.6, 2.0, 2.0, 1.0}, {3.6, 3.6, 2.0, 2.0, 1.0}});
    {
        std::vector<Blob> ring;
        for (int i = 0; i < 8; ++i) {
            const double a = i * 6.283185307179586 / 8.0;
            ring.push_back({5.6 * std::cos(a), 5.6 * std::sin(a), 1.5, 1.5, 1.0});
        }
        shapes.push_back(ring);
    }
    shapes.push_back({{-4, -4, 1.8, 1.8, 1.0},
                      {-4, 3, 1.8, 1.8, 1.0},
                      {3, -4, 1.8, 1.8, 1.0}});                      // corner
    shapes.push_back({{0, 0, 6.0, 1.4, 1.0}, {0, 0, 1.4, 6.0, 1.0}}); // cross
    shapes.push_back({{-2.5, 0, 3.2, 3.2, 1.0}, {4.5, 0, 1.4, 1.4, 0.8}});
    return shapes;
}

Eigen::MatrixXd render_blobs(const std::vector<Blob>& blobs, int size) {
    const double unit = size / 28.0;
    const double c = 0.5 * (size - 1);
    Eigen::MatrixXd img = Eigen::MatrixXd::Zero(size, size);
    for (const Blob& b : blobs) {
        const double bx = c + b.x * unit;
        const double by = c + b.y * unit;
        const double sx = b.sx * unit;
        const double sy = b.sy * unit;
        for (int r = 0; r < size; ++r) {
            const double dy = (r - by) / sy;
            for (int col = 0; col < size; ++col) {
                const double dxn = (col - bx) / sx;
                img(r, col) += b.amp * std::exp(-0.5 * (dxn * dxn + dy * dy));
            }
        }
    }
    return img;
}

} // namespace

std::vector<Eigen::MatrixXd> synthetic_templates(int k, int size) {
    const auto shapes = shape_table();
    if (k < 1 || k > static_cast<int>(shapes.size()))
        throw_error(errc::invalid_argument,
                    "synthetic template library holds 1..10 classes");
    if (size < 8)
        throw_error(errc::invalid_argument, "template raster too small");
    std::vector<Eigen::MatrixXd> out;
    out.reserve(k);
    for (int i = 0; i < k; ++i) out.push_back(render_blobs(shapes[i], size));
    return out;
}

LabeledImageSet synthetic_labeled_set(int k, int n_per_class, int template_size,
                                      int canvas, const ConfoundSpec& spec,
                                      double shape_jitter, std::uint64_t seed) {
    spec.validate();
    const auto shapes = shape_table();
    if (k < 1 || k > static_cast<int>(shapes.size()))
        throw_error(errc::invalid_argument, "at most 10 synthetic classes");
    if (n_per_class < 1)
        throw_error(errc::invalid_argument, "n_per_class must be >= 1");

    const double two_pi = 6.283185307179586;
    LabeledImageSet out;
    out.images.reserve(static_cast<std::size_t>(k) * n_per_class);
    out.labels.reserve(static_cast<std::size_t>(k) * n_per_class);
    for (int cls = 0; cls < k; ++cls) {
        Rng rng(seed, static_cast<std::uint64_t>(cls), 0x6a69747465727ULL);
        for (int i = 0; i < n_per_class; ++i) {
            std::vector<Blob> blobs = shapes[cls];
            for (Blob& b : blobs) {
                b.x += shape_jitter * rng.normal();
                b.y += shape_jitter * rng.normal();
                b.sx *= std::max(0.4, 1.0 + 0.08 * shape_jitter * rng.normal());
                b.sy *= std::max(0.4, 1.0 + 0.08 * shape_jitter * rng.normal());
                b.amp *= std::max(0.1, 1.0 + 0.10 * shape_jitter * rng.normal());
            }
            const Eigen::MatrixXd tmpl = render_blobs(blobs, template_size);
            const double phi = rng.uniform(0.0, two_pi);
            const double rho = rng.uniform(spec.min_px, spec.max_px);
            const double alpha = rng.uniform(spec.alpha_min, spec.alpha_max);
            out.images.push_back(apply_confound(tmpl, rho * std::cos(phi),
                                                rho * std::sin(phi), alpha,
                                                canvas, canvas));
            out.labels.push_back(cls);
        }
    }
    return out;
}

void SplitPlan::validate() const {
    if (sizes_per_class.empty())
        throw_error(errc::invalid_argument, "empty size list");
    for (std::size_t i = 0; i < sizes_per_class.size(); ++i) {
        if (sizes_per_class[i] < 1)
            throw_error(errc::invalid_argument, "split sizes must be positive");
        if (i > 0 && sizes_per_class[i] <= sizes_per_class[i - 1])
            throw_error(errc::invalid_argument,
                        "split sizes must be strictly increasing");
    }
    if (repeats < 1)
        throw_error(errc::invalid_argument, "repeats must be >= 1");
}

std::vector<Split> sample_splits(const LabeledImageSet& data,
                                 const SplitPlan& plan) {
    plan.validate();
    data.validate();
    const int num_classes = data.num_classes();
    std::vector<std::vector<int>> by_class(num_classes);
    for (std::size_t i = 0; i < data.labels.size(); ++i)
        by_class[data.labels[i]].push_back(static_cast<int>(i));

    const int max_size = plan.sizes_per_class.back();
    for (int k = 0; k < num_classes; ++k)
        if (static_cast<int>(by_class[k].size()) < max_size)
            throw_error(errc::insufficient_samples,
                        "class " + std::to_string(k) + " has " +
                            std::to_string(by_class[k].size()) + " samples, " +
                            std::to_string(max_size) + " required");

    std::vector<Split> out;
    out.reserve(plan.sizes_per_class.size() * plan.repeats);
    for (int size : plan.sizes_per_class) {
        for (int rep = 0; rep < plan.repeats; ++rep) {
            Rng rng(plan.rng_seed, static_cast<std::uint64_t>(size),
                    static_cast<std::uint64_t>(rep));
            Split split{size, rep, {}};
            split.indices.reserve(static_cast<std::size_t>(size) * num_classes);
            for (int k = 0; k < num_classes; ++k) {
                std::vector<int> pool = by_class[k];
                // partial Fisher-Yates: only the first `size` slots are needed
                for (int i = 0; i < size; ++i) {
                    const std::size_t j =
                        i + static_cast<std::size_t>(
                                rng.uniform_index(pool.size() - i));
                    std::swap(pool[i], pool[j]);
                    split.indices.push_back(pool[i]);
                }
            }
            out.push_back(std::move(split));
        }
    }
    return out;
}

} // namespace rcdt
