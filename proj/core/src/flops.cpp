#include "rcdt/flops.hpp"

#include "rcdt/errors.hpp"

namespace rcdt {

// Cost constants: one bilinear sample is 4 weight ops + 4 multiplies +
// 3 adds + 2 position updates = 13 flops; one inverse-CDF interpolation
// step is ~9 flops (bracket compare, weight, blend).

double transform_flops(int m, int n_angles, int height, int width) {
    const double mm = static_cast<double>(m);
    const double normalize_image = 3.0 * height * width;
    const double radon = static_cast<double>(n_angles) *
                         (mm * mm * 13.0 + mm * mm + 3.0 * mm);
    const double cdt_per_angle = 15.0 * mm; // cumsum + floor + interpolation
    return normalize_image + radon + n_angles * cdt_per_angle;
}

double svd_flops(long rows, long cols) {
    const double r = static_cast<double>(rows);
    const double c = static_cast<double>(cols);
    // Gram-route orthonormalization on the smaller side: form G, decompose,
    // assemble and re-orthonormalize the basis.
    if (cols <= rows)
        return 2.0 * r * c * c + (14.0 / 3.0) * c * c * c + 4.0 * r * c * c;
    return 2.0 * c * r * r + (14.0 / 3.0) * r * r * r;
}

FlopCounts count_flops(const FlopConfig& config) {
    if (config.m < 1 || config.n_angles < 1 || config.height < 1 ||
        config.width < 1)
        throw_error(errc::invalid_argument, "bad transform dimensions");
    if (config.ranks.size() != config.train_per_class.size())
        throw_error(errc::invalid_argument,
                    "need one retained rank per class");

    const double mn = static_cast<double>(config.m) * config.n_angles;
    const double per_image =
        transform_flops(config.m, config.n_angles, config.height, config.width);

    FlopCounts out;
    for (std::size_t k = 0; k < config.train_per_class.size(); ++k) {
        const long n_k = config.train_per_class[k];
        if (n_k < 1)
            throw_error(errc::invalid_argument, "class sizes must be positive");
        out.transform_train += per_image * static_cast<double>(n_k);
        out.enrich_train += 8.0 * mn * static_cast<double>(n_k);
        out.svd_train += svd_flops(static_cast<long>(mn), n_k);
    }
    out.train_total = out.transform_train + out.enrich_train + out.svd_train;

    out.test_per_image = per_image;
    for (std::size_t k = 0; k < config.ranks.size(); ++k)
        out.test_per_image += 2.0 * mn * config.ranks[k] + 2.0 * config.ranks[k];
    out.test_per_image += static_cast<double>(config.ranks.size()); // argmin
    out.test_total = out.test_per_image * static_cast<double>(config.n_test);
    return out;
}

} // namespace rcdt
