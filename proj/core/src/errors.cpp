#include "rcdt/errors.hpp"

namespace rcdt {

const char* errc_name(errc code) noexcept {
    switch (code) {
        case errc::all_zero_image: return "AllZeroImage";
        case errc::non_monotone_cdf: return "NonMonotoneCdf";
        case errc::non_monotone_input: return "NonMonotoneInput";
        case errc::grid_too_small: return "GridTooSmall";
        case errc::dimension_mismatch: return "DimensionMismatch";
        case errc::degenerate_class: return "DegenerateClass";
        case errc::missing_class: return "MissingClass";
        case errc::bad_magic: return "BadMagic";
        case errc::count_mismatch: return "CountMismatch";
        case errc::truncated_file: return "TruncatedFile";
        case errc::support_clipped: return "SupportClipped";
        case errc::insufficient_samples: return "InsufficientSamples";
        case errc::format_version_mismatch: return "FormatVersionMismatch";
        case errc::corrupt_file: return "CorruptFile";
        case errc::empty_test_set: return "EmptyTestSet";
        case errc::overlapping_specs: return "OverlappingSpecs";
        case errc::invalid_argument: return "InvalidArgument";
        case errc::io_failure: return "IoFailure";
    }
    return "UnknownError";
}

int errc_exit_code(errc code) noexcept {
    return 10 + static_cast<int>(code);
}

} // namespace rcdt
