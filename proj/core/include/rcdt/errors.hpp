#ifndef RCDT_ERRORS_HPP
#define RCDT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rcdt {

enum class errc {
    all_zero_image,
    non_monotone_cdf,
    non_monotone_input,
    grid_too_small,
    dimension_mismatch,
    degenerate_class,
    missing_class,
    bad_magic,
    count_mismatch,
    truncated_file,
    support_clipped,
    insufficient_samples,
    format_version_mismatch,
    corrupt_file,
    empty_test_set,
    overlapping_specs,
    invalid_argument,
    io_failure,
};

/// Library-wide exception type; every failure carries one errc so the CLI
/// can map error classes to distinct exit codes.
class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

const char* errc_name(errc code) noexcept;

/// Stable process exit code for an error class (10 + enum value).
int errc_exit_code(errc code) noexcept;

[[noreturn]] inline void throw_error(errc code, const std::string& message) {
    throw Error(code, std::string(errc_name(code)) + ": " + message);
}

} // namespace rcdt

#endif // RCDT_ERRORS_HPP
